#pragma once

namespace pathint {

/// Serial runs the reference loop; parallel runs the OpenMP kernel. Both
/// produce bit-identical results.
enum class Execution { serial, parallel };

/// Worker count for OpenMP kernels: the OpenMP default, capped by the
/// PATHINT_THREADS environment variable when it is set to a positive integer.
int default_workers();

}  // namespace pathint
