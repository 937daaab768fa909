#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pathint/model_file.hpp"
#include "pathint/oracles.hpp"
#include "pathint/pricing.hpp"
#include "pathint/report.hpp"

namespace pathint {

/// Numeric knobs shared by the subcommands.
struct Knobs {
    std::size_t quad_nodes = 64;
    std::size_t grid_points = 0;
    McConfig mc{200000, 200, 20160817, true};
    std::size_t lattice_slices = 64;
    std::size_t pde_nz = 0;  ///< 0 keeps the default grid
    std::size_t pde_nt = 0;
};

/// Prices with one method, or throws DomainError when the model family
/// does not support it.
PriceResult price_with(const AnyModel& model, Method method, const PriceQuery& q, const Knobs& k);

/// Methods applicable to a model family, in a fixed order.
std::vector<Method> methods_for(const AnyModel& model);

/// Kernel, fluctuation and normalization checks, plus cross-method checks
/// on the given model when one is supplied.
std::vector<CheckRow> golden_suite(const std::optional<ModelSpec>& model, const PriceQuery& q,
                                   const Knobs& k);

/// Entry point: returns the process exit status (0 ok, 1 failed checks or
/// numerical failure, 2 bad input).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pathint
