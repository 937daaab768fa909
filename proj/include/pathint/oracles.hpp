#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathint/classical.hpp"
#include "pathint/models.hpp"
#include "pathint/parallel.hpp"
#include "pathint/pricing.hpp"

namespace pathint {

// ------------------------------------------------------------ Monte Carlo

struct McConfig {
    std::size_t n_paths = 100000;
    std::size_t n_steps = 200;
    std::uint64_t seed = 20160817;
    bool antithetic = true;

    void validate() const;
};

struct McRunOptions {
    Execution execution = Execution::parallel;
    int workers = 0;  ///< 0 uses default_workers()
};

/// Risk-neutral simulation of the short rate; trapezoid discounting.
/// Constant-coefficient curves use exact Gaussian transitions, otherwise Euler.
/// Results depend only on the seed, never on the number of workers.
PriceResult mc_price(const HullWhiteParams& p, const PriceQuery& q, const McConfig& c,
                     const McRunOptions& run = {});

/// Simulates the OU state exactly and maps through r0 f(X, t). Several state
/// roots are averaged, each with its own n_paths.
PriceResult mc_price(const MappedModel& m, const PriceQuery& q, const McConfig& c,
                     const McRunOptions& run = {});

// ---------------------------------------------------------------- lattice

struct LatticeConfig {
    std::size_t n_time_slices = 128;
    double x_min = -8.0;
    double x_max = 8.0;
    std::size_t n_space = 1001;

    void validate() const;
};

struct LatticeResult {
    double value = 0.0;
    std::vector<std::string> warnings;
};

/// Discretized functional integral <exp(-int [rho dx + V dt])> over Brownian
/// paths from x0, evaluated by transfer matrices. V and rho are taken at
/// the earlier point of each slice. A fixed endpoint returns the density at
/// xf; std::nullopt integrates over the final slice. Time-homogeneous
/// weights let the transfer matrix be built once.
LatticeResult lattice_expectation(const std::optional<DriftWeight>& rho, const ScalarField& V,
                                  double x0, double t0, std::optional<double> xf, double tf,
                                  const LatticeConfig& c, bool time_homogeneous = false);

/// Two-level Richardson extrapolation of a first-order sequence at N, 2N, 4N.
double richardson(double v_n, double v_2n, double v_4n);

/// Lattice at N, 2N and 4N slices, extrapolated.
LatticeResult lattice_expectation_extrapolated(const std::optional<DriftWeight>& rho,
                                               const ScalarField& V, double x0, double t0,
                                               std::optional<double> xf, double tf,
                                               const LatticeConfig& c,
                                               bool time_homogeneous = false);

/// Bond price for r = V(W, t) from the lattice, averaged over the roots of V(x, t) = z.
PriceResult lattice_price(const PotentialModel& pm, const PriceQuery& q, const LatticeConfig& c,
                          bool extrapolate = true);

/// Default grid: x0 +/- 10 sqrt(tf - t0) plus a margin.
LatticeConfig default_lattice_config(double x0, double t0, double tf, std::size_t n_time_slices);

// -------------------------------------------------------------------- PDE

enum class PdeScheme { implicit, crank_nicolson };

struct PdeConfig {
    double z_min = 0.0;
    double z_max = 0.2;
    std::size_t n_z = 801;
    std::size_t n_t = 800;
    PdeScheme scheme = PdeScheme::crank_nicolson;

    void validate() const;
};

/// Grid covering z, the long-run level and eight standard deviations.
PdeConfig default_pde_config(const HullWhiteParams& p, const PriceQuery& q);
PdeConfig default_pde_config(const MappedModel& m, const PriceQuery& q);

/// Backward finite differences for nu v_z + v_t + sigma^2 v_zz / 2 - z v = 0.
/// The queried z is placed on a grid node (the grid is shifted if needed).
PriceResult pde_price(const HullWhiteParams& p, const PriceQuery& q, const PdeConfig& c);

/// Mapped models through the induced short-rate SDE: monotone maps invert
/// f directly; the quadratic map uses its square-root diffusion, which is
/// Markov in r only when theta + alpha b / (2a) = 0.
PriceResult pde_price(const MappedModel& m, const PriceQuery& q, const PdeConfig& c);

}  // namespace pathint
