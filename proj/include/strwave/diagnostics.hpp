#pragma once
#include <utility>
#include <vector>

#include "strwave/solver.hpp"

namespace strwave {

struct EnergyMomentumDensities {
    std::vector<double> energy;       // epsilon per node
    std::vector<double> momentum;     // g_x per node
    std::vector<double> energy_flux;  // S_x = c^2 g_x
    std::vector<double> stress;       // T_xx = epsilon
};

EnergyMomentumDensities energy_momentum_densities(const FieldState& field,
                                                  const Grid& grid,
                                                  const PhysicalParams& params);

struct BeadEnergies {
    double translational;  // m vx^2 / 2
    double clock;          // m (zdot^2 + omega_p^2 z^2) / 2
};

BeadEnergies bead_energies(const CoupledState& state, const SimConfig& config);

/// (E_total, P_total) with the midpoint-rule field integrals.
std::pair<double, double> global_invariants(const CoupledState& state,
                                            const SimConfig& config);

struct TransparencyResidual {
    double max_abs_N_normalized;  // max|N| / (m omega_p^2 A)
    double velocity_drift;        // relative when vx(0) != 0, absolute otherwise
};

TransparencyResidual transparency_residual(const RunOutput& out,
                                           const PhysicalParams& params,
                                           const TransparencySolution& ref);

/// Max over trajectory samples of the wrapped carrier-phase error
/// |S(t, x_p(t)) - (clock_pulsation t + phi)|, in radians.
double phase_lock_error(const RunOutput& out, const TransparencySolution& ref);

struct ConvergenceLevel {
    double h;      // dx or dt at this level
    double error;
};

struct ConvergenceResult {
    double order = 0.0;
    bool monotone = false;
    std::vector<ConvergenceLevel> levels;
};

/// Error of the simulated bead trajectory against the analytic one at
/// successively halved dx (dt follows via the CFL target). Least-squares
/// slope on log-log.
ConvergenceResult spatial_convergence_study(const SimConfig& base,
                                            const TransparencySolution& ref,
                                            int levels);

/// Free-field single-mode test at fixed dx and halved dt, measured against
/// the exact flow of the semi-discrete system so no spatial floor enters.
ConvergenceResult temporal_convergence_study(const Grid& grid,
                                             const PhysicalParams& params,
                                             int mode, double t_end,
                                             int levels);

}  // namespace strwave
