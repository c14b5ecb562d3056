#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "strwave/analytic.hpp"

namespace strwave {

enum class BoundaryCondition { Periodic, FixedEnds };
enum class Scheme { SourceSplit, VariableDensity };
enum class PotentialProfile { None, Harmonic, CosineLattice };

struct Grid {
    double L = 1.0;
    int n = 256;
    BoundaryCondition bc = BoundaryCondition::Periodic;

    double dx() const { return L / n; }
    double node(int j) const { return j * dx(); }
    void validate() const;
};

struct FieldState {
    std::vector<double> u;  // displacement per node
    std::vector<double> v;  // du/dt per node
};

struct MassletState {
    double x_p = 0.0;
    double vx_p = 0.0;
};

/// External longitudinal potential V(x) acting on the bead only.
/// Harmonic: amplitude*(x-x0)^2. CosineLattice: amplitude*cos(2*pi*(x-x0)/period).
struct ExternalPotential {
    PotentialProfile profile = PotentialProfile::None;
    double amplitude = 0.0;
    double x0 = 0.0;
    double period = 1.0;

    double gradient(double x) const;
};

struct SimConfig {
    PhysicalParams params;
    Grid grid;
    double dt = 0.0;          // if 0, derived from cfl_target
    double t_end = 1.0;
    double cfl_target = 0.5;  // dt*c/dx <= cfl_target <= 0.9
    int kernel_width = 1;     // support spans (kernel_width+1)*kernel_scale nodes
    // Kernel stretched over kernel_scale cells. With kernel_scale fixed the
    // regularization width shrinks with dx; scaling it proportionally to n
    // keeps the physical width fixed, which makes scattering runs converge
    // (the regularized kink is then resolved by the grid).
    int kernel_scale = 1;
    Scheme scheme = Scheme::SourceSplit;
    // Paper-style alternation: advance the field with the bead frozen, then
    // the bead against the updated field. First order in the coupling.
    bool alternating_update = false;
    ExternalPotential potential;
    int output_stride = 16;

    double step_size() const;
    void validate() const;
};

/// Regularized delta weights: node index, W_j with sum(W_j) = 1 (exact for
/// any integer kernel_scale), and the derivatives of W_j with respect to
/// the bead position (1/dx factors included). Deposit density at node j is
/// W_j/dx so that sum * dx integrates to 1.
struct KernelWeights {
    std::vector<int> node;
    std::vector<double> w;
    std::vector<double> wp;   // dW_j/dx_p
    std::vector<double> wpp;  // d2W_j/dx_p2 (zero a.e. for the hat)
    int count = 0;
};

KernelWeights deposit_kernel(double x_p, const Grid& grid, int kernel_width,
                             int kernel_scale = 1);

/// Bead-side probes. Spatial derivatives come from the kernel's own shape
/// (sum W' u, sum W'' u), so they are exactly the derivatives of the
/// interpolated constraint z(x_p) = sum W_j(x_p) u_j. uxx_grid probes the
/// discrete Laplacian instead (sum W D2u), which is what the field equation
/// feeds back through the kernel.
struct ProbedField {
    double u = 0.0;         // z = sum W u
    double ux = 0.0;        // dz/dx_p = sum W' u
    double ut = 0.0;        // sum W v
    double utx = 0.0;       // sum W' v
    double uxx = 0.0;       // sum W'' u
    double uxx_grid = 0.0;  // sum W D2u
};

ProbedField interpolate(const FieldState& field, double x_p, const Grid& grid,
                        int kernel_width, int kernel_scale = 1);

struct CoupledState {
    FieldState field;
    MassletState bead;
};

/// Constraint force on the bead, closed from the material acceleration of
/// the interpolated constraint z = sum W_j(x_p) u_j:
/// N = m (a_mat + omega_p^2 z - s V'/m) / (1 + s^2 + m/lambda * sum(W^2)/dx),
/// the last denominator term being the kernel's instantaneous self-coupling
/// through the field equation. Together with the deposit -(N/lambda) W_j/dx
/// and the bead equation m x'' = -s N - V', this closure descends from a
/// single discrete Lagrangian and conserves the matching discrete energy.
double normal_force(const CoupledState& state, const SimConfig& config);

/// Independent estimate of N from the slope jump across the kernel support,
/// N = T (du/dx|+ - du/dx|-). Unavailable near a fixed boundary.
std::optional<double> kink_force_estimate(const CoupledState& state,
                                          const SimConfig& config);

/// out[j] = c2 * centered second difference of u, with the grid's bc.
void laplacian_times_c2(const std::vector<double>& u, const Grid& grid,
                        double c2, std::vector<double>& out);

struct StateDerivative {
    std::vector<double> du;
    std::vector<double> dv;
    double dx_p = 0.0;
    double dvx_p = 0.0;
};

void rhs(const CoupledState& state, double t, const SimConfig& config,
         StateDerivative& out);

CoupledState step_rk4(const CoupledState& state, double t, double dt,
                      const SimConfig& config);

/// RK4 step of the bare wave equation (no bead, no source).
void step_rk4_free_field(FieldState& field, const Grid& grid, double c2,
                         double dt);

CoupledState init_from_analytic(const TransparencySolution& sol,
                                const SimConfig& config);

struct TrajectorySample {
    double t, x_p, vx_p, z_p, N, Ma;
};

struct FieldSnapshot {
    double t;
    std::vector<double> u;
    std::vector<double> v;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double N = 0.0;
    double E_field = 0.0;
    double E_kin = 0.0;    // bead translational
    double E_clock = 0.0;  // bead transverse + spring
    double P_field = 0.0;
    double P_particle = 0.0;
    double Ma = 0.0;
    double constraint_residual = 0.0;  // tripwire; zero by construction
    std::optional<double> phase_lock_error;
};

struct RunOutput {
    std::vector<TrajectorySample> trajectory;   // every step
    std::vector<FieldSnapshot> snapshots;       // every output stride
    std::vector<DiagnosticsRecord> diagnostics; // every output stride
    bool aborted = false;
    std::string abort_reason;
    CoupledState final_state;
    double t_final = 0.0;
};

RunOutput run(const SimConfig& config, const CoupledState& init,
              const TransparencySolution* reference = nullptr);

}  // namespace strwave
