#pragma once
#include <optional>
#include <stdexcept>
#include <string>

namespace strwave {

/// String and bead material constants. c and k_p are derived on construction
/// and stored so that c*c*lambda == tension holds exactly as written.
struct PhysicalParams {
    double lambda  = 1.0;   // linear density [mass/length]
    double tension = 1.0;   // [force]
    double c       = 1.0;   // sound speed, sqrt(tension/lambda)
    double m_p     = 0.1;   // bead mass
    double omega_p = 1.0;   // spring pulsation of the bead clock
    double k_p     = 0.1;   // stiffness, m_p * omega_p^2

    static PhysicalParams make(double lambda, double tension, double m_p,
                               double omega_p);
};

enum class Regime { Bradyon, Tachyon, Surfer };

const char* regime_name(Regime r);

/// Closed-form traveling solution with a transparent (force-free) bead.
/// For Bradyon/Tachyon the field is an amplitude-modulated product
/// B cos(S) cos(Phi); for Surfer it is a single monochromatic pulse.
struct TransparencySolution {
    Regime regime = Regime::Bradyon;
    double B           = 0.0;  // field amplitude
    double omega_prime = 0.0;  // co-moving pulsation
    double eta         = 0.0;  // carrier phase offset
    double xi          = 0.0;  // envelope phase offset
    double speed       = 0.0;  // v_p (bradyon, |v|<c) or w_p (tachyon, w>c)
    double x_init      = 0.0;  // bead abscissa at t = 0
    double c           = 1.0;  // sound speed

    // derived
    double gamma          = 1.0;  // gamma_p or Gamma_p
    double omega_lab      = 0.0;  // omega (bradyon) or Omega (tachyon)
    double k_lab          = 0.0;  // k or K
    double clock_pulsation = 0.0; // omega_p required for transparency
    double A              = 0.0;  // bead oscillation amplitude
    double phi            = 0.0;  // bead clock phase, canonical in (-pi, pi]
    double Q              = 1.0;  // action scale (not identified with hbar)

    // set when the solution was built against PhysicalParams whose spring
    // does not match clock_pulsation; informational only
    std::optional<std::string> spring_mismatch;

    double x_traj(double t) const { return speed * t + x_init; }
    double clock(double t) const;  // A cos(clock_pulsation*t + phi)
};

struct PhasePair {
    double S;    // carrier phase
    double Phi;  // envelope phase
};

struct DopplerPair {
    double omega_plus;   // +x going component pulsation, omega(1 + v/c)
    double omega_minus;  // -x going component pulsation, omega(1 - v/c)
    double amp;          // B/2
    double phase_plus;   // eta - xi
    double phase_minus;  // eta + xi
};

struct DeBroglieQuantities {
    double H_p;           // Q * lab pulsation
    double P_p;           // Q * lab wavenumber
    double lambda_phase;  // infinity sentinel when unbounded
    double T_phase;
    double lambda_group;
    double T_group;
};

struct PhaseGroupVelocities {
    double v_phase;  // infinity sentinel when the bead is at rest
    double v_group;
};

double gamma_factor(double v, double c);
double tachyon_gamma(double w, double c);

TransparencySolution make_bradyon(const PhysicalParams& params, double B,
                                  double omega_prime, double eta, double xi,
                                  double v_p, double x_init);
TransparencySolution make_tachyon(const PhysicalParams& params, double B,
                                  double omega_prime, double eta, double xi,
                                  double w_p, double x_init);

/// Bead riding a single +x-going monochromatic pulse. For a -x-going pulse
/// pass orientation = -1 (mirror by x -> -x).
TransparencySolution make_surfer(double A, double omega_p, double phi,
                                 double v_p, double x_init, double c,
                                 int orientation = +1);

double eval_field(const TransparencySolution& sol, double t, double x);
double eval_field_dt(const TransparencySolution& sol, double t, double x);
double eval_field_dx(const TransparencySolution& sol, double t, double x);

PhasePair phases(const TransparencySolution& sol, double t, double x);
double dispersion_residual(const TransparencySolution& sol);
PhaseGroupVelocities velocities(const TransparencySolution& sol);
DopplerPair doppler_decompose(const TransparencySolution& sol);
double guidance_velocity(const TransparencySolution& sol, double t, double x);
DeBroglieQuantities debroglie_quantities(const TransparencySolution& sol,
                                         double Q = 1.0);

/// Reduce an angle to the canonical branch (-pi, pi].
double wrap_phase(double a);

}  // namespace strwave
