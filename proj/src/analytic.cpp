#include "strwave/analytic.hpp"

#include <cmath>
#include <limits>

namespace strwave {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct PhaseForm {
    double S, Phi;        // values at (t, x)
    double St, Sx;        // partials of S
    double Phit, Phix;    // partials of Phi
};

// Carrier/envelope phases and their gradients for the modulated regimes.
PhaseForm phase_form(const TransparencySolution& s, double t, double x) {
    PhaseForm p{};
    const double c = s.c;
    if (s.regime == Regime::Bradyon) {
        const double w = s.omega_lab, k = s.k_lab, v = s.speed;
        p.S = w * t - k * x + s.eta;
        p.Phi = (w / c) * (x - v * t) + s.xi;
        p.St = w;
        p.Sx = -k;
        p.Phit = -(w / c) * v;
        p.Phix = w / c;
    } else {
        const double W = s.omega_lab, K = s.k_lab, wp = s.speed;
        p.S = K * x - W * t + s.xi;
        p.Phi = -(W / c) * (x - wp * t) + s.eta;
        p.St = -W;
        p.Sx = K;
        p.Phit = (W / c) * wp;
        p.Phix = -W / c;
    }
    return p;
}

// Surfer carrier argument: omega_s * (t - o x/c + o x_init/c) + phi,
// with omega_s = omega_lab and o = sign(k_lab).
double surfer_arg(const TransparencySolution& s, double t, double x) {
    const double o = s.k_lab >= 0.0 ? 1.0 : -1.0;
    return s.omega_lab * (t - o * x / s.c + o * s.x_init / s.c) + s.phi;
}

void require_modulated(const TransparencySolution& s, const char* op) {
    if (s.regime == Regime::Surfer)
        throw std::invalid_argument(std::string(op) +
                                    ": unsupported for surfer solutions");
}

}  // namespace

PhysicalParams PhysicalParams::make(double lambda, double tension, double m_p,
                                    double omega_p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (!(tension > 0.0)) throw std::invalid_argument("tension must be > 0");
    if (!(m_p > 0.0)) throw std::invalid_argument("m_p must be > 0");
    if (!(omega_p >= 0.0)) throw std::invalid_argument("omega_p must be >= 0");
    PhysicalParams p;
    p.lambda = lambda;
    p.tension = tension;
    p.c = std::sqrt(tension / lambda);
    p.m_p = m_p;
    p.omega_p = omega_p;
    p.k_p = m_p * omega_p * omega_p;
    return p;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Bradyon: return "bradyon";
        case Regime::Tachyon: return "tachyon";
        case Regime::Surfer: return "surfer";
    }
    return "?";
}

double wrap_phase(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

double gamma_factor(double v, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
    if (!(v >= 0.0) || v >= c)
        throw std::domain_error("gamma_factor requires 0 <= v < c");
    const double b = v / c;
    return 1.0 / std::sqrt((1.0 - b) * (1.0 + b));
}

double tachyon_gamma(double w, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
    if (!(w > c)) throw std::domain_error("tachyon_gamma requires w > c");
    const double b = w / c;
    return 1.0 / std::sqrt((b - 1.0) * (b + 1.0));
}

double TransparencySolution::clock(double t) const {
    return A * std::cos(clock_pulsation * t + phi);
}

TransparencySolution make_bradyon(const PhysicalParams& params, double B,
                                  double omega_prime, double eta, double xi,
                                  double v_p, double x_init) {
    if (!(B > 0.0)) throw std::invalid_argument("B must be > 0");
    const double c = params.c;
    const double g = gamma_factor(v_p, c);  // throws unless 0 <= v_p < c

    TransparencySolution s;
    s.regime = Regime::Bradyon;
    s.B = B;
    s.omega_prime = omega_prime;
    s.eta = eta;
    s.xi = xi;
    s.speed = v_p;
    s.x_init = x_init;
    s.c = c;
    s.gamma = g;
    s.omega_lab = omega_prime * g;
    s.k_lab = s.omega_lab * v_p / (c * c);
    s.clock_pulsation = omega_prime / g;
    s.A = B * std::cos(omega_prime * g * x_init / c + xi);
    s.phi = wrap_phase(eta - s.k_lab * x_init);
    if (std::abs(s.clock_pulsation - params.omega_p) >
        1e-9 * std::max(1.0, std::abs(s.clock_pulsation))) {
        s.spring_mismatch = "transparency requires omega_p = " +
                            std::to_string(s.clock_pulsation) +
                            ", params have " + std::to_string(params.omega_p);
    }
    return s;
}

TransparencySolution make_tachyon(const PhysicalParams& params, double B,
                                  double omega_prime, double eta, double xi,
                                  double w_p, double x_init) {
    if (!(B > 0.0)) throw std::invalid_argument("B must be > 0");
    const double c = params.c;
    const double G = tachyon_gamma(w_p, c);  // throws unless w_p > c

    TransparencySolution s;
    s.regime = Regime::Tachyon;
    s.B = B;
    s.omega_prime = omega_prime;
    s.eta = eta;
    s.xi = xi;
    s.speed = w_p;
    s.x_init = x_init;
    s.c = c;
    s.gamma = G;
    s.omega_lab = omega_prime * G;
    s.k_lab = s.omega_lab * w_p / (c * c);
    s.clock_pulsation = omega_prime / G;
    s.A = B * std::cos(omega_prime * G * x_init / c - eta);
    // Sign chosen so the clock runs forward: the field on the trajectory is
    // A cos(Omega_p t + xi + K x_init); the mirrored branch differs only by
    // the time-reversal invariance of the cosine.
    s.phi = wrap_phase(xi + s.k_lab * x_init);
    if (std::abs(s.clock_pulsation - params.omega_p) >
        1e-9 * std::max(1.0, std::abs(s.clock_pulsation))) {
        s.spring_mismatch = "transparency requires omega_p = " +
                            std::to_string(s.clock_pulsation) +
                            ", params have " + std::to_string(params.omega_p);
    }
    return s;
}

TransparencySolution make_surfer(double A, double omega_p, double phi,
                                 double v_p, double x_init, double c,
                                 int orientation) {
    if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
    if (orientation != 1 && orientation != -1)
        throw std::invalid_argument("orientation must be +1 or -1");
    const double o = static_cast<double>(orientation);
    const double denom = 1.0 - o * v_p / c;
    if (!(denom > 0.0))
        throw std::domain_error(
            "surfer requires v_p < c along the pulse direction");

    TransparencySolution s;
    s.regime = Regime::Surfer;
    s.B = A;
    s.speed = v_p;
    s.x_init = x_init;
    s.c = c;
    s.omega_lab = omega_p / denom;
    s.k_lab = o * s.omega_lab / c;
    s.clock_pulsation = omega_p;
    s.A = A;
    s.phi = phi;
    return s;
}

double eval_field(const TransparencySolution& s, double t, double x) {
    if (s.regime == Regime::Surfer) return s.A * std::cos(surfer_arg(s, t, x));
    const PhaseForm p = phase_form(s, t, x);
    return s.B * std::cos(p.S) * std::cos(p.Phi);
}

double eval_field_dt(const TransparencySolution& s, double t, double x) {
    if (s.regime == Regime::Surfer)
        return -s.A * s.omega_lab * std::sin(surfer_arg(s, t, x));
    const PhaseForm p = phase_form(s, t, x);
    return -s.B * (p.St * std::sin(p.S) * std::cos(p.Phi) +
                   p.Phit * std::cos(p.S) * std::sin(p.Phi));
}

double eval_field_dx(const TransparencySolution& s, double t, double x) {
    if (s.regime == Regime::Surfer) {
        const double o = s.k_lab >= 0.0 ? 1.0 : -1.0;
        return s.A * (o * s.omega_lab / s.c) * std::sin(surfer_arg(s, t, x));
    }
    const PhaseForm p = phase_form(s, t, x);
    return -s.B * (p.Sx * std::sin(p.S) * std::cos(p.Phi) +
                   p.Phix * std::cos(p.S) * std::sin(p.Phi));
}

PhasePair phases(const TransparencySolution& s, double t, double x) {
    require_modulated(s, "phases");
    const PhaseForm p = phase_form(s, t, x);
    return {p.S, p.Phi};
}

double dispersion_residual(const TransparencySolution& s) {
    require_modulated(s, "dispersion_residual");
    const double sign = s.regime == Regime::Bradyon ? 1.0 : -1.0;
    const double w = s.omega_lab, k = s.k_lab, c = s.c, wp = s.omega_prime;
    return (w * w - k * k * c * c - sign * wp * wp) / (wp * wp);
}

PhaseGroupVelocities velocities(const TransparencySolution& s) {
    require_modulated(s, "velocities");
    const double c2 = s.c * s.c;
    if (s.speed == 0.0) return {kInf, 0.0};
    return {c2 / s.speed, s.speed};
}

DopplerPair doppler_decompose(const TransparencySolution& s) {
    if (s.regime != Regime::Bradyon)
        throw std::invalid_argument(
            "doppler_decompose: only the bradyonic field splits into the two "
            "Doppler-shifted plane waves");
    const double ratio = s.speed / s.c;
    return {s.omega_lab * (1.0 + ratio), s.omega_lab * (1.0 - ratio),
            0.5 * s.B, s.eta - s.xi, s.eta + s.xi};
}

double guidance_velocity(const TransparencySolution& s, double t, double x) {
    if (s.regime != Regime::Bradyon)
        throw std::invalid_argument("guidance_velocity: bradyon regime only");
    const PhaseForm p = phase_form(s, t, x);
    if (p.St == 0.0)
        throw std::domain_error("guidance_velocity: stationary carrier phase");
    return -s.c * s.c * p.Sx / p.St;
}

DeBroglieQuantities debroglie_quantities(const TransparencySolution& s,
                                         double Q) {
    require_modulated(s, "debroglie_quantities");
    if (!(Q > 0.0)) throw std::invalid_argument("Q must be > 0");
    const double w = s.omega_lab, c = s.c, sp = s.speed;
    DeBroglieQuantities q{};
    q.H_p = Q * w;
    q.P_p = Q * s.k_lab;
    q.T_phase = 2.0 * kPi / w;
    q.lambda_group = q.T_phase * c;
    if (sp == 0.0) {
        q.lambda_phase = kInf;
        q.T_group = kInf;
    } else {
        q.lambda_phase = q.T_phase * c * c / sp;
        q.T_group = q.T_phase * c / sp;
    }
    return q;
}

}  // namespace strwave
