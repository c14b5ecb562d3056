#include "strwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "strwave/diagnostics.hpp"

namespace strwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

int wrap_index(int j, int n) {
    j %= n;
    return j < 0 ? j + n : j;
}

double wrap_position(double x, double L) {
    x = std::fmod(x, L);
    return x < 0.0 ? x + L : x;
}

// B-spline bumps of increasing smoothness; sum over integer shifts is 1.
double bspline2(double r) {  // linear hat, support |r| < 1
    r = std::abs(r);
    return r < 1.0 ? 1.0 - r : 0.0;
}
double bspline3(double r) {  // quadratic, support |r| < 1.5
    r = std::abs(r);
    if (r <= 0.5) return 0.75 - r * r;
    if (r < 1.5) return 0.5 * (1.5 - r) * (1.5 - r);
    return 0.0;
}
double bspline4(double r) {  // cubic, support |r| < 2
    r = std::abs(r);
    if (r <= 1.0) return 2.0 / 3.0 - r * r + 0.5 * r * r * r;
    if (r < 2.0) {
        const double q = 2.0 - r;
        return q * q * q / 6.0;
    }
    return 0.0;
}

// First and second derivatives with respect to r (defined a.e. for the hat).
double bspline2_d(double r) {
    if (r <= -1.0 || r >= 1.0 || r == 0.0) return 0.0;
    return r < 0.0 ? 1.0 : -1.0;
}
double bspline2_dd(double) { return 0.0; }
double bspline3_d(double r) {
    const double s = r < 0.0 ? -1.0 : 1.0;
    r = std::abs(r);
    if (r <= 0.5) return s * (-2.0 * r);
    if (r < 1.5) return s * (-(1.5 - r));
    return 0.0;
}
double bspline3_dd(double r) {
    r = std::abs(r);
    if (r <= 0.5) return -2.0;
    if (r < 1.5) return 1.0;
    return 0.0;
}
double bspline4_d(double r) {
    const double s = r < 0.0 ? -1.0 : 1.0;
    r = std::abs(r);
    if (r <= 1.0) return s * (-2.0 * r + 1.5 * r * r);
    if (r < 2.0) {
        const double q = 2.0 - r;
        return s * (-0.5 * q * q);
    }
    return 0.0;
}
double bspline4_dd(double r) {
    r = std::abs(r);
    if (r <= 1.0) return -2.0 + 3.0 * r;
    if (r < 2.0) return 2.0 - r;
    return 0.0;
}

struct NodeAccess {
    const Grid& grid;
    bool fixed;
    int n;

    explicit NodeAccess(const Grid& g)
        : grid(g), fixed(g.bc == BoundaryCondition::FixedEnds), n(g.n) {}

    double at(const std::vector<double>& a, int j) const {
        if (fixed) {
            if (j < 0 || j >= n) return 0.0;
            return a[j];
        }
        return a[wrap_index(j, n)];
    }
};

}  // namespace

void Grid::validate() const {
    if (n < 16) throw std::invalid_argument("grid needs at least 16 nodes");
    if (!(L > 0.0)) throw std::invalid_argument("grid length must be > 0");
}

double ExternalPotential::gradient(double x) const {
    switch (profile) {
        case PotentialProfile::None:
            return 0.0;
        case PotentialProfile::Harmonic:
            return 2.0 * amplitude * (x - x0);
        case PotentialProfile::CosineLattice: {
            const double k = 2.0 * kPi / period;
            return -amplitude * k * std::sin(k * (x - x0));
        }
    }
    return 0.0;
}

double SimConfig::step_size() const {
    const double limit = cfl_target * grid.dx() / params.c;
    return dt > 0.0 ? dt : limit;
}

void SimConfig::validate() const {
    grid.validate();
    if (!(cfl_target > 0.0) || cfl_target > 0.9)
        throw std::invalid_argument("cfl_target must lie in (0, 0.9]");
    if (dt > 0.0 && dt * params.c / grid.dx() > cfl_target * (1.0 + 1e-12))
        throw std::invalid_argument("dt violates the CFL bound dt*c/dx <= cfl_target");
    if (kernel_width < 1 || kernel_width > 3)
        throw std::invalid_argument("kernel_width must be 1, 2 or 3");
    if (kernel_scale < 1 || kernel_scale > 64)
        throw std::invalid_argument("kernel_scale must lie in [1, 64]");
    if (2 * (kernel_width + 1) * kernel_scale >= grid.n)
        throw std::invalid_argument("kernel support does not fit the grid");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    if (output_stride < 1) throw std::invalid_argument("output_stride must be >= 1");
}

KernelWeights deposit_kernel(double x_p, const Grid& grid, int kernel_width,
                             int kernel_scale) {
    const double dx = grid.dx();
    const double r = x_p / dx;
    const double p = kernel_scale;  // stretch factor; B-splines stay an
                                    // exact partition of unity for integer p
    double (*shape)(double);
    double (*shape_d)(double);
    double (*shape_dd)(double);
    double half;
    if (kernel_width == 1) {
        shape = bspline2; shape_d = bspline2_d; shape_dd = bspline2_dd;
        half = 1.0;
    } else if (kernel_width == 2) {
        shape = bspline3; shape_d = bspline3_d; shape_dd = bspline3_dd;
        half = 1.5;
    } else {
        shape = bspline4; shape_d = bspline4_d; shape_dd = bspline4_dd;
        half = 2.0;
    }
    const int jlo = static_cast<int>(std::ceil(r - half * p));
    const int jhi = static_cast<int>(std::floor(r + half * p));
    KernelWeights kw;
    kw.count = jhi - jlo + 1;
    kw.node.resize(kw.count);
    kw.w.resize(kw.count);
    kw.wp.resize(kw.count);
    kw.wpp.resize(kw.count);
    for (int i = 0; i < kw.count; ++i) {
        const int j = jlo + i;
        const double q = (r - j) / p;
        kw.node[i] = j;
        kw.w[i] = shape(q) / p;
        kw.wp[i] = shape_d(q) / (p * p * dx);
        kw.wpp[i] = shape_dd(q) / (p * p * p * dx * dx);
    }
    if (grid.bc == BoundaryCondition::Periodic) {
        for (int i = 0; i < kw.count; ++i)
            kw.node[i] = wrap_index(kw.node[i], grid.n);
    }
    return kw;
}

ProbedField interpolate(const FieldState& field, double x_p, const Grid& grid,
                        int kernel_width, int kernel_scale) {
    const NodeAccess acc(grid);
    const KernelWeights kw = deposit_kernel(x_p, grid, kernel_width, kernel_scale);
    const double dx = grid.dx();
    ProbedField p;
    for (int i = 0; i < kw.count; ++i) {
        const int j = kw.node[i];
        const double u0 = acc.at(field.u, j);
        const double v0 = acc.at(field.v, j);
        p.u += kw.w[i] * u0;
        p.ut += kw.w[i] * v0;
        p.ux += kw.wp[i] * u0;
        p.utx += kw.wp[i] * v0;
        p.uxx += kw.wpp[i] * u0;
        if (kw.w[i] != 0.0) {
            const double lap = (acc.at(field.u, j + 1) - 2.0 * u0 +
                                acc.at(field.u, j - 1)) /
                               (dx * dx);
            p.uxx_grid += kw.w[i] * lap;
        }
    }
    return p;
}

namespace {

double kernel_self_weight(const KernelWeights& kw) {
    double s = 0.0;
    for (int i = 0; i < kw.count; ++i) s += kw.w[i] * kw.w[i];
    return s;
}

struct ForceClosure {
    double N;       // constraint force on the bead
    double s;       // slope at the bead
    double z;       // transverse position
    double a_part;  // material acceleration without the x_p feedback term
    double accel;   // bead acceleration (VariableDensity closes it here)
    double vd_R;    // VariableDensity deposit: m*R*W/dx enters the field
};

// Closes total1-total2 for N. The constraint is the interpolated one the
// grid actually enforces, z = sum W_j(x_p) u_j, so its second time
// derivative is built from kernel-derivative probes and from the field
// equation's instantaneous response: the deposit the force itself creates
// at the bead adds (m/lambda) sum(W^2)/dx to the denominator. With the
// deposit -(N/lambda) W_j/dx and the bead equation m xdd = -s N - V',
// these equations descend from one discrete Lagrangian, so the
// semi-discrete flow conserves the matching discrete energy exactly.
ForceClosure close_force(const CoupledState& state, const SimConfig& cfg) {
    const PhysicalParams& pp = cfg.params;
    const ProbedField pf = interpolate(state.field, state.bead.x_p, cfg.grid,
                                       cfg.kernel_width, cfg.kernel_scale);
    const double vx = state.bead.vx_p;
    const double c2 = pp.c * pp.c;
    const double a_noN =
        c2 * pf.uxx_grid + 2.0 * vx * pf.utx + vx * vx * pf.uxx;
    const double w2 = pp.omega_p * pp.omega_p;
    ForceClosure fc;
    fc.s = pf.ux;
    fc.z = pf.u;
    fc.a_part = a_noN;
    const double grad_v = cfg.potential.gradient(state.bead.x_p);
    if (cfg.scheme == Scheme::SourceSplit) {
        const KernelWeights kw =
            deposit_kernel(state.bead.x_p, cfg.grid, cfg.kernel_width, cfg.kernel_scale);
        const double self =
            (pp.m_p / pp.lambda) * kernel_self_weight(kw) / cfg.grid.dx();
        fc.N = pp.m_p * (a_noN + w2 * fc.z - fc.s * grad_v / pp.m_p) /
               (1.0 + fc.s * fc.s + self);
        fc.accel = (-fc.s * fc.N - grad_v) / pp.m_p;
        fc.vd_R = 0.0;
    } else {
        // Fold the bead's transverse inertia into the field as added
        // density plus a remainder deposit. With the node density
        // dens_j = lambda + m W_j/dx the field obeys
        //   dens_j dtt u_j = T D2 u_j - m R W_j/dx,
        //   R = 2 vx utx + vx^2 uxx + accel*s + omega_p^2 z,
        // and the bead acceleration couples back through R. Probing dtt u
        // through the kernel gives a 2x2 linear closure solved here.
        const NodeAccess acc(cfg.grid);
        const KernelWeights kw =
            deposit_kernel(state.bead.x_p, cfg.grid, cfg.kernel_width, cfg.kernel_scale);
        const double dx = cfg.grid.dx();
        double A0 = 0.0;  // probed field acceleration with R = 0
        double B0 = 0.0;  // probed response to a unit R deposit
        for (int i = 0; i < kw.count; ++i) {
            const int j = kw.node[i];
            if (kw.w[i] == 0.0) continue;
            const double lap = (acc.at(state.field.u, j + 1) -
                                2.0 * acc.at(state.field.u, j) +
                                acc.at(state.field.u, j - 1)) /
                               (dx * dx);
            const double dens = pp.lambda + pp.m_p * kw.w[i] / dx;
            A0 += kw.w[i] * c2 * lap * (pp.lambda / dens);
            B0 += kw.w[i] * (pp.m_p * kw.w[i] / dx) / dens;
        }
        const double C = 2.0 * vx * pf.utx + vx * vx * pf.uxx;
        const double s = fc.s;
        // accel*(1 + s^2 - B0 s^2) = -s*(A0 + (1-B0)(C + w2 z)) - grad/m
        fc.accel = (-s * (A0 + (1.0 - B0) * (C + w2 * fc.z)) -
                    grad_v / pp.m_p) /
                   (1.0 + s * s - B0 * s * s);
        fc.vd_R = C + w2 * fc.z + fc.accel * s;
        const double utt = A0 - B0 * fc.vd_R;
        fc.a_part = utt + C;
        fc.N = pp.m_p * (fc.a_part + fc.accel * s + w2 * fc.z);
    }
    return fc;
}

}  // namespace

double normal_force(const CoupledState& state, const SimConfig& config) {
    return close_force(state, config).N;
}

std::optional<double> kink_force_estimate(const CoupledState& state,
                                          const SimConfig& config) {
    const Grid& grid = config.grid;
    const double dx = grid.dx();
    const int jc = static_cast<int>(std::floor(state.bead.x_p / dx));
    const int reach = config.kernel_width + 1;
    const int jl = jc - reach, jr = jc + 1 + reach;
    if (grid.bc == BoundaryCondition::FixedEnds &&
        (jl - 1 < 0 || jr + 1 >= grid.n))
        return std::nullopt;
    const NodeAccess acc(grid);
    const double slope_left =
        (acc.at(state.field.u, jl + 1) - acc.at(state.field.u, jl - 1)) /
        (2.0 * dx);
    const double slope_right =
        (acc.at(state.field.u, jr + 1) - acc.at(state.field.u, jr - 1)) /
        (2.0 * dx);
    return config.params.tension * (slope_right - slope_left);
}

void laplacian_times_c2(const std::vector<double>& u, const Grid& grid,
                        double c2, std::vector<double>& out) {
    const int n = grid.n;
    const double inv = c2 / (grid.dx() * grid.dx());
    out.resize(n);
    if (grid.bc == BoundaryCondition::Periodic) {
        for (int j = 0; j < n; ++j) {
            const double um = u[j == 0 ? n - 1 : j - 1];
            const double up = u[j == n - 1 ? 0 : j + 1];
            out[j] = inv * (up - 2.0 * u[j] + um);
        }
    } else {
        out[0] = 0.0;
        out[n - 1] = 0.0;
        for (int j = 1; j < n - 1; ++j)
            out[j] = inv * (u[j + 1] - 2.0 * u[j] + u[j - 1]);
    }
}

void rhs(const CoupledState& state, double /*t*/, const SimConfig& config,
         StateDerivative& out) {
    const PhysicalParams& pp = config.params;
    const Grid& grid = config.grid;
    const int n = grid.n;
    const double dx = grid.dx();

    out.du = state.field.v;
    laplacian_times_c2(state.field.u, grid, pp.c * pp.c, out.dv);

    const ForceClosure fc = close_force(state, config);
    const KernelWeights kw =
        deposit_kernel(state.bead.x_p, grid, config.kernel_width, config.kernel_scale);

    if (config.scheme == Scheme::SourceSplit) {
        for (int i = 0; i < kw.count; ++i) {
            const int j = kw.node[i];
            if (j < 0 || j >= n) continue;  // off-grid under FixedEnds
            out.dv[j] -= (fc.N / pp.lambda) * kw.w[i] / dx;
        }
    } else {
        for (int i = 0; i < kw.count; ++i) {
            const int j = kw.node[i];
            if (j < 0 || j >= n) continue;
            const double dens = pp.lambda + pp.m_p * kw.w[i] / dx;
            out.dv[j] = (pp.lambda * out.dv[j] -
                         pp.m_p * fc.vd_R * kw.w[i] / dx) /
                        dens;
        }
    }
    if (grid.bc == BoundaryCondition::FixedEnds) {
        out.du[0] = out.du[n - 1] = 0.0;
        out.dv[0] = out.dv[n - 1] = 0.0;
    }

    out.dx_p = state.bead.vx_p;
    out.dvx_p = fc.accel;
}

namespace {

void axpy(CoupledState& dst, const CoupledState& base,
          const StateDerivative& d, double h) {
    const size_t n = base.field.u.size();
    dst.field.u.resize(n);
    dst.field.v.resize(n);
    for (size_t j = 0; j < n; ++j) {
        dst.field.u[j] = base.field.u[j] + h * d.du[j];
        dst.field.v[j] = base.field.v[j] + h * d.dv[j];
    }
    dst.bead.x_p = base.bead.x_p + h * d.dx_p;
    dst.bead.vx_p = base.bead.vx_p + h * d.dvx_p;
}

}  // namespace

void step_rk4_free_field(FieldState& f, const Grid& grid, double c2,
                         double dt) {
    const size_t n = f.u.size();
    std::vector<double> k1v, k2v, k3v, k4v;
    std::vector<double> u2(n), v2(n);
    laplacian_times_c2(f.u, grid, c2, k1v);  // k1u = v
    for (size_t j = 0; j < n; ++j) {
        u2[j] = f.u[j] + 0.5 * dt * f.v[j];
        v2[j] = f.v[j] + 0.5 * dt * k1v[j];
    }
    laplacian_times_c2(u2, grid, c2, k2v);
    std::vector<double> u3(n), v3(n);
    for (size_t j = 0; j < n; ++j) {
        u3[j] = f.u[j] + 0.5 * dt * v2[j];
        v3[j] = f.v[j] + 0.5 * dt * k2v[j];
    }
    laplacian_times_c2(u3, grid, c2, k3v);
    std::vector<double> u4(n), v4(n);
    for (size_t j = 0; j < n; ++j) {
        u4[j] = f.u[j] + dt * v3[j];
        v4[j] = f.v[j] + dt * k3v[j];
    }
    laplacian_times_c2(u4, grid, c2, k4v);
    for (size_t j = 0; j < n; ++j) {
        const double du =
            (f.v[j] + 2.0 * v2[j] + 2.0 * v3[j] + v4[j]) / 6.0;
        const double dv =
            (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j] + k4v[j]) / 6.0;
        f.u[j] += dt * du;
        f.v[j] += dt * dv;
    }
}

CoupledState step_rk4(const CoupledState& state, double t, double dt,
                      const SimConfig& config) {
    CoupledState out = state;

    if (config.alternating_update) {
        // Paper-style splitting: field step with the bead frozen as a
        // constant source, then bead step against the updated field.
        const ForceClosure fc = close_force(state, config);
        StateDerivative d;
        rhs(state, t, config, d);
        // Field: RK4 on the linear wave part, source added explicitly.
        step_rk4_free_field(out.field, config.grid,
                            config.params.c * config.params.c, dt);
        if (config.scheme == Scheme::SourceSplit) {
            const KernelWeights kw =
                deposit_kernel(state.bead.x_p, config.grid, config.kernel_width, config.kernel_scale);
            for (int i = 0; i < kw.count; ++i) {
                const int j = kw.node[i];
                if (j < 0 || j >= config.grid.n) continue;
                out.field.v[j] -= dt * (fc.N / config.params.lambda) * kw.w[i] /
                                  config.grid.dx();
            }
        }
        // Bead: explicit midpoint against the new field.
        CoupledState half = out;
        half.bead = state.bead;
        const ForceClosure fh = close_force(half, config);
        const double ax0 = -fh.s * fh.N / config.params.m_p -
                           config.potential.gradient(state.bead.x_p) /
                               config.params.m_p;
        half.bead.x_p = state.bead.x_p + 0.5 * dt * state.bead.vx_p;
        half.bead.vx_p = state.bead.vx_p + 0.5 * dt * ax0;
        const ForceClosure fm = close_force(half, config);
        const double axm = -fm.s * fm.N / config.params.m_p -
                           config.potential.gradient(half.bead.x_p) /
                               config.params.m_p;
        out.bead.x_p = state.bead.x_p + dt * half.bead.vx_p;
        out.bead.vx_p = state.bead.vx_p + dt * axm;
    } else {
        StateDerivative k1, k2, k3, k4;
        CoupledState tmp;
        rhs(state, t, config, k1);
        axpy(tmp, state, k1, 0.5 * dt);
        rhs(tmp, t + 0.5 * dt, config, k2);
        axpy(tmp, state, k2, 0.5 * dt);
        rhs(tmp, t + 0.5 * dt, config, k3);
        axpy(tmp, state, k3, dt);
        rhs(tmp, t + dt, config, k4);
        const size_t n = state.field.u.size();
        for (size_t j = 0; j < n; ++j) {
            out.field.u[j] += dt / 6.0 *
                (k1.du[j] + 2.0 * k2.du[j] + 2.0 * k3.du[j] + k4.du[j]);
            out.field.v[j] += dt / 6.0 *
                (k1.dv[j] + 2.0 * k2.dv[j] + 2.0 * k3.dv[j] + k4.dv[j]);
        }
        out.bead.x_p += dt / 6.0 *
            (k1.dx_p + 2.0 * k2.dx_p + 2.0 * k3.dx_p + k4.dx_p);
        out.bead.vx_p += dt / 6.0 *
            (k1.dvx_p + 2.0 * k2.dvx_p + 2.0 * k3.dvx_p + k4.dvx_p);
    }

    if (config.grid.bc == BoundaryCondition::Periodic)
        out.bead.x_p = wrap_position(out.bead.x_p, config.grid.L);
    return out;
}

CoupledState init_from_analytic(const TransparencySolution& sol,
                                const SimConfig& config) {
    const Grid& grid = config.grid;
    grid.validate();

    if (grid.bc == BoundaryCondition::Periodic) {
        // Both plane-wave components must hold an integer number of
        // wavelengths in L, otherwise the wrap introduces a seam.
        std::vector<double> wavenumbers;
        if (sol.regime == Regime::Surfer) {
            wavenumbers.push_back(std::abs(sol.k_lab));
        } else {
            wavenumbers.push_back(std::abs(sol.k_lab + sol.omega_lab / sol.c));
            wavenumbers.push_back(std::abs(sol.k_lab - sol.omega_lab / sol.c));
        }
        for (double kappa : wavenumbers) {
            if (kappa == 0.0) continue;
            const double count = grid.L * kappa / (2.0 * kPi);
            const double nearest = std::round(count);
            if (std::abs(count - nearest) > 1e-6 * std::max(1.0, count)) {
                std::ostringstream msg;
                msg << "domain length " << grid.L
                    << " is incommensurate with the solution (component "
                       "wavelength "
                    << 2.0 * kPi / kappa << " fits " << count
                    << " times); nearest commensurate lengths:";
                for (double kap : wavenumbers) {
                    if (kap == 0.0) continue;
                    const double cnt =
                        std::max(1.0, std::round(grid.L * kap / (2.0 * kPi)));
                    msg << " " << cnt * 2.0 * kPi / kap;
                }
                throw std::invalid_argument(msg.str());
            }
        }
    }

    CoupledState st;
    st.field.u.resize(grid.n);
    st.field.v.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.node(j);
        st.field.u[j] = eval_field(sol, 0.0, x);
        st.field.v[j] = eval_field_dt(sol, 0.0, x);
    }
    if (grid.bc == BoundaryCondition::FixedEnds) {
        st.field.u[0] = st.field.v[0] = 0.0;
        st.field.u[grid.n - 1] = st.field.v[grid.n - 1] = 0.0;
    }
    st.bead.x_p = grid.bc == BoundaryCondition::Periodic
                      ? wrap_position(sol.x_init, grid.L)
                      : sol.x_init;
    st.bead.vx_p = sol.speed;
    return st;
}

RunOutput run(const SimConfig& config, const CoupledState& init,
              const TransparencySolution* reference) {
    config.validate();
    if (static_cast<int>(init.field.u.size()) != config.grid.n ||
        init.field.v.size() != init.field.u.size())
        throw std::invalid_argument("initial field does not match the grid");

    const double dt_raw = config.step_size();
    const long steps =
        std::max(1L, static_cast<long>(std::ceil(config.t_end / dt_raw - 1e-12)));
    const double dt = config.t_end / steps;

    RunOutput out;
    CoupledState state = init;
    const auto [E0, P0] = global_invariants(state, config);
    double t = 0.0;

    auto record = [&](long step) {
        const double N = normal_force(state, config);
        const ProbedField pf = interpolate(state.field, state.bead.x_p,
                                           config.grid, config.kernel_width, config.kernel_scale);
        out.trajectory.push_back({t, state.bead.x_p, state.bead.vx_p, pf.u, N,
                                  std::abs(state.bead.vx_p) / config.params.c});
        if (step % config.output_stride == 0 || step == steps) {
            out.snapshots.push_back({t, state.field.u, state.field.v});
            DiagnosticsRecord rec;
            rec.t = t;
            rec.N = N;
            const BeadEnergies be = bead_energies(state, config);
            rec.E_kin = be.translational;
            rec.E_clock = be.clock;
            const auto dens =
                energy_momentum_densities(state.field, config.grid, config.params);
            double ef = 0.0, gf = 0.0;
            for (int j = 0; j < config.grid.n; ++j) {
                ef += dens.energy[j];
                gf += dens.momentum[j];
            }
            rec.E_field = ef * config.grid.dx();
            rec.P_field = gf * config.grid.dx();
            rec.P_particle = config.params.m_p * state.bead.vx_p;
            rec.Ma = std::abs(state.bead.vx_p) / config.params.c;
            rec.constraint_residual = 0.0;
            if (reference) {
                const PhasePair ph = phases(*reference, t, state.bead.x_p);
                const double expected =
                    reference->clock_pulsation * t + reference->phi;
                rec.phase_lock_error = std::abs(wrap_phase(ph.S - expected));
            }
            out.diagnostics.push_back(rec);
        }
    };

    record(0);
    for (long step = 1; step <= steps; ++step) {
        state = step_rk4(state, t, dt, config);
        t = step * dt;

        bool finite = std::isfinite(state.bead.x_p) &&
                      std::isfinite(state.bead.vx_p);
        if (finite && step % config.output_stride == 0) {
            for (double uj : state.field.u)
                if (!std::isfinite(uj)) { finite = false; break; }
        }
        if (!finite) {
            out.aborted = true;
            out.abort_reason = "non-finite state at t = " + std::to_string(t);
            break;
        }
        record(step);
        if (step % config.output_stride == 0 && E0 > 0.0) {
            const auto [E, P] = global_invariants(state, config);
            (void)P;
            if (E > 10.0 * E0) {
                out.aborted = true;
                out.abort_reason =
                    "energy grew past 10x the initial value at t = " +
                    std::to_string(t) + " (CFL or kernel too aggressive)";
                break;
            }
        }
    }
    out.final_state = state;
    out.t_final = t;
    return out;
}

}  // namespace strwave
