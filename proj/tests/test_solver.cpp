#include <cmath>
#include <random>

#include "doctest.h"
#include "strwave/diagnostics.hpp"
#include "strwave/solver.hpp"

using namespace strwave;

namespace {
constexpr double kPi = 3.14159265358979323846;

PhysicalParams fig2_params() {
    const double omega = 2.0 * kPi / 10.0;
    return PhysicalParams::make(1.0, 1.0, 0.1, omega * 0.99);
}

TransparencySolution fig2_bradyon(double B = 0.01) {
    const double omega = 2.0 * kPi / 10.0;
    return make_bradyon(fig2_params(), B, omega * std::sqrt(0.99), 0.0, 0.0,
                        0.1, 0.1);
}

SimConfig fig2_config(int n) {
    SimConfig cfg;
    cfg.params = fig2_params();
    cfg.grid = {100.0, n, BoundaryCondition::Periodic};
    cfg.t_end = 5.0;
    cfg.kernel_width = 3;  // cubic kernel, as in the shipped scenarios
    return cfg;
}

double kernel_self(const KernelWeights& kw) {
    double s = 0.0;
    for (int i = 0; i < kw.count; ++i) s += kw.w[i] * kw.w[i];
    return s;
}
}  // namespace

TEST_CASE("deposit kernel weights") {
    Grid grid{1.0, 64, BoundaryCondition::Periodic};
    const double dx = grid.dx();

    // On a node the hat collapses to that node's weight.
    auto kw = deposit_kernel(10 * dx, grid, 1);
    for (int i = 0; i < kw.count; ++i)
        CHECK(kw.w[i] == doctest::Approx(kw.node[i] == 10 ? 1.0 : 0.0));

    kw = deposit_kernel(10.5 * dx, grid, 1);
    for (int i = 0; i < kw.count; ++i)
        if (kw.node[i] == 10 || kw.node[i] == 11)
            CHECK(kw.w[i] == doctest::Approx(0.5));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int width : {1, 2, 3}) {
        for (int i = 0; i < 1000; ++i) {
            const auto k = deposit_kernel(ud(rng), grid, width);
            double sum = 0.0;
            for (int j = 0; j < k.count; ++j) {
                CHECK(k.w[j] >= 0.0);
                CHECK(k.node[j] >= 0);
                CHECK(k.node[j] < grid.n);
                sum += k.w[j];
            }
            // deposit densities are w/dx, so sum(w) = 1 is the discrete
            // delta normalization sum * dx = 1
            CHECK(std::abs(sum - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("interpolation probes") {
    Grid grid{1.0, 128, BoundaryCondition::Periodic};
    FieldState f;
    f.u.assign(grid.n, 3.25);
    f.v.assign(grid.n, -1.5);
    for (int width : {1, 2, 3}) {
        const auto p = interpolate(f, 0.37, grid, width);
        CHECK(p.u == doctest::Approx(3.25).epsilon(1e-14));
        CHECK(p.ut == doctest::Approx(-1.5).epsilon(1e-14));
        CHECK(std::abs(p.ux) < 1e-12);
        CHECK(std::abs(p.uxx) < 1e-9);
    }

    // Slope probe on sin(2 pi x / L): the quadratic and cubic kernels carry
    // an O(dx^2) derivative (the hat derivative is the in-cell one-sided
    // slope, first order only).
    for (int width : {2, 3}) {
        double prev = 0.0;
        for (int lv = 0; lv < 3; ++lv) {
            Grid g{1.0, 128 << lv, BoundaryCondition::Periodic};
            FieldState fs;
            fs.u.resize(g.n);
            fs.v.assign(g.n, 0.0);
            for (int j = 0; j < g.n; ++j)
                fs.u[j] = std::sin(2.0 * kPi * g.node(j));
            // probe slightly off-node so the kernel actually blends
            const double xq = 0.25 + 0.3 * g.dx();
            const auto p = interpolate(fs, xq, g, width);
            const double exact = 2.0 * kPi * std::cos(2.0 * kPi * xq);
            const double err = std::abs(p.ux - exact);
            if (lv > 0) CHECK(err < 0.35 * prev);
            prev = err;
        }
    }
}

TEST_CASE("sampled analytic field matches eval_field under refinement") {
    const auto sol = fig2_bradyon();
    double prev = 0.0;
    for (int lv = 0; lv < 3; ++lv) {
        SimConfig cfg = fig2_config(512 << lv);
        const CoupledState st = init_from_analytic(sol, cfg);
        double err = 0.0;
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> ud(0.0, cfg.grid.L);
        for (int i = 0; i < 200; ++i) {
            const double x = ud(rng);
            const auto p = interpolate(st.field, x, cfg.grid, 1);
            err = std::max(err, std::abs(p.u - eval_field(sol, 0.0, x)));
        }
        if (lv > 0) CHECK(err < 0.35 * prev);
        prev = err;
    }
}

TEST_CASE("normal force vanishes on transparency data") {
    const auto sol = fig2_bradyon();
    SimConfig cfg = fig2_config(1024);
    const CoupledState st = init_from_analytic(sol, cfg);
    const double norm = cfg.params.m_p * cfg.params.omega_p *
                        cfg.params.omega_p * std::abs(sol.A);
    CHECK(std::abs(normal_force(st, cfg)) < 1e-3 * norm);
}

TEST_CASE("normal force on a flat string is zero") {
    SimConfig cfg = fig2_config(256);
    CoupledState st;
    st.field.u.assign(cfg.grid.n, 0.0);
    st.field.v.assign(cfg.grid.n, 0.0);
    st.bead = {12.3, 0.0};
    CHECK(normal_force(st, cfg) == 0.0);
}

TEST_CASE("normal force on a detuned standing wave") {
    // u = B cos(omega t) cos(omega x / c), bead resting at the antinode
    // x = 0 with a spring omega_p != omega. Closed form, including the
    // kernel self-coupling factor in the denominator:
    //   N = m (omega_p^2 - omega^2) z / (1 + (m/lambda) sum(W^2)/dx).
    const double omega = 1.3, B = 0.02;
    PhysicalParams pp = PhysicalParams::make(1.0, 1.0, 0.1, 2.9);
    SimConfig cfg;
    cfg.params = pp;
    cfg.grid = {2.0 * kPi / omega * 4.0, 512, BoundaryCondition::Periodic};
    CoupledState st;
    st.field.u.resize(cfg.grid.n);
    st.field.v.assign(cfg.grid.n, 0.0);  // t = 0 snapshot
    for (int j = 0; j < cfg.grid.n; ++j)
        st.field.u[j] = B * std::cos(omega * cfg.grid.node(j));
    st.bead = {0.0, 0.0};

    const auto kw = deposit_kernel(0.0, cfg.grid, cfg.kernel_width);
    const double self =
        (pp.m_p / pp.lambda) * kernel_self(kw) / cfg.grid.dx();
    const double expected =
        pp.m_p * (pp.omega_p * pp.omega_p - omega * omega) * B / (1.0 + self);
    CHECK(normal_force(st, cfg) == doctest::Approx(expected).epsilon(2e-4));
}

TEST_CASE("kink force estimate") {
    SimConfig cfg = fig2_config(1024);

    // Smooth field, no source history.
    const auto sol = fig2_bradyon();
    const CoupledState smooth = init_from_analytic(sol, cfg);
    const auto est = kink_force_estimate(smooth, cfg);
    REQUIRE(est.has_value());
    // smooth curvature over the probe window, O(uxx * dx), not a true kink
    CHECK(std::abs(*est) < 5e-3);

    // Static tent: prescribed kink angle theta per side.
    const double tan_theta = 0.05, apex = 50.0, half_width = 5.0;
    CoupledState tent;
    tent.field.u.resize(cfg.grid.n);
    tent.field.v.assign(cfg.grid.n, 0.0);
    for (int j = 0; j < cfg.grid.n; ++j) {
        const double d = std::abs(cfg.grid.node(j) - apex);
        tent.field.u[j] = d < half_width ? tan_theta * (half_width - d) : 0.0;
    }
    tent.bead = {apex, 0.0};
    const auto kink = kink_force_estimate(tent, cfg);
    REQUIRE(kink.has_value());
    CHECK(std::abs(*kink) ==
          doctest::Approx(2.0 * cfg.params.tension * tan_theta).epsilon(1e-10));

    // Unavailable against a fixed boundary.
    SimConfig fixed = cfg;
    fixed.grid.bc = BoundaryCondition::FixedEnds;
    CoupledState near_edge = tent;
    near_edge.bead.x_p = cfg.grid.dx();
    CHECK(!kink_force_estimate(near_edge, fixed).has_value());
}

TEST_CASE("rhs trivial cases") {
    SimConfig cfg = fig2_config(256);
    CoupledState st;
    st.field.u.assign(cfg.grid.n, 0.0);
    st.field.v.assign(cfg.grid.n, 0.0);
    st.bead = {1.0, 0.0};
    StateDerivative d;
    rhs(st, 0.0, cfg, d);
    CHECK(d.dx_p == 0.0);
    CHECK(d.dvx_p == 0.0);
    for (int j = 0; j < cfg.grid.n; ++j) {
        CHECK(d.du[j] == 0.0);
        CHECK(d.dv[j] == 0.0);
    }
}

TEST_CASE("rhs matches analytic time derivatives on transparency data") {
    const auto sol = fig2_bradyon();
    double prev = 0.0;
    for (int lv = 0; lv < 2; ++lv) {
        SimConfig cfg = fig2_config(1024 << lv);
        const CoupledState st = init_from_analytic(sol, cfg);
        StateDerivative d;
        rhs(st, 0.0, cfg, d);
        double err = 0.0;
        for (int j = 0; j < cfg.grid.n; j += 7) {
            const double x = cfg.grid.node(j);
            err = std::max(err, std::abs(d.du[j] - eval_field_dt(sol, 0.0, x)));
            // dv approximates d2u/dt2
            const double h = 1e-5;
            const double utt = (eval_field_dt(sol, h, x) -
                                eval_field_dt(sol, -h, x)) / (2.0 * h);
            err = std::max(err, std::abs(d.dv[j] - utt));
        }
        CHECK(std::abs(d.dx_p - sol.speed) < 1e-15);
        CHECK(std::abs(d.dvx_p) < 1e-6);
        if (lv > 0) CHECK(err < 0.35 * prev);
        prev = err;
    }
}

TEST_CASE("rk4 step trivial and ODE accuracy") {
    SimConfig cfg = fig2_config(256);
    CoupledState zero;
    zero.field.u.assign(cfg.grid.n, 0.0);
    zero.field.v.assign(cfg.grid.n, 0.0);
    zero.bead = {1.0, 0.0};
    const CoupledState out = step_rk4(zero, 0.0, 0.01, cfg);
    CHECK(out.bead.x_p == 1.0);
    CHECK(out.bead.vx_p == 0.0);
    for (double uj : out.field.u) CHECK(uj == 0.0);

    // Bead in a harmonic trap on a flat string: x(t) follows the oscillator
    // exactly up to O(dt^4).
    SimConfig trap = cfg;
    trap.potential = {PotentialProfile::Harmonic, 0.05, 50.0, 1.0};
    const double w_trap = std::sqrt(2.0 * 0.05 / trap.params.m_p);
    double prev = 0.0;
    for (int lv = 0; lv < 3; ++lv) {
        const double dt = 0.02 / (1 << lv);
        CoupledState st = zero;
        st.bead = {50.0 + 0.5, 0.0};
        const int steps = static_cast<int>(std::round(2.0 / dt));
        for (int s = 0; s < steps; ++s)
            st = step_rk4(st, s * dt, dt, trap);
        const double exact = 50.0 + 0.5 * std::cos(w_trap * steps * dt);
        const double err = std::abs(st.bead.x_p - exact);
        if (lv > 0) CHECK(err < 0.12 * prev);  // ~16x per halving
        prev = err;
    }
}

TEST_CASE("free field plane wave advects one period") {
    Grid grid{1.0, 256, BoundaryCondition::Periodic};
    const double c = 1.0, kappa = 2.0 * kPi * 3.0;
    FieldState f;
    f.u.resize(grid.n);
    f.v.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        f.u[j] = 0.3 * std::cos(kappa * grid.node(j));
        f.v[j] = 0.3 * kappa * c * std::sin(kappa * grid.node(j));
    }
    const FieldState f0 = f;
    const double period = 2.0 * kPi / (kappa * c);
    const double dt = 0.5 * grid.dx() / c;
    const int steps = static_cast<int>(std::round(period / dt));
    for (int s = 0; s < steps; ++s)
        step_rk4_free_field(f, grid, c * c, period / steps);
    double err = 0.0;
    for (int j = 0; j < grid.n; ++j)
        err = std::max(err, std::abs(f.u[j] - f0.u[j]));
    CHECK(err < 2e-3);  // O(dx^2) dispersion dominates at this resolution
}

TEST_CASE("init_from_analytic") {
    const auto sol = fig2_bradyon();
    SimConfig cfg = fig2_config(1024);
    const CoupledState st = init_from_analytic(sol, cfg);
    CHECK(st.bead.x_p == doctest::Approx(0.1));
    CHECK(st.bead.vx_p == doctest::Approx(0.1));
    const auto p = interpolate(st.field, st.bead.x_p, cfg.grid, 1);
    // transverse velocity from the material derivative
    const double zdot = p.ut + st.bead.vx_p * p.ux;
    const double exact = eval_field_dt(sol, 0.0, 0.1) +
                         0.1 * eval_field_dx(sol, 0.0, 0.1);
    CHECK(zdot == doctest::Approx(exact).epsilon(1e-3));

    SimConfig bad = cfg;
    bad.grid.L = 97.3;
    CHECK_THROWS_WITH_AS(init_from_analytic(sol, bad),
                         doctest::Contains("commensurate"),
                         std::invalid_argument);
}

TEST_CASE("standing-wave bead oscillates in place") {
    PhysicalParams pp = PhysicalParams::make(1.0, 1.0, 0.1, 2.0 * kPi / 10.0);
    const auto rest = make_bradyon(pp, 0.01, 2.0 * kPi / 10.0, 0.0, 0.0, 0.0,
                                   25.0);
    SimConfig cfg = fig2_config(1024);
    cfg.params = pp;
    cfg.t_end = 3.0;
    const RunOutput out = run(cfg, init_from_analytic(rest, cfg), &rest);
    CHECK(!out.aborted);
    for (const auto& s : out.trajectory)
        CHECK(std::abs(s.x_p - 25.0) < 1e-6);
}

TEST_CASE("transparency run: inertial bead") {
    const auto sol = fig2_bradyon();
    SimConfig cfg = fig2_config(1024);
    const RunOutput out = run(cfg, init_from_analytic(sol, cfg), &sol);
    CHECK(!out.aborted);
    for (const auto& s : out.trajectory)
        CHECK(std::abs(s.x_p - sol.x_traj(s.t)) < 1e-3);
}

TEST_CASE("CFL guard rejects oversized steps") {
    SimConfig cfg = fig2_config(1024);
    cfg.dt = 10.0 * cfg.grid.dx() / cfg.params.c;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.dt = 0.0;
    cfg.cfl_target = 0.95;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("time reversal recovers the initial state") {
    const auto sol = fig2_bradyon();
    SimConfig cfg = fig2_config(512);
    const CoupledState init = init_from_analytic(sol, cfg);
    CoupledState st = init;
    const double dt = cfg.step_size();
    const int steps = 40;
    for (int s = 0; s < steps; ++s) st = step_rk4(st, s * dt, dt, cfg);
    for (int s = 0; s < steps; ++s) st = step_rk4(st, (steps - s) * dt, -dt, cfg);
    CHECK(std::abs(st.bead.x_p - init.bead.x_p) < 1e-10);
    CHECK(std::abs(st.bead.vx_p - init.bead.vx_p) < 1e-10);
    double err = 0.0;
    for (int j = 0; j < cfg.grid.n; ++j)
        err = std::max(err, std::abs(st.field.u[j] - init.field.u[j]));
    CHECK(err < 1e-5 * sol.B);  // RK4 is not exactly symmetric; O(dt^5) residue
}

TEST_CASE("schemes agree on transparency data") {
    const auto sol = fig2_bradyon();
    SimConfig a = fig2_config(1024);
    SimConfig b = a;
    b.scheme = Scheme::VariableDensity;
    const RunOutput ra = run(a, init_from_analytic(sol, a), &sol);
    const RunOutput rb = run(b, init_from_analytic(sol, b), &sol);
    REQUIRE(ra.trajectory.size() == rb.trajectory.size());
    for (size_t i = 0; i < ra.trajectory.size(); ++i)
        CHECK(std::abs(ra.trajectory[i].x_p - rb.trajectory[i].x_p) < 1e-3);
}

TEST_CASE("transparency trajectory is independent of the bead mass") {
    const auto sol = fig2_bradyon();
    SimConfig a = fig2_config(1024);
    SimConfig b = a;
    b.params = PhysicalParams::make(1.0, 1.0, a.params.m_p * 10.0,
                                    a.params.omega_p);
    const RunOutput ra = run(a, init_from_analytic(sol, a), &sol);
    const RunOutput rb = run(b, init_from_analytic(sol, b), &sol);
    REQUIRE(ra.trajectory.size() == rb.trajectory.size());
    for (size_t i = 0; i < ra.trajectory.size(); ++i)
        CHECK(std::abs(ra.trajectory[i].x_p - rb.trajectory[i].x_p) < 1e-4);
}

TEST_CASE("alternating update stays close to the coupled flow") {
    const auto sol = fig2_bradyon();
    SimConfig a = fig2_config(1024);
    a.t_end = 2.0;
    SimConfig b = a;
    b.alternating_update = true;
    const RunOutput ra = run(a, init_from_analytic(sol, a), &sol);
    const RunOutput rb = run(b, init_from_analytic(sol, b), &sol);
    CHECK(!rb.aborted);
    CHECK(std::abs(ra.final_state.bead.x_p - rb.final_state.bead.x_p) < 1e-2);
}

TEST_CASE("external potential gradients") {
    ExternalPotential none;
    CHECK(none.gradient(3.0) == 0.0);
    ExternalPotential harm{PotentialProfile::Harmonic, 0.7, 2.0, 1.0};
    CHECK(harm.gradient(3.5) == doctest::Approx(2.0 * 0.7 * 1.5));
    ExternalPotential lat{PotentialProfile::CosineLattice, 0.3, 0.0, 2.0};
    const double h = 1e-6;
    const double fd = (0.3 * std::cos(kPi * (1.1 + h)) -
                       0.3 * std::cos(kPi * (1.1 - h))) / (2.0 * h);
    CHECK(lat.gradient(1.1) == doctest::Approx(fd).epsilon(1e-8));
}
