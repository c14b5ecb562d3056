#include "strwave/validate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "strwave/diagnostics.hpp"
#include "strwave/io.hpp"

namespace strwave {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void push_less(ValidationReport& rep, const std::string& id,
               const std::string& desc, double measured, double threshold) {
    rep.checks.push_back(
        {id, desc, measured, threshold, measured < threshold});
}

void push_greater(ValidationReport& rep, const std::string& id,
                  const std::string& desc, double measured, double threshold) {
    rep.checks.push_back(
        {id, desc, measured, threshold, measured > threshold});
}

ConfigFile seeded(const std::string& name, const ConfigFile* overrides) {
    ConfigFile cfg = scenario_config(name);
    if (overrides) {
        for (const auto& [section, keys] : *overrides)
            for (const auto& [key, value] : keys) cfg[section][key] = value;
    }
    return cfg;
}

struct RunMetrics {
    bool ok = false;
    TransparencyResidual residual{kNaN, kNaN};
    double phase_err = kNaN;
    double traj_err = kNaN;
    double energy_drift = kNaN;
    double momentum_drift = kNaN;
    RunOutput out;
};

RunMetrics transparency_metrics(const ResolvedConfig& rc) {
    RunMetrics m;
    const TransparencySolution sol = analytic_from_config(rc);
    RunOutput out;
    try {
        out = run(rc.sim, initial_state(rc), &sol);
    } catch (const std::exception&) {
        return m;
    }
    m.out = std::move(out);
    if (m.out.trajectory.empty()) return m;
    m.residual = transparency_residual(m.out, rc.sim.params, sol);
    m.phase_err = phase_lock_error(m.out, sol);
    m.traj_err = 0.0;
    for (const auto& s : m.out.trajectory) {
        double d = s.x_p - sol.x_traj(s.t);
        if (rc.sim.grid.bc == BoundaryCondition::Periodic)
            d = std::remainder(d, rc.sim.grid.L);
        m.traj_err = std::max(m.traj_err, std::abs(d));
    }
    if (!m.out.diagnostics.empty()) {
        const auto& d0 = m.out.diagnostics.front();
        const double E0 = d0.E_field + d0.E_kin + d0.E_clock;
        const double P0 = d0.P_field + d0.P_particle;
        const double pscale = std::max(std::abs(P0), E0 / rc.sim.params.c);
        m.energy_drift = 0.0;
        m.momentum_drift = 0.0;
        for (const auto& d : m.out.diagnostics) {
            const double E = d.E_field + d.E_kin + d.E_clock;
            const double P = d.P_field + d.P_particle;
            m.energy_drift =
                std::max(m.energy_drift, std::abs(E - E0) / std::abs(E0));
            m.momentum_drift =
                std::max(m.momentum_drift, std::abs(P - P0) / pscale);
        }
    }
    m.ok = !m.out.aborted;
    return m;
}

double max_trajectory_gap(const RunOutput& a, const RunOutput& b, double L,
                          bool periodic) {
    if (a.trajectory.size() != b.trajectory.size() || a.trajectory.empty())
        return kNaN;
    double gap = 0.0;
    for (size_t i = 0; i < a.trajectory.size(); ++i) {
        double d = a.trajectory[i].x_p - b.trajectory[i].x_p;
        if (periodic) d = std::remainder(d, L);
        gap = std::max(gap, std::abs(d));
    }
    return gap;
}

TransparencySolution fig2_solution() {
    const auto rc = resolve(scenario_config("bradyon_fig2"));
    return analytic_from_config(rc);
}

TransparencySolution fig3_solution() {
    const auto rc = resolve(scenario_config("tachyon_fig3"));
    return analytic_from_config(rc);
}

void check_dispersion(ValidationReport& rep) {
    const auto brad = fig2_solution();
    const auto tach = fig3_solution();
    push_less(rep, "dispersion.bradyon",
              "normalized dispersion residual, subsonic set",
              std::abs(dispersion_residual(brad)), 1e-12);
    push_less(rep, "dispersion.tachyon",
              "normalized dispersion residual, supersonic set",
              std::abs(dispersion_residual(tach)), 1e-12);

    // matched pair: same co-moving pulsation, w_p = c^2 / v_p
    const PhysicalParams pp = PhysicalParams::make(1.0, 1.0, 0.1, 1.0);
    const auto b = make_bradyon(pp, 1.0, 1.7, 0.0, 0.0, 0.23, 0.0);
    const auto t = make_tachyon(pp, 1.0, 1.7, 0.0, 0.0, 1.0 / 0.23, 0.0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ud(-5.0, 5.0);
    double swap_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double tt = ud(rng), xx = ud(rng);
        const auto pb = phases(b, tt, xx);
        const auto pt = phases(t, tt, xx);
        swap_err = std::max(swap_err, std::abs(pt.S - pb.Phi));
        swap_err = std::max(swap_err, std::abs(pt.Phi - pb.S));
    }
    push_less(rep, "duality.swap",
              "carrier/envelope phase swap over 1000 samples [rad]", swap_err,
              1e-12);

    const auto dp = doppler_decompose(brad);
    double doppler_err = 0.0;
    std::uniform_real_distribution<double> uds(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double tt = uds(rng), xx = uds(rng);
        const double rebuilt =
            dp.amp * std::cos(dp.omega_plus * (tt - xx / brad.c) +
                              dp.phase_plus) +
            dp.amp * std::cos(dp.omega_minus * (tt + xx / brad.c) +
                              dp.phase_minus);
        doppler_err = std::max(doppler_err,
                               std::abs(rebuilt - eval_field(brad, tt, xx)));
    }
    push_less(rep, "doppler.reconstruction",
              "two-wave rebuild error over 1000 samples / B",
              doppler_err / brad.B, 1e-12);
    const double v = brad.speed, w0 = brad.omega_lab;
    const double shift_err =
        std::max(std::abs(dp.omega_plus - w0 * (1.0 + v / brad.c)),
                 std::abs(dp.omega_minus - w0 * (1.0 - v / brad.c)));
    push_less(rep, "doppler.shifts", "shifted pulsation identity residual",
              shift_err, 1e-15);

    double guid_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double tt = ud(rng), xx = ud(rng);
        guid_err = std::max(guid_err,
                            std::abs(guidance_velocity(brad, tt, xx) - v) /
                                std::abs(v));
    }
    push_less(rep, "guidance.velocity",
              "relative error of the pilot velocity law", guid_err, 1e-14);
}

void check_transparency_family(ValidationReport& rep, const std::string& tag,
                               const ResolvedConfig& rc,
                               double lambda_group) {
    const RunMetrics m = transparency_metrics(rc);
    push_less(rep, tag + ".normal_force",
              "max |N| / (m omega_p^2 A) along the run",
              m.residual.max_abs_N_normalized, 1e-3);
    push_less(rep, tag + ".trajectory",
              "max |x_p - (v t + x0)| / lambda_group",
              m.traj_err / lambda_group, 1e-4);
    push_less(rep, tag + ".phase_lock",
              "max carrier-vs-clock phase error [rad]", m.phase_err, 1e-2);
    push_less(rep, tag + ".energy_drift", "max relative energy drift",
              m.energy_drift, 1e-6);
    push_less(rep, tag + ".momentum_drift", "max relative momentum drift",
              m.momentum_drift, 1e-6);
}

void check_bradyon_fig2(ValidationReport& rep, const ConfigFile* overrides) {
    const ConfigFile base = seeded("bradyon_fig2", overrides);
    const ResolvedConfig rc = resolve(base);
    const TransparencySolution sol = analytic_from_config(rc);
    const double lambda_group = 2.0 * kPi * sol.c / sol.omega_lab;
    check_transparency_family(rep, "bradyon", rc, lambda_group);

    // mass independence: scale the bead 10x, same trajectory
    ConfigFile heavy = base;
    heavy["particle"]["mass"] =
        format_double(rc.sim.params.m_p * 10.0);
    const ResolvedConfig rch = resolve(heavy);
    const RunOutput out_base =
        run(rc.sim, initial_state(rc), nullptr);
    const RunOutput out_heavy = run(rch.sim, initial_state(rch), nullptr);
    const double gap_mass = max_trajectory_gap(
        out_base, out_heavy, rc.sim.grid.L,
        rc.sim.grid.bc == BoundaryCondition::Periodic);
    push_less(rep, "bradyon.mass_independence",
              "trajectory shift under 10x bead mass / lambda_group",
              gap_mass / lambda_group, 1e-6);

    // scheme cross-validation at n and n/2
    auto scheme_gap = [&](int n) {
        ConfigFile alt = base;
        alt["string"]["nodes"] = std::to_string(n);
        ConfigFile vd = alt;
        vd["numerics"]["scheme"] = "variable_density";
        const ResolvedConfig ra = resolve(alt), rv = resolve(vd);
        const RunOutput oa = run(ra.sim, initial_state(ra), nullptr);
        const RunOutput ov = run(rv.sim, initial_state(rv), nullptr);
        return max_trajectory_gap(oa, ov, ra.sim.grid.L,
                                  ra.sim.grid.bc ==
                                      BoundaryCondition::Periodic);
    };
    const double gap_fine = scheme_gap(rc.sim.grid.n);
    const double gap_coarse = scheme_gap(rc.sim.grid.n / 2);
    push_less(rep, "schemes.gap",
              "SourceSplit vs VariableDensity trajectory gap / lambda_group",
              gap_fine / lambda_group, 1e-3);
    push_less(rep, "schemes.refinement",
              "gap ratio fine/coarse under halved dx", gap_fine / gap_coarse,
              1.0);

    // control: doubled spring must break transparency visibly
    ConfigFile detuned = base;
    detuned["particle"]["omega_p"] =
        format_double(rc.sim.params.omega_p * 2.0);
    detuned["init"]["omega_prime"] = format_double(sol.omega_prime);
    detuned["numerics"]["t_end"] =
        format_double(std::min(rc.sim.t_end, 20.0));
    const ResolvedConfig rd = resolve(detuned);
    const TransparencySolution ds = analytic_from_config(rd);
    const RunOutput od = run(rd.sim, initial_state(rd), &ds);
    const auto residual = transparency_residual(od, rd.sim.params, ds);
    push_greater(rep, "control.detuned",
                 "max |N| / (m omega_p^2 A) with the spring detuned 2x",
                 residual.max_abs_N_normalized, 0.1);
}

void check_tachyon_fig3(ValidationReport& rep, const ConfigFile* overrides) {
    const ResolvedConfig rc = resolve(seeded("tachyon_fig3", overrides));
    const TransparencySolution sol = analytic_from_config(rc);
    const double lambda_group = 2.0 * kPi * sol.c / sol.omega_lab;
    check_transparency_family(rep, "tachyon", rc, lambda_group);

    const auto dB = debroglie_quantities(sol);
    push_less(rep, "tachyon.lambda_phase",
              "|lambda_phase - 0.1| from the caption set",
              std::abs(dB.lambda_phase - 0.1), 1e-12);
    push_less(rep, "tachyon.lambda_group",
              "|lambda_group - 1| from the caption set",
              std::abs(dB.lambda_group - 1.0), 1e-12);
}

void check_conservation(ValidationReport& rep, const ConfigFile* overrides) {
    const ConfigFile base = seeded("conservation", overrides);
    const ResolvedConfig top = resolve(base);
    const int n_top = top.sim.grid.n;
    std::vector<double> drift_e, drift_p;
    for (int n = n_top / 4; n <= n_top; n *= 2) {
        ConfigFile cfg = base;
        cfg["string"]["nodes"] = std::to_string(n);
        // Refine at fixed physical kernel width: the regularized problem is
        // then grid-independent and both ledgers converge to it.
        cfg["numerics"]["kernel_scale"] =
            std::to_string(std::max(1, top.sim.kernel_scale * n / n_top));
        const ResolvedConfig rc = resolve(cfg);
        const RunOutput out = run(rc.sim, initial_state(rc), nullptr);
        if (out.aborted || out.diagnostics.empty()) {
            drift_e.push_back(kNaN);
            drift_p.push_back(kNaN);
            continue;
        }
        const auto& d0 = out.diagnostics.front();
        const double E0 = d0.E_field + d0.E_kin + d0.E_clock;
        const double P0 = d0.P_field + d0.P_particle;
        const double pscale = std::max(std::abs(P0), E0 / rc.sim.params.c);
        double de = 0.0, dp = 0.0;
        for (const auto& d : out.diagnostics) {
            const double E = d.E_field + d.E_kin + d.E_clock;
            const double P = d.P_field + d.P_particle;
            de = std::max(de, std::abs(E - E0) / E0);
            dp = std::max(dp, std::abs(P - P0) / pscale);
        }
        drift_e.push_back(de);
        drift_p.push_back(dp);
    }
    push_less(rep, "conservation.energy",
              "relative energy drift, pulse scattering at top resolution",
              drift_e.back(), 1e-4);
    push_less(rep, "conservation.momentum",
              "relative momentum drift, pulse scattering at top resolution",
              drift_p.back(), 1e-4);
    auto order = [](const std::vector<double>& d) {
        if (d.size() < 3) return kNaN;
        const double o1 = std::log2(d[0] / d[1]);
        const double o2 = std::log2(d[1] / d[2]);
        return 0.5 * (o1 + o2);
    };
    // A drift sitting at the integrator/roundoff floor on every level (three
    // orders below the acceptance threshold) has converged a fortiori; the
    // slope of noise is not a meaningful order.
    constexpr double kFloor = 1e-7;
    auto push_order = [&](const std::string& id, const std::string& desc,
                          const std::vector<double>& d) {
        const double o = order(d);
        const double worst = *std::max_element(d.begin(), d.end());
        CheckResult c{id, desc, o, 1.9, false};
        c.pass = (o == o) && (o > 1.9 || worst < kFloor);
        rep.checks.push_back(c);
    };
    push_order("conservation.energy_order",
               "drift decay order across two halvings of dx (or every level "
               "below the 1e-7 measurement floor)",
               drift_e);
    push_order("conservation.momentum_order",
               "momentum drift decay order across two halvings of dx (or "
               "every level below the 1e-7 measurement floor)",
               drift_p);
}

void check_convergence(ValidationReport& rep, const ConfigFile* overrides) {
    const ResolvedConfig rc = resolve(seeded("convergence", overrides));
    const TransparencySolution sol = analytic_from_config(rc);
    const auto spatial = spatial_convergence_study(rc.sim, sol, 4);
    push_greater(rep, "convergence.spatial",
                 "trajectory error order across three halvings of dx",
                 spatial.order, 1.9);
    Grid tgrid{1.0, 128, BoundaryCondition::Periodic};
    const auto temporal =
        temporal_convergence_study(tgrid, rc.sim.params, 3, 0.5, 4);
    push_less(rep, "convergence.temporal",
              "|measured temporal order - 4| on a smooth free-field mode",
              std::abs(temporal.order - 4.0), 0.5);
}

}  // namespace

ValidationReport validate_scenario(const std::string& name,
                                   const ConfigFile* overrides) {
    ValidationReport rep;
    rep.scenario = name;
    if (name == "dispersion")
        check_dispersion(rep);
    else if (name == "bradyon_fig2")
        check_bradyon_fig2(rep, overrides);
    else if (name == "tachyon_fig3")
        check_tachyon_fig3(rep, overrides);
    else if (name == "conservation")
        check_conservation(rep, overrides);
    else if (name == "convergence")
        check_convergence(rep, overrides);
    else
        throw std::invalid_argument(
            "unknown scenario '" + name +
            "'; known: bradyon_fig2 tachyon_fig3 dispersion conservation "
            "convergence");
    rep.all_pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                               [](const CheckResult& c) { return c.pass; });
    return rep;
}

std::string render_report(const ValidationReport& report) {
    std::ostringstream out;
    out << "scenario: " << report.scenario << "\n";
    for (const auto& c : report.checks) {
        out << (c.pass ? "PASS" : "FAIL") << "  " << std::left
            << std::setw(28) << c.id << " measured " << std::scientific
            << std::setprecision(3) << c.measured << " vs " << c.threshold
            << std::defaultfloat << "  (" << c.description << ")\n";
    }
    out << (report.all_pass ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    return out.str();
}

std::string render_report_csv(const ValidationReport& report) {
    std::ostringstream out;
    out << "id,description,measured,threshold,pass\n";
    for (const auto& c : report.checks) {
        out << c.id << ",\"" << c.description << "\","
            << format_double(c.measured) << ',' << format_double(c.threshold)
            << ',' << (c.pass ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace strwave
