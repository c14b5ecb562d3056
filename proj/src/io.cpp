#include "strwave/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace strwave {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& trajectory) {
    auto out = open_out(path);
    out << "t,x_p,vx_p,z_p,N,Ma\n";
    for (const auto& s : trajectory) {
        out << format_double(s.t) << ',' << format_double(s.x_p) << ','
            << format_double(s.vx_p) << ',' << format_double(s.z_p) << ','
            << format_double(s.N) << ',' << format_double(s.Ma) << '\n';
    }
}

void write_snapshots_ndjson(const std::string& path,
                            const std::vector<FieldSnapshot>& snapshots) {
    auto out = open_out(path);
    for (const auto& snap : snapshots) {
        nlohmann::json rec;
        rec["t"] = snap.t;
        rec["u"] = snap.u;
        rec["v"] = snap.v;
        out << rec.dump() << '\n';
    }
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records) {
    auto out = open_out(path);
    out << "t,N,E_field,E_kin,E_clock,P_field,P_particle,Ma,"
           "constraint_residual,phase_lock_error\n";
    for (const auto& r : records) {
        out << format_double(r.t) << ',' << format_double(r.N) << ','
            << format_double(r.E_field) << ',' << format_double(r.E_kin) << ','
            << format_double(r.E_clock) << ',' << format_double(r.P_field)
            << ',' << format_double(r.P_particle) << ',' << format_double(r.Ma)
            << ',' << format_double(r.constraint_residual) << ',';
        if (r.phase_lock_error) out << format_double(*r.phase_lock_error);
        out << '\n';
    }
}

std::string analytic_table(const TransparencySolution& sol,
                           const AnalyticTableRequest& req) {
    std::ostringstream out;
    out << "# regime=" << regime_name(sol.regime)
        << " omega_lab=" << format_double(sol.omega_lab)
        << " k_lab=" << format_double(sol.k_lab)
        << " gamma=" << format_double(sol.gamma)
        << " clock_pulsation=" << format_double(sol.clock_pulsation)
        << " A=" << format_double(sol.A) << " phi=" << format_double(sol.phi)
        << "\n";
    out << "t,x,u,S,Phi,carrier,envelope\n";
    for (double t : req.times) {
        for (double x : req.positions) {
            const PhasePair ph = phases(sol, t, x);
            out << format_double(t) << ',' << format_double(x) << ','
                << format_double(eval_field(sol, t, x)) << ','
                << format_double(ph.S) << ',' << format_double(ph.Phi) << ','
                << format_double(sol.B * std::cos(ph.S)) << ','
                << format_double(sol.B * std::cos(ph.Phi)) << '\n';
        }
    }
    return out.str();
}

SimulationSummary summarize(const RunOutput& out, const SimConfig& cfg) {
    SimulationSummary s;
    s.aborted = out.aborted;
    s.abort_reason = out.abort_reason;
    for (const auto& t : out.trajectory) {
        s.max_N = std::max(s.max_N, std::abs(t.N));
        s.max_Ma = std::max(s.max_Ma, t.Ma);
    }
    if (!out.diagnostics.empty()) {
        const auto& d0 = out.diagnostics.front();
        const double E0 = d0.E_field + d0.E_kin + d0.E_clock;
        const double P0 = d0.P_field + d0.P_particle;
        const double pscale =
            std::max(std::abs(P0), E0 / cfg.params.c);
        for (const auto& d : out.diagnostics) {
            const double E = d.E_field + d.E_kin + d.E_clock;
            const double P = d.P_field + d.P_particle;
            if (E0 > 0.0)
                s.energy_drift =
                    std::max(s.energy_drift, std::abs(E - E0) / E0);
            if (pscale > 0.0)
                s.momentum_drift =
                    std::max(s.momentum_drift, std::abs(P - P0) / pscale);
        }
    }
    return s;
}

SimulationSummary simulate_to_directory(const ResolvedConfig& cfg,
                                        const std::string& dir) {
    std::filesystem::create_directories(dir);
    const CoupledState init = initial_state(cfg);
    std::optional<TransparencySolution> ref;
    if (cfg.init.mode == InitMode::AnalyticBradyon ||
        cfg.init.mode == InitMode::AnalyticTachyon ||
        cfg.init.mode == InitMode::Surfer)
        ref = analytic_from_config(cfg);
    const RunOutput out = run(cfg.sim, init, ref ? &*ref : nullptr);
    write_text_file(dir + "/config.ini", serialize(cfg));
    write_trajectory_csv(dir + "/trajectory.csv", out.trajectory);
    write_snapshots_ndjson(dir + "/snapshots.ndjson", out.snapshots);
    write_diagnostics_csv(dir + "/diagnostics.csv", out.diagnostics);
    return summarize(out, cfg.sim);
}

}  // namespace strwave
