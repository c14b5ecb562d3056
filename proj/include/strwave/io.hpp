#pragma once
#include <string>
#include <vector>

#include "strwave/analytic.hpp"
#include "strwave/config.hpp"
#include "strwave/solver.hpp"

namespace strwave {

/// Shortest decimal form that re-reads to the same double.
std::string format_double(double v);

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& trajectory);
void write_snapshots_ndjson(const std::string& path,
                            const std::vector<FieldSnapshot>& snapshots);
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records);
void write_text_file(const std::string& path, const std::string& content);

struct AnalyticTableRequest {
    std::vector<double> times;
    std::vector<double> positions;
};

/// Sampled field and phases: header comments with the derived constants,
/// then rows t, x, u, S, Phi, carrier, envelope.
std::string analytic_table(const TransparencySolution& sol,
                           const AnalyticTableRequest& req);

struct SimulationSummary {
    bool aborted = false;
    std::string abort_reason;
    double max_N = 0.0;
    double max_Ma = 0.0;
    double energy_drift = 0.0;    // relative to the initial energy
    double momentum_drift = 0.0;  // relative to max(|P0|, E0/c)
};

SimulationSummary summarize(const RunOutput& out, const SimConfig& cfg);

/// Run the configuration and write trajectory.csv, snapshots.ndjson,
/// diagnostics.csv and the resolved config.ini into dir (created if absent).
/// Partial outputs are still written when the run aborts.
SimulationSummary simulate_to_directory(const ResolvedConfig& cfg,
                                        const std::string& dir);

}  // namespace strwave
