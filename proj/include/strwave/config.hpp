#pragma once
#include <map>
#include <string>
#include <vector>

#include "strwave/solver.hpp"

namespace strwave {

/// Raw INI content: section -> key -> value string. Sections and keys are
/// validated against the known schema when resolved.
using ConfigFile = std::map<std::string, std::map<std::string, std::string>>;

ConfigFile parse_ini(const std::string& text);
ConfigFile load_ini(const std::string& path);

/// "section.key=value" override, applied on top of file content.
void apply_override(ConfigFile& cfg, const std::string& spec);

/// True when [section] key exists in the schema.
bool known_key(const std::string& section, const std::string& key);

enum class InitMode { AnalyticBradyon, AnalyticTachyon, Surfer, Pulse, Zero };

struct InitSpec {
    InitMode mode = InitMode::AnalyticBradyon;
    double B = 0.01;
    double omega_prime = 0.0;  // co-moving pulsation; 0 = derive from spring
    double eta = 0.0;
    double xi = 0.0;
    double phi = 0.0;        // surfer clock phase
    int orientation = 1;     // surfer pulse direction
    double pulse_center = 0.5;
    double pulse_sigma = 0.05;
    double pulse_amplitude = 0.01;
};

struct OutputSpec {
    std::string directory = "out";
    int snapshots = 0;  // if > 0, overrides numerics output_stride
};

struct ResolvedConfig {
    SimConfig sim;
    InitSpec init;
    OutputSpec output;
    double x_init = 0.0;  // bead abscissa at t = 0
    double speed = 0.0;   // bead longitudinal speed at t = 0
};

/// Defaults overlaid with the file; throws std::invalid_argument on unknown
/// sections/keys or malformed values.
ResolvedConfig resolve(const ConfigFile& file);

/// Canonical INI text; re-parsing and resolving reproduces the same
/// configuration bit for bit.
std::string serialize(const ResolvedConfig& cfg);

/// Built-in scenario seeds: bradyon_fig2, tachyon_fig3, dispersion,
/// conservation, convergence.
ConfigFile scenario_config(const std::string& name);
std::vector<std::string> scenario_names();

/// The analytic solution the init section describes, when it describes one
/// (throws for pulse/zero modes).
TransparencySolution analytic_from_config(const ResolvedConfig& cfg);

/// Initial coupled state for any init mode.
CoupledState initial_state(const ResolvedConfig& cfg);

}  // namespace strwave
