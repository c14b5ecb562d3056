// Command line front end. Links only the C interface of the shared library.
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strwave.h"

namespace {

// CLI exit codes: 0 success/all-pass, 1 validation failure,
// 2 usage or configuration error, 3 numerical instability.
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnstable = 3;

int exit_code_for(int status) {
    switch (status) {
        case SW_OK: return 0;
        case SW_ERR_UNSTABLE: return kExitUnstable;
        default: return kExitUsage;
    }
}

int report_failure(int status) {
    std::fprintf(stderr, "error: %s\n", sw_last_error());
    return exit_code_for(status);
}

struct ConfigHandle {
    sw_config* cfg = nullptr;
    ~ConfigHandle() { sw_config_free(cfg); }
};

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { sw_string_free(s); }
};

// Precedence: --override flags > --config file > --seed-scenario defaults.
int build_config(const std::string& scenario, const std::string& config_path,
                 const std::vector<std::string>& overrides, ConfigHandle& out) {
    int status;
    if (!config_path.empty())
        status = sw_config_from_file(config_path.c_str(), &out.cfg);
    else if (!scenario.empty())
        status = sw_config_from_scenario(scenario.c_str(), &out.cfg);
    else
        status = sw_config_create(&out.cfg);
    if (status != SW_OK) return status;
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr,
                         "error: override '%s' is not key=value\n", ov.c_str());
            return SW_ERR_INVALID;
        }
        status = sw_config_set(out.cfg, ov.substr(0, eq).c_str(),
                               ov.substr(eq + 1).c_str());
        if (status != SW_OK) return status;
    }
    return SW_OK;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

// The domain length from the resolved config, for default sample positions.
double domain_length(sw_config* cfg) {
    OwnedString text;
    if (sw_config_serialize(cfg, &text.s) != SW_OK) return 1.0;
    std::istringstream in(text.s);
    std::string line;
    bool in_string = false;
    while (std::getline(in, line)) {
        if (line == "[string]") { in_string = true; continue; }
        if (!line.empty() && line.front() == '[') in_string = false;
        if (in_string && line.rfind("length = ", 0) == 0)
            return std::stod(line.substr(9));
    }
    return 1.0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"string-bead wave laboratory"};
    app.require_subcommand(1);

    std::string scenario, config_path, out_dir = "out";
    std::vector<std::string> overrides;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed-scenario", scenario,
                        "start from a built-in scenario");
        cmd->add_option("--config", config_path, "INI configuration file");
        cmd->add_option("--override", overrides,
                        "section.key=value, applied after the file");
        cmd->add_option("--out", out_dir, "output directory or file");
    };

    auto* analytic = app.add_subcommand(
        "analytic", "tabulate the closed-form field and phases");
    std::string times_arg = "0", positions_arg;
    int samples = 512;
    analytic->add_option("--times", times_arg, "comma-separated times");
    analytic->add_option("--positions", positions_arg,
                         "comma-separated positions (default: uniform)");
    analytic->add_option("--samples", samples,
                         "uniform position count when --positions is absent");
    add_common(analytic);

    auto* simulate =
        app.add_subcommand("simulate", "integrate the coupled system");
    add_common(simulate);

    auto* validate =
        app.add_subcommand("validate", "run a scenario's check family");
    std::string validate_name;
    validate->add_option("name", validate_name, "scenario name")->required();
    add_common(validate);

    auto* convergence =
        app.add_subcommand("convergence", "measure discretization orders");
    add_common(convergence);

    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
    std::vector<std::string> axes;
    sweep->add_option("--axis", axes, "section.key=v1,v2,... (repeatable)")
        ->required();
    add_common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    ConfigHandle cfg;
    {
        const int status =
            build_config(scenario, config_path, overrides, cfg);
        if (status != SW_OK) return report_failure(status);
    }

    if (analytic->parsed()) {
        sw_solution* sol = nullptr;
        int status = sw_solution_create(cfg.cfg, &sol);
        if (status != SW_OK) return report_failure(status);
        const std::vector<double> times = parse_number_list(times_arg);
        std::vector<double> positions;
        if (!positions_arg.empty()) {
            positions = parse_number_list(positions_arg);
        } else {
            const double L = domain_length(cfg.cfg);
            for (int i = 0; i < samples; ++i)
                positions.push_back(L * i / samples);
        }
        OwnedString csv;
        status = sw_solution_table(sol, times.data(),
                                   static_cast<int>(times.size()),
                                   positions.data(),
                                   static_cast<int>(positions.size()), &csv.s);
        sw_solution_free(sol);
        if (status != SW_OK) return report_failure(status);
        if (out_dir == "out" || out_dir == "-") {
            std::fputs(csv.s, stdout);
        } else {
            std::FILE* f = std::fopen(out_dir.c_str(), "wb");
            if (!f) {
                std::fprintf(stderr, "error: cannot write %s\n",
                             out_dir.c_str());
                return kExitUsage;
            }
            std::fputs(csv.s, f);
            std::fclose(f);
        }
        return 0;
    }

    if (simulate->parsed()) {
        const int status = sw_simulate(cfg.cfg, out_dir.c_str());
        if (status != SW_OK) return report_failure(status);
        std::printf("wrote %s/{trajectory.csv,snapshots.ndjson,"
                    "diagnostics.csv,config.ini}\n",
                    out_dir.c_str());
        return 0;
    }

    if (validate->parsed()) {
        // Overrides (and --config) act on top of the named scenario here.
        sw_config* ov = overrides.empty() && config_path.empty()
                            ? nullptr
                            : cfg.cfg;
        OwnedString report;
        int all_pass = 0;
        const int status = sw_validate(validate_name.c_str(), ov, &report.s,
                                       nullptr, &all_pass);
        if (status != SW_OK) return report_failure(status);
        std::fputs(report.s, stdout);
        return all_pass ? 0 : kExitValidationFailure;
    }

    if (convergence->parsed()) {
        if (scenario.empty() && config_path.empty()) {
            sw_config_free(cfg.cfg);
            cfg.cfg = nullptr;
            const int status =
                build_config("convergence", "", overrides, cfg);
            if (status != SW_OK) return report_failure(status);
        }
        double spatial = 0.0, temporal = 0.0;
        const int status = sw_convergence(cfg.cfg, &spatial, &temporal);
        if (status != SW_OK) return report_failure(status);
        std::printf("spatial_order,%g\ntemporal_order,%g\n", spatial,
                    temporal);
        return 0;
    }

    if (sweep->parsed()) {
        std::vector<const char*> specs;
        for (const auto& a : axes) specs.push_back(a.c_str());
        const int status =
            sw_sweep(cfg.cfg, specs.data(), static_cast<int>(specs.size()),
                     out_dir.c_str(), nullptr);
        if (status != SW_OK) return report_failure(status);
        std::printf("wrote %s/index.csv\n", out_dir.c_str());
        return 0;
    }

    return kExitUsage;
}
