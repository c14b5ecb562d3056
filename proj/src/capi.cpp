#include "strwave.h"

#include <cstring>
#include <stdexcept>
#include <string>

#include "strwave/analytic.hpp"
#include "strwave/config.hpp"
#include "strwave/diagnostics.hpp"
#include "strwave/io.hpp"
#include "strwave/sweep.hpp"
#include "strwave/validate.hpp"

using namespace strwave;

struct sw_config {
    ConfigFile file;
};

struct sw_solution {
    TransparencySolution sol;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& what) {
    g_last_error = what;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

/// Runs body(), translating exceptions into status codes.
template <typename F>
int guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const std::invalid_argument& e) {
        return fail(SW_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(SW_ERR_RUNTIME, e.what());
    }
}

}  // namespace

extern "C" {

int sw_config_create(sw_config** out) {
    return guarded([&] {
        if (!out) return fail(SW_ERR_INVALID, "out is null");
        *out = new sw_config{};
        return static_cast<int>(SW_OK);
    });
}

int sw_config_from_file(const char* path, sw_config** out) {
    return guarded([&] {
        if (!path || !out) return fail(SW_ERR_INVALID, "path/out is null");
        *out = new sw_config{load_ini(path)};
        return static_cast<int>(SW_OK);
    });
}

int sw_config_from_scenario(const char* name, sw_config** out) {
    return guarded([&] {
        if (!name || !out) return fail(SW_ERR_INVALID, "name/out is null");
        *out = new sw_config{scenario_config(name)};
        return static_cast<int>(SW_OK);
    });
}

int sw_config_set(sw_config* cfg, const char* dotted_key, const char* value) {
    return guarded([&] {
        if (!cfg || !dotted_key || !value)
            return fail(SW_ERR_INVALID, "cfg/key/value is null");
        ConfigFile trial = cfg->file;
        apply_override(trial,
                       std::string(dotted_key) + "=" + std::string(value));
        resolve(trial);  // reject unknown keys or bad values eagerly
        cfg->file = std::move(trial);
        return static_cast<int>(SW_OK);
    });
}

int sw_config_serialize(const sw_config* cfg, char** out_text) {
    return guarded([&] {
        if (!cfg || !out_text)
            return fail(SW_ERR_INVALID, "cfg/out_text is null");
        *out_text = dup_string(serialize(resolve(cfg->file)));
        return static_cast<int>(SW_OK);
    });
}

void sw_config_free(sw_config* cfg) { delete cfg; }

int sw_solution_create(const sw_config* cfg, sw_solution** out) {
    return guarded([&] {
        if (!cfg || !out) return fail(SW_ERR_INVALID, "cfg/out is null");
        *out = new sw_solution{analytic_from_config(resolve(cfg->file))};
        return static_cast<int>(SW_OK);
    });
}

int sw_solution_eval(const sw_solution* sol, double t, double x, double* u,
                     double* carrier_phase, double* envelope_phase) {
    return guarded([&] {
        if (!sol) return fail(SW_ERR_INVALID, "sol is null");
        if (u) *u = eval_field(sol->sol, t, x);
        if (carrier_phase || envelope_phase) {
            const PhasePair ph = phases(sol->sol, t, x);
            if (carrier_phase) *carrier_phase = ph.S;
            if (envelope_phase) *envelope_phase = ph.Phi;
        }
        return static_cast<int>(SW_OK);
    });
}

int sw_solution_get(const sw_solution* sol, const char* name, double* out) {
    return guarded([&] {
        if (!sol || !name || !out)
            return fail(SW_ERR_INVALID, "sol/name/out is null");
        const TransparencySolution& s = sol->sol;
        const std::string key = name;
        if (key == "omega_lab") *out = s.omega_lab;
        else if (key == "k_lab") *out = s.k_lab;
        else if (key == "gamma") *out = s.gamma;
        else if (key == "clock_pulsation") *out = s.clock_pulsation;
        else if (key == "A") *out = s.A;
        else if (key == "phi") *out = s.phi;
        else if (key == "B") *out = s.B;
        else if (key == "omega_prime") *out = s.omega_prime;
        else if (key == "speed") *out = s.speed;
        else if (key == "c") *out = s.c;
        else if (key == "x_init") *out = s.x_init;
        else if (key == "dispersion_residual") *out = dispersion_residual(s);
        else if (key == "lambda_phase")
            *out = debroglie_quantities(s).lambda_phase;
        else if (key == "lambda_group")
            *out = debroglie_quantities(s).lambda_group;
        else if (key == "T_phase") *out = debroglie_quantities(s).T_phase;
        else if (key == "T_group") *out = debroglie_quantities(s).T_group;
        else
            return fail(SW_ERR_INVALID, "unknown quantity '" + key + "'");
        return static_cast<int>(SW_OK);
    });
}

int sw_solution_table(const sw_solution* sol, const double* times,
                      int n_times, const double* positions, int n_positions,
                      char** out_csv) {
    return guarded([&] {
        if (!sol || !times || !positions || !out_csv)
            return fail(SW_ERR_INVALID, "sol/times/positions/out_csv is null");
        if (n_times <= 0 || n_positions <= 0)
            return fail(SW_ERR_INVALID, "times/positions must be non-empty");
        AnalyticTableRequest req;
        req.times.assign(times, times + n_times);
        req.positions.assign(positions, positions + n_positions);
        *out_csv = dup_string(analytic_table(sol->sol, req));
        return static_cast<int>(SW_OK);
    });
}

void sw_solution_free(sw_solution* sol) { delete sol; }

int sw_simulate(const sw_config* cfg, const char* out_dir) {
    return guarded([&] {
        if (!cfg || !out_dir)
            return fail(SW_ERR_INVALID, "cfg/out_dir is null");
        const SimulationSummary s =
            simulate_to_directory(resolve(cfg->file), out_dir);
        if (s.aborted) return fail(SW_ERR_UNSTABLE, s.abort_reason);
        return static_cast<int>(SW_OK);
    });
}

int sw_validate(const char* scenario, const sw_config* overrides,
                char** report, char** report_csv, int* all_pass) {
    return guarded([&] {
        if (!scenario) return fail(SW_ERR_INVALID, "scenario is null");
        const ValidationReport rep = validate_scenario(
            scenario, overrides ? &overrides->file : nullptr);
        if (report) *report = dup_string(render_report(rep));
        if (report_csv) *report_csv = dup_string(render_report_csv(rep));
        if (all_pass) *all_pass = rep.all_pass ? 1 : 0;
        return static_cast<int>(SW_OK);
    });
}

int sw_convergence(const sw_config* cfg, double* spatial_order,
                   double* temporal_order) {
    return guarded([&] {
        if (!cfg) return fail(SW_ERR_INVALID, "cfg is null");
        const ResolvedConfig rc = resolve(cfg->file);
        if (spatial_order) {
            const TransparencySolution sol = analytic_from_config(rc);
            *spatial_order = spatial_convergence_study(rc.sim, sol, 4).order;
        }
        if (temporal_order) {
            Grid grid{1.0, 128, BoundaryCondition::Periodic};
            *temporal_order =
                temporal_convergence_study(grid, rc.sim.params, 3, 0.5, 4)
                    .order;
        }
        return static_cast<int>(SW_OK);
    });
}

int sw_sweep(const sw_config* cfg, const char* const* axis_specs, int n_axes,
             const char* out_dir, char** index_csv) {
    return guarded([&] {
        if (!cfg || !axis_specs || !out_dir)
            return fail(SW_ERR_INVALID, "cfg/axis_specs/out_dir is null");
        if (n_axes <= 0)
            return fail(SW_ERR_INVALID, "at least one axis is required");
        std::vector<SweepAxis> axes;
        for (int i = 0; i < n_axes; ++i) {
            if (!axis_specs[i])
                return fail(SW_ERR_INVALID, "axis spec is null");
            axes.push_back(parse_axis(axis_specs[i]));
        }
        const SweepOutcome outcome = run_sweep(cfg->file, axes, out_dir);
        if (index_csv) *index_csv = dup_string(outcome.index_csv);
        return static_cast<int>(SW_OK);
    });
}

const char* sw_last_error(void) { return g_last_error.c_str(); }

void sw_string_free(char* s) { delete[] s; }

}  // extern "C"
