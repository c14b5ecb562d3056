#include "strwave/sweep.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace strwave {

namespace {

[[noreturn]] void bad(const std::string& what) {
    throw std::invalid_argument("sweep: " + what);
}

void require_number(const std::string& axis, const std::string& v) {
    char* end = nullptr;
    std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        bad("axis " + axis + " value '" + v + "' is not a number");
}

}  // namespace

SweepAxis parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        bad("axis '" + spec + "' is not of the form section.key=v1,v2,...");
    const std::string path = spec.substr(0, eq);
    const auto dot = path.find('.');
    if (dot == std::string::npos)
        bad("axis key '" + path + "' is not of the form section.key");
    SweepAxis axis;
    axis.section = path.substr(0, dot);
    axis.key = path.substr(dot + 1);
    if (!known_key(axis.section, axis.key))
        bad("unknown config key [" + axis.section + "] " + axis.key);
    std::istringstream values(spec.substr(eq + 1));
    std::string v;
    while (std::getline(values, v, ',')) {
        if (v.empty()) continue;
        require_number(path, v);
        axis.values.push_back(v);
    }
    if (axis.values.empty()) bad("axis " + path + " has no values");
    return axis;
}

SweepOutcome run_sweep(const ConfigFile& base,
                       const std::vector<SweepAxis>& axes,
                       const std::string& out_dir) {
    if (axes.empty()) bad("at least one axis is required");
    long total = 1;
    for (const auto& axis : axes) {
        total *= static_cast<long>(axis.values.size());
        if (total > 10000) bad("Cartesian product exceeds 10000 points");
    }
    // Validate every point's configuration before running any of them.
    std::vector<size_t> idx(axes.size(), 0);
    auto config_at = [&](const std::vector<size_t>& at) {
        ConfigFile cfg = base;
        for (size_t a = 0; a < axes.size(); ++a)
            cfg[axes[a].section][axes[a].key] = axes[a].values[at[a]];
        return cfg;
    };
    auto advance = [&](std::vector<size_t>& at) {
        for (size_t a = axes.size(); a-- > 0;) {
            if (++at[a] < axes[a].values.size()) return true;
            at[a] = 0;
        }
        return false;
    };
    do {
        resolve(config_at(idx)).sim.validate();
    } while (advance(idx));

    SweepOutcome outcome;
    outcome.axes = axes;
    std::filesystem::create_directories(out_dir);
    std::ostringstream index;
    index << "point,directory";
    for (const auto& axis : axes) index << ',' << axis.section << '.' << axis.key;
    index << ",aborted,max_N,max_Ma,energy_drift,momentum_drift\n";

    long point = 0;
    std::fill(idx.begin(), idx.end(), 0);
    do {
        char name[32];
        std::snprintf(name, sizeof(name), "pt_%04ld", point);
        SweepPoint sp;
        sp.directory = out_dir + "/" + name;
        for (size_t a = 0; a < axes.size(); ++a)
            sp.values.push_back(axes[a].values[idx[a]]);
        ConfigFile cfg = config_at(idx);
        cfg["output"]["directory"] = sp.directory;
        sp.summary = simulate_to_directory(resolve(cfg), sp.directory);
        index << name << ',' << sp.directory;
        for (const auto& v : sp.values) index << ',' << v;
        index << ',' << (sp.summary.aborted ? 1 : 0) << ','
              << format_double(sp.summary.max_N) << ','
              << format_double(sp.summary.max_Ma) << ','
              << format_double(sp.summary.energy_drift) << ','
              << format_double(sp.summary.momentum_drift) << '\n';
        outcome.points.push_back(std::move(sp));
        ++point;
    } while (advance(idx));

    outcome.index_csv = index.str();
    write_text_file(out_dir + "/index.csv", outcome.index_csv);
    return outcome;
}

}  // namespace strwave
