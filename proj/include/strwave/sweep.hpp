#pragma once
#include <string>
#include <vector>

#include "strwave/config.hpp"
#include "strwave/io.hpp"

namespace strwave {

/// One sweep dimension: a config key ("section.key") and the values it
/// takes. Values must parse as numbers.
struct SweepAxis {
    std::string section;
    std::string key;
    std::vector<std::string> values;
};

/// "section.key=v1,v2,..." -> axis. Throws std::invalid_argument on
/// malformed specs, unknown keys or non-numeric values.
SweepAxis parse_axis(const std::string& spec);

struct SweepPoint {
    std::vector<std::string> values;  // one per axis, same order
    std::string directory;
    SimulationSummary summary;
};

struct SweepOutcome {
    std::vector<SweepAxis> axes;
    std::vector<SweepPoint> points;
    std::string index_csv;  // also written to <out_dir>/index.csv
};

/// Cartesian product over the axes (at most 10000 points, validated before
/// any run), one subdirectory per point under out_dir, plus an index.csv
/// in lexicographic point order (last axis fastest).
SweepOutcome run_sweep(const ConfigFile& base,
                       const std::vector<SweepAxis>& axes,
                       const std::string& out_dir);

}  // namespace strwave
