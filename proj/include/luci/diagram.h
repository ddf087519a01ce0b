#pragma once

#include <map>
#include <string>
#include <vector>

#include "luci/shapes.h"

namespace luci {

enum class Provenance : uint8_t { Heuristic, Optimized, Imported };

// A measurement schedule: T boards, each a partial assignment of operators
// to shapes. Board index wraps modulo T when the schedule repeats.
struct Diagram {
    int d = 0;
    int rounds = 4;
    Provenance provenance = Provenance::Imported;
    std::vector<std::map<int, int>> boards;  // op id -> shape index

    int shape_at(int t, int op) const {
        const auto& b = boards[static_cast<size_t>(t)];
        auto it = b.find(op);
        return it == b.end() ? -1 : it->second;
    }
    bool measured(int t, int op) const { return shape_at(t, op) >= 0; }
    // f_{t,i} table.
    std::vector<std::vector<bool>> coverage(size_t nops) const;
};

struct Violation {
    std::string family;  // compat | measure-once | one-shape | superstab | shape-ref
    int t = -1;
    int op = -1;
    std::string detail;
};

std::vector<Violation> validate_diagram(const Diagram& diag, const GaugeStructure& gs,
                                        const ShapeCatalog& cat, bool cyclic = true);

// Text format: header "LUCI v1 d=<d> T=<T>", one board per blank-line block,
// one line per assignment: "t i measure_x measure_y orient basis".
std::string diagram_to_text(const Diagram& diag, const ShapeCatalog& cat);
Diagram diagram_from_text(const std::string& text, const ShapeCatalog& cat);

}  // namespace luci
