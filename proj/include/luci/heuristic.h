#pragma once

#include "luci/diagram.h"

namespace luci {

// Greedy proper coloring of the preferred-shape conflict graph, in id order.
// Throws if more than four colors are needed.
std::vector<int> four_color(const GaugeStructure& gs, const ShapeCatalog& cat);

// Removes boundary measure qubits whose only operator is their own weight-one
// stabilizer, never appearing in any other operator's support. Updates the
// operator set, catalog and diagram in place; returns the removed qubits.
std::vector<Coord> trim_unused_boundary_qubits(GaugeStructure& gs, ShapeCatalog& cat,
                                               Diagram& diag);

struct HeuristicOptions {
    int rounds = 4;
    bool cyclic = true;
    bool trim = true;
};

// The vanilla scheduling pass: four-color, give each color priority in one
// board, fill greedily, repair superstabilizer windows if needed, then trim.
Diagram default_diagram(GaugeStructure& gs, ShapeCatalog& cat,
                        const HeuristicOptions& opts = {});

// One of the four symmetric canonical schedules of a dropout-free patch:
// mirror picks the reflected tree convention, shift the time offset.
Diagram canonical_diagram(const GaugeStructure& gs, const ShapeCatalog& cat, int mirror,
                          int shift, int rounds = 4);

}  // namespace luci
