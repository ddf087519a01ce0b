#pragma once

#include <string>

#include "luci/diagram.h"

namespace luci {

// Text rendering: the canonical diagram format followed by per-board pictures
// as comment lines, so the output round-trips through diagram_from_text.
std::string render_text(const Diagram& diag, const GaugeStructure& gs, const ShapeCatalog& cat);

// One SVG with the T boards side by side: qubits, broken elements, and the
// assigned shapes (legs light, crossbeam dark, dot on the measure qubit).
std::string render_svg(const Diagram& diag, const GaugeStructure& gs, const ShapeCatalog& cat);

}  // namespace luci
