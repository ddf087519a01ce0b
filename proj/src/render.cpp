#include "luci/render.h"

#include <map>
#include <sstream>

namespace luci {

std::string render_text(const Diagram& diag, const GaugeStructure& gs, const ShapeCatalog& cat) {
    std::ostringstream os;
    os << diagram_to_text(diag, cat);
    int dd = 2 * gs.patch.d;
    for (int t = 0; t < diag.rounds; t++) {
        os << "# board " << t << "\n";
        // One character per lattice point: glyph at measure roots, '.' for
        // idle usable qubits, 'x' for broken or removed ones.
        std::map<Coord, char> marks;
        for (auto [op, p] : diag.boards[static_cast<size_t>(t)])
            marks[cat.at(op, p).root] = cat.at(op, p).glyph();
        for (int y = dd; y >= 0; y--) {
            os << "# ";
            for (int x = 0; x <= dd; x++) {
                Coord q{x, y};
                if (!gs.patch.has_qubit(q)) {
                    os << ' ';
                    continue;
                }
                auto it = marks.find(q);
                if (it != marks.end())
                    os << it->second;
                else if (!gs.qubit_usable(q))
                    os << 'x';
                else
                    os << '.';
            }
            os << "\n";
        }
    }
    return os.str();
}

namespace {

void svg_line(std::ostringstream& os, double x1, double y1, double x2, double y2,
              const char* color, double w) {
    os << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
       << "\" stroke=\"" << color << "\" stroke-width=\"" << w << "\"/>\n";
}

}  // namespace

std::string render_svg(const Diagram& diag, const GaugeStructure& gs, const ShapeCatalog& cat) {
    int dd = 2 * gs.patch.d;
    double cell = 16.0;
    double margin = 24.0;
    double bw = dd * cell + 2 * margin;
    double bh = dd * cell + 2 * margin;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << bw * diag.rounds
       << "\" height=\"" << bh << "\">\n";
    for (int t = 0; t < diag.rounds; t++) {
        double ox = t * bw + margin;
        auto px = [&](Coord q) { return ox + q.x * cell; };
        auto py = [&](Coord q) { return margin + (dd - q.y) * cell; };
        os << "<text x=\"" << ox << "\" y=\"" << margin * 0.6 << "\" font-size=\"12\">board "
           << t << "</text>\n";
        for (Coord q : gs.patch.all_qubits) {
            const char* fill = gs.qubit_usable(q) ? (PatchSpec::is_data_coord(q) ? "#888" : "#bbb")
                                                  : "#e33";
            os << "<circle cx=\"" << px(q) << "\" cy=\"" << py(q) << "\" r=\"2.5\" fill=\""
               << fill << "\"/>\n";
        }
        for (const Coupler& c : gs.patch.couplers)
            if (!gs.coupler_usable(c))
                svg_line(os, px(c.a), py(c.a), px(c.b), py(c.b), "#e33", 1.0);
        for (auto [op, p] : diag.boards[static_cast<size_t>(t)]) {
            const Shape& sh = cat.at(op, p);
            const char* color = sh.basis == Basis::X ? "#3366cc" : "#cc7722";
            for (auto [c, tt] : sh.layer1)
                svg_line(os, px(c), py(c), px(tt), py(tt), color, 1.2);
            for (auto [c, tt] : sh.layer2)
                svg_line(os, px(c), py(c), px(tt), py(tt), color, 2.8);
            os << "<circle cx=\"" << px(sh.root) << "\" cy=\"" << py(sh.root)
               << "\" r=\"4\" fill=\"" << color << "\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace luci
