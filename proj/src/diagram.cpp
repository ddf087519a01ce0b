#include "luci/diagram.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace luci {

std::vector<std::vector<bool>> Diagram::coverage(size_t nops) const {
    std::vector<std::vector<bool>> f(static_cast<size_t>(rounds), std::vector<bool>(nops, false));
    for (size_t t = 0; t < boards.size(); t++)
        for (auto [op, p] : boards[t]) f[t][static_cast<size_t>(op)] = true;
    return f;
}

std::vector<Violation> validate_diagram(const Diagram& diag, const GaugeStructure& gs,
                                        const ShapeCatalog& cat, bool cyclic) {
    std::vector<Violation> out;
    int T = diag.rounds;
    if (static_cast<int>(diag.boards.size()) != T) {
        out.push_back({"shape-ref", -1, -1, "board count differs from T"});
        return out;
    }
    size_t nops = gs.ops.size();
    for (int t = 0; t < T; t++) {
        const auto& board = diag.boards[static_cast<size_t>(t)];
        for (auto [op, p] : board) {
            if (op < 0 || static_cast<size_t>(op) >= nops || p < 0 || p >= cat.count(op)) {
                out.push_back({"shape-ref", t, op, "unknown operator or shape index"});
                continue;
            }
        }
        for (auto it = board.begin(); it != board.end(); ++it)
            for (auto jt = std::next(it); jt != board.end(); ++jt) {
                if (it->second < 0 || jt->second < 0) continue;
                if (static_cast<size_t>(it->first) >= nops || static_cast<size_t>(jt->first) >= nops)
                    continue;
                if (cat.pair_incompatible(it->first, it->second, jt->first, jt->second))
                    out.push_back({"compat", t, it->first,
                                   "conflicts with operator " + std::to_string(jt->first)});
            }
    }
    auto f = diag.coverage(nops);
    for (size_t i = 0; i < nops; i++) {
        bool any = false;
        for (int t = 0; t < T; t++) any = any || f[static_cast<size_t>(t)][i];
        if (!any)
            out.push_back({"measure-once", -1, static_cast<int>(i), "operator never measured"});
    }
    for (size_t s = 0; s < gs.superstabs.size(); s++) {
        const auto& ss = gs.superstabs[s];
        bool ok = false;
        int tmax = cyclic ? T : T - 1;
        for (int t = 0; t < tmax && !ok; t++) {
            int t2 = (t + 1) % T;
            bool all = true;
            for (int m : ss.members)
                all = all && (f[static_cast<size_t>(t)][static_cast<size_t>(m)] ||
                              f[static_cast<size_t>(t2)][static_cast<size_t>(m)]);
            ok = all;
        }
        if (!ok)
            out.push_back({"superstab", -1, ss.members.front(),
                           "superstabilizer " + std::to_string(s) +
                               " has no covering round pair"});
    }
    return out;
}

std::string diagram_to_text(const Diagram& diag, const ShapeCatalog& cat) {
    std::ostringstream os;
    os << "LUCI v1 d=" << diag.d << " T=" << diag.rounds << "\n";
    for (int t = 0; t < diag.rounds; t++) {
        if (t > 0) os << "\n";
        for (auto [op, p] : diag.boards[static_cast<size_t>(t)]) {
            const Shape& sh = cat.at(op, p);
            os << t << " " << op << " " << sh.root.x << " " << sh.root.y << " " << sh.glyph()
               << " " << basis_char(sh.basis) << "\n";
        }
    }
    return os.str();
}

Diagram diagram_from_text(const std::string& text, const ShapeCatalog& cat) {
    std::istringstream is(text);
    std::string header;
    std::getline(is, header);
    Diagram diag;
    diag.provenance = Provenance::Imported;
    if (std::sscanf(header.c_str(), "LUCI v1 d=%d T=%d", &diag.d, &diag.rounds) != 2)
        throw std::runtime_error("bad diagram header: " + header);
    if (diag.rounds < 1) throw std::runtime_error("bad round count");
    diag.boards.resize(static_cast<size_t>(diag.rounds));
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int t, op, mx, my;
        char orient, basis;
        if (!(ls >> t >> op >> mx >> my >> orient >> basis))
            throw std::runtime_error("bad diagram line: " + line);
        if (t < 0 || t >= diag.rounds) throw std::runtime_error("board index out of range");
        if (op < 0 || static_cast<size_t>(op) >= cat.shapes.size())
            throw std::runtime_error("unknown operator id " + std::to_string(op));
        int p = cat.find(op, {mx, my}, orient);
        if (p < 0) throw std::runtime_error("no shape matches line: " + line);
        if (basis_char(cat.at(op, p).basis) != basis)
            throw std::runtime_error("basis mismatch in line: " + line);
        auto [it, fresh] = diag.boards[static_cast<size_t>(t)].emplace(op, p);
        if (!fresh) throw std::runtime_error("duplicate assignment for operator " +
                                             std::to_string(op));
    }
    return diag;
}

}  // namespace luci
