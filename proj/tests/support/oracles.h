#pragma once

#include <functional>

#include "luci/gauge.h"
#include "luci/gf2.h"

namespace luci::testsupport {

// Brute-force minimum-weight logical search: enumerate every support of
// weight <= wmax over the usable qubits, keep vectors commuting with all
// opposite-basis checks and outside the same-basis span. Returns -1 when no
// logical exists up to wmax. Independent of code_distance's search.
inline int exhaustive_distance(const GaugeStructure& gs, Basis basis, int wmax) {
    std::vector<Coord> kept;
    for (Coord q : gs.kept_region)
        if (gs.qubit_usable(q)) kept.push_back(q);
    size_t n = kept.size();
    auto qidx = [&](Coord q) {
        return static_cast<size_t>(std::lower_bound(kept.begin(), kept.end(), q) - kept.begin());
    };
    std::vector<BitVec> checks;
    Gf2Basis trivial(n);
    for (const auto& op : gs.ops) {
        BitVec v(n);
        for (Coord q : op.support) v.set(qidx(q));
        if (op.basis == basis)
            trivial.insert(v);
        else
            checks.push_back(v);
    }
    for (int w = 1; w <= wmax; w++) {
        std::vector<size_t> idx(static_cast<size_t>(w));
        int found = -1;
        std::function<void(size_t, size_t)> rec = [&](size_t start, size_t depth) {
            if (found >= 0) return;
            if (depth == static_cast<size_t>(w)) {
                BitVec v(n);
                for (size_t q : idx) v.set(q);
                for (const auto& c : checks)
                    if (v.odd_and(c)) return;
                if (!trivial.contains(v)) found = w;
                return;
            }
            for (size_t q = start; q + (static_cast<size_t>(w) - depth - 1) < n; q++) {
                idx[depth] = q;
                rec(q + 1, depth + 1);
                if (found >= 0) return;
            }
        };
        rec(0, 0);
        if (found >= 0) return found;
    }
    return -1;
}

}  // namespace luci::testsupport
