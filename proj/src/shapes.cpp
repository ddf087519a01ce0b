#include "luci/shapes.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace luci {

Support Shape::touched() const {
    Support s = {root};
    for (const CnotLayer* layer : {&layer1, &layer2})
        for (auto [c, t] : *layer) {
            s.push_back(c);
            s.push_back(t);
        }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

char Shape::glyph() const {
    if (layer1.empty() && layer2.empty()) return 'o';
    // Partner of the root in its last CNOT layer; weight-2 early variant has
    // the single CNOT in layer 1 instead.
    bool early = false;
    Coord partner{};
    bool found = false;
    for (auto [c, t] : layer2)
        if (c == root || t == root) {
            partner = c == root ? t : c;
            found = true;
        }
    if (!found) {
        early = true;
        for (auto [c, t] : layer1)
            if (c == root || t == root) {
                partner = c == root ? t : c;
                found = true;
            }
    }
    if (!found) throw std::logic_error("shape has CNOTs but none touch the root");
    Coord dir = partner - root;
    for (int k = 0; k < 4; k++)
        if (kDiagonals[k] == dir) return static_cast<char>('a' + k + (early ? 4 : 0));
    throw std::logic_error("shape root partner is not diagonal");
}

namespace {

bool usable_edge(Coord u, Coord v, const PatchSpec& patch, const DropoutConfig& cfg) {
    Coupler c(u, v);
    return patch.has_coupler(c) && cfg.coupler_usable(c);
}

std::pair<Coord, Coord> merge_cnot(Coord removed, Coord kept, Basis b) {
    // Z products merge by removing the control, X products by removing the target.
    return b == Basis::Z ? std::make_pair(removed, kept) : std::make_pair(kept, removed);
}

}  // namespace

std::vector<Shape> enumerate_shapes(const MidCycleOp& op, const PatchSpec& patch,
                                    const DropoutConfig& cfg, bool restrict_roots) {
    const Support& s = op.support;
    std::vector<Shape> out;
    for (Coord root : s) {
        if (restrict_roots && !PatchSpec::is_measure_coord(root)) continue;
        if (s.size() == 1) {
            out.push_back({op.id, root, op.basis, {}, {}});
            continue;
        }
        // Active sets after layer 1: {root} or {root, x} with x adjacent.
        std::vector<Support> actives = {{root}};
        for (Coord x : s)
            if (x != root && usable_edge(root, x, patch, cfg)) {
                Support a = {root, x};
                std::sort(a.begin(), a.end());
                actives.push_back(a);
            }
        for (const Support& active : actives) {
            Support removed;
            for (Coord q : s)
                if (!support_contains(active, q)) removed.push_back(q);
            if (removed.size() > active.size()) continue;
            // All ways to match removed qubits into distinct active ones.
            std::vector<CnotLayer> matchings;
            if (removed.empty()) {
                matchings.push_back({});
            } else if (removed.size() == 1) {
                for (Coord v : active)
                    if (usable_edge(removed[0], v, patch, cfg))
                        matchings.push_back({merge_cnot(removed[0], v, op.basis)});
            } else if (removed.size() == 2) {
                for (Coord v1 : active)
                    for (Coord v2 : active) {
                        if (v1 == v2) continue;
                        if (usable_edge(removed[0], v1, patch, cfg) &&
                            usable_edge(removed[1], v2, patch, cfg))
                            matchings.push_back({merge_cnot(removed[0], v1, op.basis),
                                                 merge_cnot(removed[1], v2, op.basis)});
                    }
            }
            for (auto& m1 : matchings) {
                Shape sh{op.id, root, op.basis, m1, {}};
                if (active.size() == 2) {
                    Coord x = active[0] == root ? active[1] : active[0];
                    sh.layer2.push_back(merge_cnot(x, root, op.basis));
                }
                std::sort(sh.layer1.begin(), sh.layer1.end());
                out.push_back(std::move(sh));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Shape& a, const Shape& b) {
        return std::tie(a.root, a.layer1, a.layer2) < std::tie(b.root, b.layer1, b.layer2);
    });
    return out;
}

namespace {

// Union of both shapes' CNOT layers with exact duplicates fused.
std::vector<CnotLayer> joint_layers(const Shape& a, const Shape& b) {
    std::vector<CnotLayer> layers(2);
    for (int l = 0; l < 2; l++) {
        const CnotLayer& la = l == 0 ? a.layer1 : a.layer2;
        const CnotLayer& lb = l == 0 ? b.layer1 : b.layer2;
        layers[l] = la;
        layers[l].insert(layers[l].end(), lb.begin(), lb.end());
        std::sort(layers[l].begin(), layers[l].end());
        layers[l].erase(std::unique(layers[l].begin(), layers[l].end()), layers[l].end());
    }
    return layers;
}

bool layer_collision(const CnotLayer& layer) {
    std::vector<Coord> used;
    for (auto [c, t] : layer) {
        used.push_back(c);
        used.push_back(t);
    }
    std::sort(used.begin(), used.end());
    return std::adjacent_find(used.begin(), used.end()) != used.end();
}

}  // namespace

bool incompatible(const Shape& a, const Support& op_a, Basis basis_a, const Shape& b,
                  const Support& op_b, Basis basis_b) {
    if (a.root == b.root) return true;
    if (basis_a != basis_b && odd_overlap(op_a, op_b)) return true;
    auto layers = joint_layers(a, b);
    if (layer_collision(layers[0]) || layer_collision(layers[1])) return true;
    Support ia = op_a;
    propagate(ia, basis_a, layers);
    if (ia != Support{a.root}) return true;
    Support ib = op_b;
    propagate(ib, basis_b, layers);
    if (ib != Support{b.root}) return true;
    return false;
}

bool stretches(const Support& victim, Basis victim_basis, const Shape& s) {
    auto check = [&](const CnotLayer& layer) {
        for (auto [c, t] : layer) {
            bool in_c = support_contains(victim, c);
            bool in_t = support_contains(victim, t);
            if (in_c == in_t) continue;
            if (victim_basis == Basis::Z && in_t) return true;  // X errors ride control->target
            if (victim_basis == Basis::X && in_c) return true;  // Z errors ride target->control
        }
        return false;
    };
    return check(s.layer1) || check(s.layer2);
}

bool ShapeCatalog::pair_incompatible(int i, int p, int j, int q) const {
    ShapePairKey key = i < j ? ShapePairKey{i, p, j, q} : ShapePairKey{j, q, i, p};
    return std::binary_search(incompatible_pairs.begin(), incompatible_pairs.end(), key);
}

int ShapeCatalog::find(int op, Coord root, char glyph) const {
    const auto& list = shapes[static_cast<size_t>(op)];
    for (size_t p = 0; p < list.size(); p++)
        if (list[p].root == root && list[p].glyph() == glyph) return static_cast<int>(p);
    return -1;
}

namespace {

// CNOTs of the canonical round that act on the operator as it shrinks onto
// its ancilla; phase-0 operators shrink under layers 3,4 of the round,
// phase-1 operators under the reversed first half.
Shape canonical_shape_of(const MidCycleOp& op, const OpOrigin& origin,
                         const std::vector<CnotLayer>& round_layers) {
    auto acting = [](Support& s, Basis beta, const CnotLayer& layer) {
        CnotLayer used;
        std::vector<Coord> toggles;
        for (auto [c, t] : layer) {
            bool act = beta == Basis::Z ? support_contains(s, t) : support_contains(s, c);
            if (act) {
                used.emplace_back(c, t);
                toggles.push_back(beta == Basis::Z ? c : t);
            }
        }
        for (Coord q : toggles) support_toggle(s, q);
        std::sort(used.begin(), used.end());
        return used;
    };
    Shape sh;
    sh.op_id = op.id;
    sh.basis = op.basis;
    sh.root = origin.ancilla;
    Support s = op.support;
    if (origin.phase == 0) {
        sh.layer1 = acting(s, op.basis, round_layers[2]);
        sh.layer2 = acting(s, op.basis, round_layers[3]);
    } else {
        sh.layer1 = acting(s, op.basis, round_layers[1]);
        sh.layer2 = acting(s, op.basis, round_layers[0]);
    }
    return sh;
}

bool subset_of(const CnotLayer& a, const CnotLayer& b) {
    for (auto& cn : a)
        if (!std::binary_search(b.begin(), b.end(), cn)) return false;
    return true;
}

}  // namespace

ShapeCatalog build_catalog(const GaugeStructure& gs) {
    ShapeCatalog cat;
    auto round_layers = canonical_layers(gs.patch);
    // Mark trim-removed qubits as broken for enumeration purposes.
    DropoutConfig eff = gs.cfg;
    for (Coord q : gs.trimmed_boundary) eff.broken_qubits.insert(q);
    for (Coord q : gs.excised_data) eff.broken_qubits.insert(q);

    cat.shapes.resize(gs.ops.size());
    cat.canonical.resize(gs.ops.size());
    for (size_t i = 0; i < gs.ops.size(); i++) {
        const auto& op = gs.ops[i];
        auto list = enumerate_shapes(op, gs.patch, eff, true);
        if (list.empty())
            throw std::logic_error("operator admits no shape; gauge construction broken");
        // Canonical preference: the clip of the parent's canonical tree first.
        Shape parent_tree = canonical_shape_of(op, gs.origins[i], round_layers);
        std::sort(parent_tree.layer1.begin(), parent_tree.layer1.end());
        std::sort(parent_tree.layer2.begin(), parent_tree.layer2.end());
        std::stable_sort(list.begin(), list.end(), [&](const Shape& a, const Shape& b) {
            bool ca = subset_of(a.layer1, parent_tree.layer1) &&
                      subset_of(a.layer2, parent_tree.layer2);
            bool cb = subset_of(b.layer1, parent_tree.layer1) &&
                      subset_of(b.layer2, parent_tree.layer2);
            return ca > cb;
        });
        // Glyph lookup must be unique per (root, glyph).
        std::map<std::pair<Coord, char>, int> seen;
        for (size_t p = 0; p < list.size(); p++) {
            auto key = std::make_pair(list[p].root, list[p].glyph());
            if (seen.count(key)) throw std::logic_error("ambiguous shape glyph");
            seen[key] = static_cast<int>(p);
        }
        cat.canonical[i] = list.front();
        cat.shapes[i] = std::move(list);
    }

    // Conflict pairs: only operators sharing support can interact.
    std::map<Coord, std::vector<int>> by_qubit;
    for (const auto& op : gs.ops)
        for (Coord q : op.support) by_qubit[q].push_back(op.id);
    std::set<std::pair<int, int>> op_pairs;
    for (auto& [q, ids] : by_qubit)
        for (size_t i = 0; i < ids.size(); i++)
            for (size_t j = i + 1; j < ids.size(); j++)
                op_pairs.emplace(std::min(ids[i], ids[j]), std::max(ids[i], ids[j]));
    for (auto [i, j] : op_pairs) {
        const auto& oi = gs.ops[static_cast<size_t>(i)];
        const auto& oj = gs.ops[static_cast<size_t>(j)];
        for (int p = 0; p < cat.count(i); p++)
            for (int q = 0; q < cat.count(j); q++)
                if (incompatible(cat.at(i, p), oi.support, oi.basis, cat.at(j, q), oj.support,
                                 oj.basis))
                    cat.incompatible_pairs.push_back({i, p, j, q});
    }
    std::sort(cat.incompatible_pairs.begin(), cat.incompatible_pairs.end());
    cat.rebuild_conflict_lists();
    return cat;
}

void ShapeCatalog::rebuild_conflict_lists() {
    gbase.assign(shapes.size(), 0);
    int g = 0;
    for (size_t i = 0; i < shapes.size(); i++) {
        gbase[i] = g;
        g += static_cast<int>(shapes[i].size());
    }
    conflicts.assign(static_cast<size_t>(g), {});
    for (const auto& pk : incompatible_pairs) {
        conflicts[static_cast<size_t>(gindex(pk.i, pk.p))].push_back({pk.j, pk.q});
        conflicts[static_cast<size_t>(gindex(pk.j, pk.q))].push_back({pk.i, pk.p});
    }
}

}  // namespace luci
