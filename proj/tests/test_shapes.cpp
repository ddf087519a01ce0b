#include <algorithm>

#include "doctest.h"
#include "luci/heuristic.h"
#include "luci/shapes.h"
#include "support/cnot_matrix.h"

using namespace luci;
using luci::testsupport::CnotMatrixOracle;

namespace {

DropoutConfig empty_cfg(int d) {
    DropoutConfig cfg;
    cfg.d = d;
    return cfg;
}

MidCycleOp find_bulk_diamond(const std::vector<MidCycleOp>& ops) {
    for (const auto& op : ops)
        if (op.weight() == 4) return op;
    REQUIRE(false);
    return {};
}

std::vector<CnotLayer> shape_layers(const Shape& s) { return {s.layer1, s.layer2}; }

}  // namespace

TEST_CASE("shape census by weight: 8, 4, 4, 1 before the root restriction") {
    auto patch = build_patch(5);
    auto code = mid_cycle_operators(patch);
    auto cfg = empty_cfg(5);

    auto w4 = find_bulk_diamond(code.ops);
    CHECK(enumerate_shapes(w4, patch, cfg, false).size() == 8);
    CHECK(enumerate_shapes(w4, patch, cfg, true).size() == 4);

    // Weight 3: break one corner qubit of a bulk diamond.
    DropoutConfig cfg3 = cfg;
    cfg3.broken_qubits.insert(w4.support.front());
    MidCycleOp w3 = w4;
    w3.support.erase(w3.support.begin());
    CHECK(enumerate_shapes(w3, patch, cfg3, false).size() == 4);

    // Weight 2: a coupled pair from the diamond.
    MidCycleOp w2 = w4;
    Coord keep = w4.support[0];
    w2.support.clear();
    for (Coord q : w4.support)
        if (q == keep || patch.has_coupler(Coupler(keep, q))) w2.support.push_back(q);
    w2.support.resize(2);
    std::sort(w2.support.begin(), w2.support.end());
    CHECK(enumerate_shapes(w2, patch, cfg, false).size() == 4);
    CHECK(enumerate_shapes(w2, patch, cfg, true).size() == 2);

    // Weight 1.
    MidCycleOp w1 = w4;
    w1.support = {w4.support.front()};
    CHECK(enumerate_shapes(w1, patch, cfg, false).size() == 1);
}

TEST_CASE("every catalog shape measures its operator (matrix oracle)") {
    for (int d : {3, 5}) {
        auto patch = build_patch(d);
        auto gs = build_gauge_structure(patch, empty_cfg(d));
        auto cat = build_catalog(gs);
        for (const auto& op : gs.ops)
            for (const auto& sh : cat.shapes[static_cast<size_t>(op.id)]) {
                CHECK(sh.touched() == op.support);
                CnotMatrixOracle oracle(op.support);
                oracle.apply(sh.layer1);
                oracle.apply(sh.layer2);
                CHECK(oracle.lands_on(op.support, op.basis, sh.root));
                // Production propagation agrees.
                Support s = op.support;
                propagate(s, op.basis, shape_layers(sh));
                CHECK(s == Support{sh.root});
            }
    }
}

TEST_CASE("catalog shapes measure their operators under dropout") {
    auto patch = build_patch(5);
    int tested = 0;
    for (uint64_t seed = 300; tested < 6 && seed < 340; seed++) {
        GaugeStructure gs;
        try {
            gs = build_gauge_structure(patch, sample_dropout(patch, 0.03, 0.03, seed));
        } catch (const PatchDestroyedError&) {
            continue;
        }
        auto cat = build_catalog(gs);
        for (const auto& op : gs.ops) {
            CHECK(cat.count(op.id) >= 1);
            for (const auto& sh : cat.shapes[static_cast<size_t>(op.id)]) {
                CHECK(PatchSpec::is_measure_coord(sh.root));
                Support s = op.support;
                propagate(s, op.basis, shape_layers(sh));
                CHECK(s == Support{sh.root});
            }
        }
        tested++;
    }
    CHECK(tested == 6);
}

TEST_CASE("incompatibility is symmetric and disjoint shapes are compatible") {
    auto patch = build_patch(5);
    auto gs = build_gauge_structure(patch, empty_cfg(5));
    auto cat = build_catalog(gs);
    int checked = 0;
    for (size_t i = 0; i < gs.ops.size() && checked < 4000; i++)
        for (size_t j = i + 1; j < gs.ops.size() && checked < 4000; j++) {
            const auto& a = gs.ops[i];
            const auto& b = gs.ops[j];
            for (int p = 0; p < cat.count(a.id); p++)
                for (int q = 0; q < cat.count(b.id); q++) {
                    bool ab = incompatible(cat.at(a.id, p), a.support, a.basis, cat.at(b.id, q),
                                           b.support, b.basis);
                    bool ba = incompatible(cat.at(b.id, q), b.support, b.basis, cat.at(a.id, p),
                                           a.support, a.basis);
                    CHECK(ab == ba);
                    Support inter;
                    std::set_intersection(a.support.begin(), a.support.end(), b.support.begin(),
                                          b.support.end(), std::back_inserter(inter));
                    if (inter.empty()) CHECK(!ab);
                    checked++;
                }
        }
}

TEST_CASE("joint propagation agrees with the matrix oracle on full d=3 enumeration") {
    auto patch = build_patch(3);
    auto gs = build_gauge_structure(patch, empty_cfg(3));
    auto cat = build_catalog(gs);
    for (size_t i = 0; i < gs.ops.size(); i++)
        for (size_t j = i + 1; j < gs.ops.size(); j++) {
            const auto& a = gs.ops[i];
            const auto& b = gs.ops[j];
            for (int p = 0; p < cat.count(a.id); p++)
                for (int q = 0; q < cat.count(b.id); q++) {
                    const Shape& sa = cat.at(a.id, p);
                    const Shape& sb = cat.at(b.id, q);
                    // Oracle applies only when the joint circuit is well formed
                    // (no layer collisions, commuting operators, distinct roots).
                    if (sa.root == sb.root) continue;
                    if (a.basis != b.basis && odd_overlap(a.support, b.support)) continue;
                    CnotLayer l1 = sa.layer1, l2 = sa.layer2;
                    l1.insert(l1.end(), sb.layer1.begin(), sb.layer1.end());
                    l2.insert(l2.end(), sb.layer2.begin(), sb.layer2.end());
                    std::sort(l1.begin(), l1.end());
                    l1.erase(std::unique(l1.begin(), l1.end()), l1.end());
                    std::sort(l2.begin(), l2.end());
                    l2.erase(std::unique(l2.begin(), l2.end()), l2.end());
                    auto collides = [](const CnotLayer& layer) {
                        std::vector<Coord> used;
                        for (auto [c, t] : layer) {
                            used.push_back(c);
                            used.push_back(t);
                        }
                        std::sort(used.begin(), used.end());
                        return std::adjacent_find(used.begin(), used.end()) != used.end();
                    };
                    if (collides(l1) || collides(l2)) continue;
                    Support all = a.support;
                    for (Coord qq : b.support) {
                        all.push_back(qq);
                    }
                    std::sort(all.begin(), all.end());
                    all.erase(std::unique(all.begin(), all.end()), all.end());
                    CnotMatrixOracle oracle(all);
                    oracle.apply(l1);
                    oracle.apply(l2);
                    bool oracle_ok = oracle.lands_on(a.support, a.basis, sa.root) &&
                                     oracle.lands_on(b.support, b.basis, sb.root);
                    bool incompat = incompatible(sa, a.support, a.basis, sb, b.support, b.basis);
                    CHECK(incompat == !oracle_ok);
                }
        }
}

TEST_CASE("a semantically corrupting pair exists that passes the syntactic checks") {
    // Two shapes with no layer collision, commuting operators, yet the joint
    // circuit fails to measure both: the predicate's tableau leg is load-bearing.
    auto patch = build_patch(5);
    bool found = false;
    for (uint64_t seed = 500; seed < 560 && !found; seed++) {
        GaugeStructure gs;
        try {
            gs = build_gauge_structure(patch, sample_dropout(patch, 0.04, 0.04, seed));
        } catch (const PatchDestroyedError&) {
            continue;
        }
        auto cat = build_catalog(gs);
        for (auto [i, p, j, q] : cat.incompatible_pairs) {
            const auto& a = gs.ops[static_cast<size_t>(i)];
            const auto& b = gs.ops[static_cast<size_t>(j)];
            const Shape& sa = cat.at(i, p);
            const Shape& sb = cat.at(j, q);
            if (sa.root == sb.root) continue;
            if (a.basis != b.basis && odd_overlap(a.support, b.support)) continue;
            CnotLayer l1 = sa.layer1, l2 = sa.layer2;
            l1.insert(l1.end(), sb.layer1.begin(), sb.layer1.end());
            l2.insert(l2.end(), sb.layer2.begin(), sb.layer2.end());
            for (CnotLayer* l : {&l1, &l2}) {
                std::sort(l->begin(), l->end());
                l->erase(std::unique(l->begin(), l->end()), l->end());
            }
            std::vector<Coord> used;
            bool collision = false;
            for (const CnotLayer* l : {&l1, &l2}) {
                used.clear();
                for (auto [c, t] : *l) {
                    used.push_back(c);
                    used.push_back(t);
                }
                std::sort(used.begin(), used.end());
                if (std::adjacent_find(used.begin(), used.end()) != used.end()) collision = true;
            }
            if (!collision) {
                found = true;
                break;
            }
        }
    }
    CHECK(found);
}

TEST_CASE("stretch predicate geometry") {
    auto patch = build_patch(5);
    auto gs = build_gauge_structure(patch, empty_cfg(5));
    auto cat = build_catalog(gs);
    // Pick a bulk Z diamond victim and shapes of its east neighbor op.
    const MidCycleOp* victim = nullptr;
    for (const auto& op : gs.ops)
        if (op.basis == Basis::Z && op.weight() == 4 && op.support.front().x >= 3 &&
            op.support.back().x <= 7)
            victim = &op;
    REQUIRE(victim);
    // A shape fully inside the victim's support never stretches it.
    for (const auto& sh : cat.shapes[static_cast<size_t>(victim->id)])
        CHECK(!stretches(victim->support, victim->basis, sh));
    // Some neighboring shape stretches the victim, and its mirror does not.
    int yes = 0, no = 0;
    for (const auto& op : gs.ops) {
        if (op.id == victim->id) continue;
        for (const auto& sh : cat.shapes[static_cast<size_t>(op.id)]) {
            if (stretches(victim->support, victim->basis, sh))
                yes++;
            else
                no++;
        }
    }
    CHECK(yes > 0);
    CHECK(no > 0);
    // Direction rule: a CNOT targeting into a Z victim stretches it; the
    // reversed CNOT (control inside) does not.
    Support vsup = victim->support;
    Coord inside = vsup.front();
    Coord outside{};
    bool have = false;
    for (Coord dir : kDiagonals) {
        Coord cand = inside + dir;
        if (!support_contains(vsup, cand) && patch.has_qubit(cand)) {
            outside = cand;
            have = true;
            break;
        }
    }
    REQUIRE(have);
    Shape in_shape{0, outside, Basis::Z, {{outside, inside}}, {}};
    CHECK(stretches(vsup, Basis::Z, in_shape));
    Shape out_shape{0, outside, Basis::Z, {{inside, outside}}, {}};
    CHECK(!stretches(vsup, Basis::Z, out_shape));
    CHECK(!stretches(vsup, Basis::X, in_shape));
    CHECK(stretches(vsup, Basis::X, out_shape));
}
