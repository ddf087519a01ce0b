#include "luci/gauge.h"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "luci/gf2.h"

namespace luci {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; i++) parent[i] = i;
    }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// A dropout element: a broken qubit or an explicitly broken coupler.
struct BrokenElem {
    Coupler c;
    bool is_qubit = false;
    auto operator<=>(const BrokenElem&) const = default;
    static BrokenElem qubit(Coord q) { return {Coupler(q, q), true}; }
    static BrokenElem coupler(Coupler cc) { return {cc, false}; }
};

std::vector<Support> connected_components(const Support& qubits, const PatchSpec& patch,
                                          const DropoutConfig& cfg) {
    std::vector<Support> comps;
    std::set<Coord> todo(qubits.begin(), qubits.end());
    while (!todo.empty()) {
        std::vector<Coord> stack = {*todo.begin()}, comp;
        todo.erase(todo.begin());
        while (!stack.empty()) {
            Coord q = stack.back();
            stack.pop_back();
            comp.push_back(q);
            for (Coord dir : kDiagonals) {
                Coord nb = q + dir;
                if (!todo.count(nb)) continue;
                Coupler cpl(q, nb);
                if (!patch.has_coupler(cpl) || cfg.broken_couplers.count(cpl)) continue;
                todo.erase(nb);
                stack.push_back(nb);
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end());
    return comps;
}

void classify(std::vector<MidCycleOp>& ops) {
    for (auto& op : ops) op.kind = OpKind::Stabilizer;
    for (size_t i = 0; i < ops.size(); i++)
        for (size_t j = i + 1; j < ops.size(); j++)
            if (!commutes(ops[i], ops[j])) {
                ops[i].kind = OpKind::Gauge;
                ops[j].kind = OpKind::Gauge;
            }
}

struct RawResult {
    DropoutResult res;
    std::vector<std::vector<BrokenElem>> causes;  // per surviving op
};

RawResult apply_dropout_raw(const MidCycleCode& code, const DropoutConfig& cfg,
                            const std::set<Coord>& extra_broken) {
    const PatchSpec& patch = code.patch;
    DropoutConfig eff = cfg;
    for (Coord q : extra_broken) eff.broken_qubits.insert(q);

    Support usable;
    for (Coord q : patch.all_qubits)
        if (!eff.qubit_broken(q)) usable.push_back(q);
    if (usable.empty()) throw PatchDestroyedError();
    auto regions = connected_components(usable, patch, eff);
    // Largest region wins; ties by qubit count then smallest first coordinate
    // (regions are already ordered by their smallest member).
    size_t best = 0;
    for (size_t i = 1; i < regions.size(); i++)
        if (regions[i].size() > regions[best].size()) best = i;

    RawResult out;
    out.res.kept_region.insert(regions[best].begin(), regions[best].end());
    for (size_t i = 0; i < regions.size(); i++)
        if (i != best) out.res.discarded_region.insert(regions[i].begin(), regions[i].end());

    struct Frag {
        MidCycleOp op;
        OpOrigin origin;
        std::vector<BrokenElem> causes;
    };
    std::vector<Frag> frags;
    for (size_t k = 0; k < code.ops.size(); k++) {
        const MidCycleOp& parent = code.ops[k];
        Support s1;
        std::vector<BrokenElem> causes;
        for (Coord q : parent.support) {
            if (eff.qubit_broken(q))
                causes.push_back(BrokenElem::qubit(q));
            else
                s1.push_back(q);
        }
        if (s1.empty()) continue;
        for (size_t i = 0; i < parent.support.size(); i++)
            for (size_t j = i + 1; j < parent.support.size(); j++) {
                Coupler c(parent.support[i], parent.support[j]);
                if (patch.has_coupler(c) && eff.broken_couplers.count(c))
                    causes.push_back(BrokenElem::coupler(c));
            }
        for (auto& comp : connected_components(s1, patch, eff)) {
            if (!out.res.kept_region.count(comp.front())) continue;
            Frag f;
            f.op.basis = parent.basis;
            f.op.support = comp;
            f.origin = {static_cast<int>(k / 2), code.op_phase[k], code.op_ancilla[k]};
            f.causes = causes;
            frags.push_back(std::move(f));
        }
    }

    // Deduplicate identical fragments, merging their causes.
    std::map<std::pair<int, Support>, size_t> seen;
    std::vector<Frag> uniq;
    for (auto& f : frags) {
        auto key = std::make_pair(static_cast<int>(f.op.basis), f.op.support);
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(key, uniq.size());
            uniq.push_back(std::move(f));
        } else {
            auto& dst = uniq[it->second].causes;
            dst.insert(dst.end(), f.causes.begin(), f.causes.end());
        }
    }
    std::sort(uniq.begin(), uniq.end(), [](const Frag& a, const Frag& b) {
        return std::make_tuple(a.origin.check_index, a.origin.phase, a.op.support) <
               std::make_tuple(b.origin.check_index, b.origin.phase, b.op.support);
    });
    for (size_t i = 0; i < uniq.size(); i++) {
        uniq[i].op.id = static_cast<int>(i);
        std::sort(uniq[i].causes.begin(), uniq[i].causes.end());
        uniq[i].causes.erase(std::unique(uniq[i].causes.begin(), uniq[i].causes.end()),
                             uniq[i].causes.end());
        out.res.ops.push_back(uniq[i].op);
        out.res.origins.push_back(uniq[i].origin);
        out.causes.push_back(uniq[i].causes);
    }
    classify(out.res.ops);
    return out;
}

// Superstabilizer grouping: connected components over the graph whose
// vertices are gauges and dropout-element clusters, with gauge-gauge edges on
// anticommutation and gauge-cluster edges from fragment causes. Weight-one
// gauges carry a region id but are excluded from product membership.
std::vector<SuperStabilizer> build_superstabs(std::vector<MidCycleOp>& ops,
                                              const std::vector<std::vector<BrokenElem>>& causes) {
    std::vector<int> gauge_ids;
    for (const auto& op : ops)
        if (op.kind == OpKind::Gauge) gauge_ids.push_back(op.id);
    if (gauge_ids.empty()) return {};

    std::vector<BrokenElem> elems;
    for (int g : gauge_ids)
        for (const auto& e : causes[static_cast<size_t>(g)]) elems.push_back(e);
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    int ne = static_cast<int>(elems.size());
    int ng = static_cast<int>(gauge_ids.size());
    UnionFind uf(ne + ng);

    auto endpoints = [](const BrokenElem& e) {
        return e.is_qubit ? std::vector<Coord>{e.c.a} : std::vector<Coord>{e.c.a, e.c.b};
    };
    auto touches = [&](const BrokenElem& a, const BrokenElem& b) {
        for (Coord p : endpoints(a))
            for (Coord q : endpoints(b)) {
                if (p == q) return true;
                int dx = p.x - q.x, dy = p.y - q.y;
                if (dx * dx == 1 && dy * dy == 1) return true;  // coupled neighbors
            }
        return false;
    };
    for (int i = 0; i < ne; i++)
        for (int j = i + 1; j < ne; j++)
            if (touches(elems[i], elems[j])) uf.unite(i, j);
    auto elem_index = [&](const BrokenElem& e) {
        return static_cast<int>(std::lower_bound(elems.begin(), elems.end(), e) - elems.begin());
    };
    for (int gi = 0; gi < ng; gi++)
        for (const auto& e : causes[static_cast<size_t>(gauge_ids[static_cast<size_t>(gi)])])
            uf.unite(ne + gi, elem_index(e));
    for (int gi = 0; gi < ng; gi++)
        for (int gj = gi + 1; gj < ng; gj++) {
            const auto& a = ops[static_cast<size_t>(gauge_ids[static_cast<size_t>(gi)])];
            const auto& b = ops[static_cast<size_t>(gauge_ids[static_cast<size_t>(gj)])];
            if (!commutes(a, b)) uf.unite(ne + gi, ne + gj);
        }

    std::map<int, std::vector<int>> comp_gauges;
    for (int gi = 0; gi < ng; gi++)
        comp_gauges[uf.find(ne + gi)].push_back(gauge_ids[static_cast<size_t>(gi)]);
    std::vector<std::vector<int>> groups;
    for (auto& [root, ids] : comp_gauges) groups.push_back(ids);
    std::sort(groups.begin(), groups.end());

    // Within each region and basis, the superstabilizers are the products of
    // member gauges that commute with the region's opposite-basis gauges: the
    // kernel of the overlap matrix. Weight-one gauges order last so the basis
    // vectors avoid them where possible (Fig. 4 structure).
    std::vector<SuperStabilizer> supers;
    for (size_t r = 0; r < groups.size(); r++) {
        for (int id : groups[r]) ops[static_cast<size_t>(id)].region = static_cast<int>(r);
        for (Basis b : {Basis::X, Basis::Z}) {
            std::vector<int> cand, rows;
            for (int id : groups[r])
                (ops[static_cast<size_t>(id)].basis == b ? cand : rows).push_back(id);
            std::stable_sort(cand.begin(), cand.end(), [&](int a2, int b2) {
                return (ops[static_cast<size_t>(a2)].weight() == 1) <
                       (ops[static_cast<size_t>(b2)].weight() == 1);
            });
            size_t k = cand.size();
            if (k < 2) continue;
            // Overlap matrix rows over candidate columns, reduced echelon.
            std::vector<BitVec> mat;
            for (int rid : rows) {
                BitVec row(k);
                for (size_t c = 0; c < k; c++)
                    if (!commutes(ops[static_cast<size_t>(rid)],
                                  ops[static_cast<size_t>(cand[c])]))
                        row.set(c);
                mat.push_back(row);
            }
            std::vector<size_t> pivot_of_col(k, SIZE_MAX);
            size_t rrank = 0;
            for (size_t c = 0; c < k && rrank < mat.size(); c++) {
                size_t pr = SIZE_MAX;
                for (size_t i = rrank; i < mat.size(); i++)
                    if (mat[i].get(c)) {
                        pr = i;
                        break;
                    }
                if (pr == SIZE_MAX) continue;
                std::swap(mat[rrank], mat[pr]);
                for (size_t i = 0; i < mat.size(); i++)
                    if (i != rrank && mat[i].get(c)) mat[i] ^= mat[rrank];
                pivot_of_col[c] = rrank;
                rrank++;
            }
            // Null-space basis: one vector per free column.
            for (size_t fc = 0; fc < k; fc++) {
                if (pivot_of_col[fc] != SIZE_MAX) continue;
                SuperStabilizer ss;
                ss.basis = b;
                std::vector<bool> take(k, false);
                take[fc] = true;
                for (size_t c = 0; c < k; c++)
                    if (pivot_of_col[c] != SIZE_MAX && mat[pivot_of_col[c]].get(fc)) take[c] = true;
                for (size_t c = 0; c < k; c++)
                    if (take[c]) {
                        ss.members.push_back(cand[c]);
                        for (Coord q : ops[static_cast<size_t>(cand[c])].support)
                            support_toggle(ss.support, q);
                    }
                std::sort(ss.members.begin(), ss.members.end());
                if (ss.members.size() >= 2) supers.push_back(std::move(ss));
            }
        }
    }
    for (const auto& ss : supers) {
        MidCycleOp prod{-1, ss.basis, ss.support, OpKind::Stabilizer, {}};
        for (const auto& op : ops)
            if (!commutes(prod, op))
                throw std::logic_error("superstabilizer product anticommutes with an operator");
    }
    return supers;
}

}  // namespace

DropoutResult apply_dropout(const MidCycleCode& code, const DropoutConfig& cfg,
                            const std::set<Coord>& extra_broken) {
    return apply_dropout_raw(code, cfg, extra_broken).res;
}

DropoutResult restrict_to_measure_qubits(const MidCycleCode& code, const DropoutConfig& cfg,
                                         std::set<Coord>& excised_out, int& iterations_out) {
    std::set<Coord> excised;
    int iter = 0;
    for (;;) {
        DropoutResult res = apply_dropout(code, cfg, excised);
        std::set<Coord> bad;
        for (const auto& op : res.ops)
            if (op.weight() == 1 && PatchSpec::is_data_coord(op.support.front()))
                bad.insert(op.support.front());
        if (bad.empty()) {
            excised_out = excised;
            iterations_out = iter;
            return res;
        }
        excised.insert(bad.begin(), bad.end());
        iter++;
        if (iter > static_cast<int>(code.patch.all_qubits.size()))
            throw std::logic_error("measure-qubit restriction failed to reach a fixpoint");
    }
}

GaugeStructure build_gauge_structure(const PatchSpec& patch, const DropoutConfig& cfg,
                                     const GaugeOptions& opts) {
    GaugeStructure gs;
    gs.patch = patch;
    gs.legacy = opts.legacy;
    gs.cfg = opts.legacy ? legacy_convert(patch, cfg) : cfg;

    MidCycleCode code = mid_cycle_operators(patch);
    std::set<Coord> excised;
    int iterations = 0;
    if (opts.restrict_measure_qubits)
        restrict_to_measure_qubits(code, gs.cfg, excised, iterations);
    RawResult raw = apply_dropout_raw(code, gs.cfg, excised);
    gs.ops = std::move(raw.res.ops);
    gs.origins = std::move(raw.res.origins);
    gs.kept_region = std::move(raw.res.kept_region);
    gs.discarded_region = std::move(raw.res.discarded_region);
    gs.excised_data = excised;
    gs.restrict_iterations = iterations;
    gs.superstabs = build_superstabs(gs.ops, raw.causes);
    return gs;
}

int logical_qubit_count(const GaugeStructure& gs) {
    std::vector<Coord> kept;
    for (Coord q : gs.kept_region)
        if (gs.qubit_usable(q)) kept.push_back(q);
    size_t n = kept.size();
    auto qidx = [&](Coord q) {
        return static_cast<size_t>(std::lower_bound(kept.begin(), kept.end(), q) - kept.begin());
    };
    std::vector<BitVec> rows;
    Gf2Basis span(2 * n);
    for (const auto& op : gs.ops) {
        BitVec v(2 * n);
        for (Coord q : op.support) v.set(qidx(q) + (op.basis == Basis::X ? 0 : n));
        rows.push_back(v);
        span.insert(v);
    }
    size_t rank = span.rank();
    // Rank of the commutation form over the generators: 2g, with g gauge
    // qubits. Logical count k = n - rank + g.
    size_t m = rows.size();
    auto symplectic = [&](const BitVec& a, const BitVec& b) {
        bool s = false;
        for (size_t i = 0; i < n; i++) {
            if (a.get(i) && b.get(i + n)) s = !s;
            if (a.get(i + n) && b.get(i)) s = !s;
        }
        return s;
    };
    Gf2Basis overlap_rank(m);
    for (size_t i = 0; i < m; i++) {
        BitVec r(m);
        for (size_t j = 0; j < m; j++)
            if (symplectic(rows[i], rows[j])) r.set(j);
        overlap_rank.insert(r);
    }
    size_t g = overlap_rank.rank() / 2;
    return static_cast<int>(n) - static_cast<int>(rank) + static_cast<int>(g);
}

namespace {

struct SyndKey {
    std::vector<uint64_t> w;
    bool operator==(const SyndKey& o) const { return w == o.w; }
};
struct SyndHash {
    size_t operator()(const SyndKey& k) const {
        uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (uint64_t x : k.w) h = (h ^ x) * 0x100000001b3ULL;
        return static_cast<size_t>(h);
    }
};

// Enumerate all index subsets of [lo, hi) of the given size.
void for_each_subset(size_t lo, size_t hi, size_t size,
                     const std::function<void(const std::vector<size_t>&)>& fn) {
    std::vector<size_t> idx(size);
    std::function<void(size_t, size_t)> rec = [&](size_t start, size_t depth) {
        if (depth == size) {
            fn(idx);
            return;
        }
        for (size_t q = start; q + (size - depth - 1) < hi; q++) {
            idx[depth] = q;
            rec(q + 1, depth + 1);
        }
    };
    rec(lo, 0);
}

}  // namespace

int code_distance(const GaugeStructure& gs, Basis basis) {
    if (logical_qubit_count(gs) < 1)
        throw std::logic_error("surviving region encodes no logical qubit");
    std::vector<Coord> kept;
    for (Coord q : gs.kept_region)
        if (gs.qubit_usable(q)) kept.push_back(q);
    size_t n = kept.size();
    auto qidx = [&](Coord q) {
        return static_cast<size_t>(std::lower_bound(kept.begin(), kept.end(), q) - kept.begin());
    };

    std::vector<BitVec> checks;  // opposite-basis rows: the syndrome map
    Gf2Basis trivial(n);         // same-basis span: the trivial coset
    for (const auto& op : gs.ops) {
        BitVec v(n);
        for (Coord q : op.support) v.set(qidx(q));
        if (op.basis == basis)
            trivial.insert(v);
        else
            checks.push_back(v);
    }
    size_t nchecks = checks.size();
    size_t words = (nchecks + 63) / 64;
    std::vector<SyndKey> col(n);
    for (size_t q = 0; q < n; q++) {
        col[q].w.assign(words, 0);
        for (size_t r = 0; r < nchecks; r++)
            if (checks[r].get(q)) col[q].w[r >> 6] ^= uint64_t(1) << (r & 63);
    }
    auto xor_key = [&](SyndKey& a, const SyndKey& b) {
        for (size_t i = 0; i < words; i++) a.w[i] ^= b.w[i];
    };

    size_t half = n / 2;
    for (int w = 1; w <= static_cast<int>(n); w++) {
        for (int a = 0; a <= w; a++) {
            size_t la = static_cast<size_t>(a), rb = static_cast<size_t>(w - a);
            if (la > half || rb > n - half) continue;
            std::unordered_map<SyndKey, std::vector<std::vector<size_t>>, SyndHash> left;
            for_each_subset(0, half, la, [&](const std::vector<size_t>& sub) {
                SyndKey k{std::vector<uint64_t>(words, 0)};
                for (size_t q : sub) xor_key(k, col[q]);
                left[k].push_back(sub);
            });
            int result = -1;
            std::vector<size_t> ridx;
            std::function<void(size_t, size_t, SyndKey&)> rec = [&](size_t start, size_t depth,
                                                                    SyndKey& acc) {
                if (result >= 0) return;
                if (depth == rb) {
                    auto it = left.find(acc);
                    if (it == left.end()) return;
                    for (const auto& lsub : it->second) {
                        BitVec v(n);
                        for (size_t q : lsub) v.set(q);
                        for (size_t q : ridx) v.set(q);
                        if (!trivial.contains(v)) {
                            result = w;
                            return;
                        }
                    }
                    return;
                }
                for (size_t q = start; q + (rb - depth - 1) < n; q++) {
                    ridx.push_back(q);
                    xor_key(acc, col[q]);
                    rec(q + 1, depth + 1, acc);
                    xor_key(acc, col[q]);
                    ridx.pop_back();
                    if (result >= 0) return;
                }
            };
            SyndKey acc{std::vector<uint64_t>(words, 0)};
            rec(half, 0, acc);
            if (result >= 0) return result;
        }
    }
    throw std::logic_error("no logical operator found");
}

}  // namespace luci
