#include "luci/solver.h"

#include <algorithm>
#include <functional>
#include <chrono>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

namespace luci {

namespace {

using Clock = std::chrono::steady_clock;

struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

constexpr int64_t kInf = INT64_MAX / 4;

// Incremental evaluator and bounded branch-and-bound over (op, round) cells.
struct Engine {
    const IlpModel& model;
    const GaugeStructure& gs;
    const ShapeCatalog& cat;
    int T;
    size_t n;
    bool cyclic;
    int64_t den, alpha, beta, gamma, delta;

    // Static tables.
    std::vector<std::vector<int64_t>> op_cost;  // [op][coverage mask]
    struct VictimRef {
        int victim;
    };
    std::vector<std::vector<int>> victims_of_shape;  // global shape idx -> victim ids
    size_t n_victims = 0;
    std::vector<Coord> rootable;                     // sorted
    std::vector<int> root_of_shape;                  // global shape idx -> root index
    std::vector<int> basis_of_shape;                 // 0 = X, 1 = Z
    int64_t b_constant = 0;                          // windows x rootable
    std::vector<std::vector<int>> op_neighbors;      // conflict adjacency

    // Dynamic state: one shape (or none) per cell.
    std::vector<std::vector<int>> assigned;          // [op][t] -> shape or -1
    std::vector<int> op_mask;                        // coverage bits per op
    std::vector<std::vector<int>> stretch_count;     // [victim][t]
    std::vector<std::vector<int>> root_use;          // [root][t] -> basis or -1
    int64_t a_sum = 0;                               // sum max(0, cnt-1)
    int64_t j_sum = 0;                               // satisfied basis windows

    int64_t work = 0;

    Engine(const IlpModel& m, const GaugeStructure& g, const ShapeCatalog& c)
        : model(m), gs(g), cat(c) {
        T = m.rounds;
        n = gs.ops.size();
        cyclic = m.cyclic;
        den = m.objective.den;
        alpha = m.objective.alpha;
        beta = m.objective.beta;
        gamma = m.objective.gamma;
        delta = m.objective.delta;
        build_tables();
        assigned.assign(n, std::vector<int>(static_cast<size_t>(T), -1));
        op_mask.assign(n, 0);
        stretch_count.assign(n_victims, std::vector<int>(static_cast<size_t>(T), 0));
        root_use.assign(rootable.size(), std::vector<int>(static_cast<size_t>(T), -1));
    }

    int nw2() const { return cyclic ? T : T - 1; }
    int nw3() const { return cyclic ? T : std::max(0, T - 2); }

    void build_tables() {
        int masks = 1 << T;
        op_cost.assign(n, std::vector<int64_t>(static_cast<size_t>(masks), 0));
        for (size_t i = 0; i < n; i++) {
            bool stab = gs.ops[i].kind == OpKind::Stabilizer;
            for (int mask = 0; mask < masks; mask++) {
                if (mask == 0) {
                    op_cost[i][static_cast<size_t>(mask)] = kInf;  // coverage violated
                    continue;
                }
                int64_t m_term = 0;
                if (stab) {
                    m_term = __builtin_popcount(static_cast<unsigned>(mask));
                } else {
                    for (int t = cyclic ? 0 : 1; t < T; t++) {
                        int prev = (t - 1 + T) % T;
                        if ((mask >> prev & 1) && (mask >> t & 1)) m_term++;
                    }
                }
                int64_t s2 = 0, s3 = 0;
                for (int t = 0; t < nw2(); t++)
                    if (!((mask >> t) & 1) && !((mask >> ((t + 1) % T)) & 1)) s2 = 1;
                for (int t = 0; t < nw3(); t++)
                    if (!((mask >> t) & 1) && !((mask >> ((t + 1) % T)) & 1) &&
                        !((mask >> ((t + 2) % T)) & 1))
                        s3 = 1;
                op_cost[i][static_cast<size_t>(mask)] =
                    -den * m_term + alpha * s2 + beta * s3;
            }
        }
        // Victims and their stretching shapes.
        struct V {
            const Support* sup;
            Basis basis;
        };
        std::vector<V> vs;
        for (const auto& op : gs.ops)
            if (op.kind == OpKind::Stabilizer) vs.push_back({&op.support, op.basis});
        for (const auto& ss : gs.superstabs) vs.push_back({&ss.support, ss.basis});
        n_victims = vs.size();
        victims_of_shape.assign(static_cast<size_t>(cat.total_shapes()), {});
        for (size_t i = 0; i < n; i++)
            for (int p = 0; p < cat.count(static_cast<int>(i)); p++) {
                int g = cat.gindex(static_cast<int>(i), p);
                for (size_t v = 0; v < n_victims; v++)
                    if (stretches(*vs[v].sup, vs[v].basis, cat.at(static_cast<int>(i), p)))
                        victims_of_shape[static_cast<size_t>(g)].push_back(static_cast<int>(v));
            }
        // Rootable qubits.
        std::set<Coord> roots;
        for (size_t i = 0; i < n; i++)
            for (int p = 0; p < cat.count(static_cast<int>(i)); p++)
                roots.insert(cat.at(static_cast<int>(i), p).root);
        rootable.assign(roots.begin(), roots.end());
        root_of_shape.assign(static_cast<size_t>(cat.total_shapes()), -1);
        basis_of_shape.assign(static_cast<size_t>(cat.total_shapes()), 0);
        for (size_t i = 0; i < n; i++)
            for (int p = 0; p < cat.count(static_cast<int>(i)); p++) {
                int g = cat.gindex(static_cast<int>(i), p);
                const Shape& sh = cat.at(static_cast<int>(i), p);
                root_of_shape[static_cast<size_t>(g)] = static_cast<int>(
                    std::lower_bound(rootable.begin(), rootable.end(), sh.root) -
                    rootable.begin());
                basis_of_shape[static_cast<size_t>(g)] = sh.basis == Basis::X ? 0 : 1;
            }
        b_constant = static_cast<int64_t>(cyclic ? T : T - 1) *
                     static_cast<int64_t>(rootable.size());
        // Operator adjacency for neighborhoods.
        std::vector<std::set<int>> adj(n);
        for (const auto& pk : cat.incompatible_pairs) {
            adj[static_cast<size_t>(pk.i)].insert(pk.j);
            adj[static_cast<size_t>(pk.j)].insert(pk.i);
        }
        op_neighbors.resize(n);
        for (size_t i = 0; i < n; i++) op_neighbors[i].assign(adj[i].begin(), adj[i].end());
    }

    bool window_j(int root, int w) const {
        int b0 = root_use[static_cast<size_t>(root)][static_cast<size_t>(w)];
        int b1 = root_use[static_cast<size_t>(root)][static_cast<size_t>((w + 1) % T)];
        return b0 >= 0 && b0 == b1;
    }

    // Exact incremental placement; the cell must currently be empty.
    void place(size_t op, int t, int p) {
        assigned[op][static_cast<size_t>(t)] = p;
        op_mask[op] |= 1 << t;
        int g = cat.gindex(static_cast<int>(op), p);
        for (int v : victims_of_shape[static_cast<size_t>(g)]) {
            int c = ++stretch_count[static_cast<size_t>(v)][static_cast<size_t>(t)];
            if (c >= 2) a_sum++;
        }
        int r = root_of_shape[static_cast<size_t>(g)];
        root_use[static_cast<size_t>(r)][static_cast<size_t>(t)] =
            basis_of_shape[static_cast<size_t>(g)];
        for (int w : {(t - 1 + T) % T, t}) {
            if (!cyclic && w >= T - 1) continue;
            if (window_j(r, w)) j_sum++;
        }
    }

    void unplace(size_t op, int t) {
        int p = assigned[op][static_cast<size_t>(t)];
        int g = cat.gindex(static_cast<int>(op), p);
        int r = root_of_shape[static_cast<size_t>(g)];
        for (int w : {(t - 1 + T) % T, t}) {
            if (!cyclic && w >= T - 1) continue;
            if (window_j(r, w)) j_sum--;
        }
        root_use[static_cast<size_t>(r)][static_cast<size_t>(t)] = -1;
        for (int v : victims_of_shape[static_cast<size_t>(g)]) {
            int c = stretch_count[static_cast<size_t>(v)][static_cast<size_t>(t)]--;
            if (c >= 2) a_sum--;
        }
        assigned[op][static_cast<size_t>(t)] = -1;
        op_mask[op] &= ~(1 << t);
    }

    // Shape p of op fits board t against the current assignment.
    bool fits(size_t op, int t, int p) const {
        int g = cat.gindex(static_cast<int>(op), p);
        // Root collision with any other occupant.
        int r = root_of_shape[static_cast<size_t>(g)];
        if (root_use[static_cast<size_t>(r)][static_cast<size_t>(t)] >= 0) return false;
        for (auto [j, q] : cat.conflicts[static_cast<size_t>(g)])
            if (assigned[static_cast<size_t>(j)][static_cast<size_t>(t)] == q) return false;
        return true;
    }

    // Objective of the current complete assignment.
    int64_t total_cost() const {
        int64_t acc = gamma * a_sum + delta * (b_constant - j_sum);
        for (size_t i = 0; i < n; i++) acc += op_cost[i][static_cast<size_t>(op_mask[i])];
        return acc;
    }

    void load(const Diagram& diag) {
        for (size_t i = 0; i < n; i++)
            for (int t = 0; t < T; t++)
                if (assigned[i][static_cast<size_t>(t)] >= 0) unplace(i, t);
        for (int t = 0; t < T; t++)
            for (auto [op, p] : diag.boards[static_cast<size_t>(t)])
                place(static_cast<size_t>(op), t, p);
    }

    Diagram snapshot() const {
        Diagram diag;
        diag.d = gs.patch.d;
        diag.rounds = T;
        diag.provenance = Provenance::Optimized;
        diag.boards.assign(static_cast<size_t>(T), {});
        for (size_t i = 0; i < n; i++)
            for (int t = 0; t < T; t++)
                if (assigned[i][static_cast<size_t>(t)] >= 0)
                    diag.boards[static_cast<size_t>(t)].emplace(
                        static_cast<int>(i), assigned[i][static_cast<size_t>(t)]);
        return diag;
    }

    // Eq.3 window mask admitted by an op coverage mask.
    uint32_t member_windows(int mask) const {
        uint32_t w = 0;
        for (int t = 0; t < nw2(); t++)
            if ((mask >> t & 1) || (mask >> ((t + 1) % T) & 1)) w |= uint32_t(1) << t;
        return w;
    }

    // Bounded exhaustive improvement over the free set; returns true when the
    // subtree was fully explored within the node budget.
    struct DiveResult {
        bool explored = true;
        bool improved = false;
    };
    DiveResult dive(const std::vector<int>& free_ops, int64_t& best_cost, Diagram& best_diag,
                    int64_t node_budget) {
        // Remove the free ops' placements; remember them for restoration.
        std::vector<std::vector<int>> saved;
        for (int op : free_ops) {
            saved.push_back(assigned[static_cast<size_t>(op)]);
            for (int t = 0; t < T; t++)
                if (assigned[static_cast<size_t>(op)][static_cast<size_t>(t)] >= 0)
                    unplace(static_cast<size_t>(op), t);
        }
        // Superstabilizers touching the free set; base window masks from the
        // fixed members.
        std::vector<std::pair<uint32_t, std::vector<int>>> ss_windows;  // (base, free members)
        for (const auto& ss : gs.superstabs) {
            std::vector<int> free_members;
            for (int m : ss.members)
                for (int op : free_ops)
                    if (m == op) free_members.push_back(m);
            if (free_members.empty()) continue;
            uint32_t base = (uint32_t(1) << nw2()) - 1;
            for (int m : ss.members) {
                bool is_free = false;
                for (int fm : free_members) is_free = is_free || fm == m;
                if (!is_free) base &= member_windows(op_mask[static_cast<size_t>(m)]);
            }
            ss_windows.push_back({base, free_members});
        }

        struct Cell {
            size_t op;
            int t;
        };
        std::vector<Cell> cells;
        for (int op : free_ops)
            for (int t = 0; t < T; t++) cells.push_back({static_cast<size_t>(op), t});
        size_t nc = cells.size();
        // Optimistic per-op completion given a partial mask and remaining cells.
        auto optimistic = [&](size_t opi, int mask, int undecided_bits) {
            int64_t best = kInf;
            for (int extra = 0;; extra = (extra - undecided_bits) & undecided_bits) {
                int64_t c = op_cost[opi][static_cast<size_t>(mask | extra)];
                best = std::min(best, c);
                if (extra == undecided_bits) break;
            }
            return best;
        };

        int64_t nodes = 0;
        bool aborted = false;
        bool improved = false;
        // DFS over cells; choices: shapes then none.
        std::function<void(size_t)> rec = [&](size_t k) {
            if (aborted) return;
            if (++nodes > node_budget) {
                aborted = true;
                return;
            }
            work++;
            if (k == nc) {
                // Superstabilizer windows must survive.
                for (auto& [base, free_members] : ss_windows) {
                    uint32_t wm = base;
                    for (int m : free_members) wm &= member_windows(op_mask[static_cast<size_t>(m)]);
                    if (wm == 0) return;
                }
                int64_t cost = total_cost();
                if (cost < best_cost) {
                    best_cost = cost;
                    best_diag = snapshot();
                    improved = true;
                }
                return;
            }
            auto [opi, t] = cells[k];
            // Bound: decided cost so far plus optimistic completions.
            int64_t done = gamma * a_sum + delta * (b_constant - j_sum);
            // J windows still claimable by remaining cells.
            done -= delta * 2 * static_cast<int64_t>(nc - k);
            for (size_t i = 0; i < n; i++) {
                bool is_free = false;
                for (int op : free_ops) is_free = is_free || static_cast<size_t>(op) == i;
                if (!is_free) {
                    done += op_cost[i][static_cast<size_t>(op_mask[i])];
                    continue;
                }
                // Undecided boards of this free op.
                int undecided = 0;
                for (size_t k2 = k; k2 < nc; k2++)
                    if (cells[k2].op == i) undecided |= 1 << cells[k2].t;
                if (undecided == 0)
                    done += op_cost[i][static_cast<size_t>(op_mask[i])];
                else
                    done += optimistic(i, op_mask[i], undecided);
            }
            if (done >= best_cost) return;

            // Try shapes, then the empty choice.
            for (int p = 0; p < cat.count(static_cast<int>(opi)); p++) {
                if (!fits(opi, t, p)) continue;
                place(opi, t, p);
                rec(k + 1);
                unplace(opi, t);
                if (aborted) return;
            }
            rec(k + 1);
        };
        rec(0);

        if (!improved) {
            // Restore the saved placements.
            for (size_t fi = 0; fi < free_ops.size(); fi++) {
                size_t op = static_cast<size_t>(free_ops[fi]);
                for (int t = 0; t < T; t++) {
                    if (assigned[op][static_cast<size_t>(t)] >= 0) unplace(op, t);
                }
            }
            for (size_t fi = 0; fi < free_ops.size(); fi++) {
                size_t op = static_cast<size_t>(free_ops[fi]);
                for (int t = 0; t < T; t++)
                    if (saved[fi][static_cast<size_t>(t)] >= 0)
                        place(op, t, saved[fi][static_cast<size_t>(t)]);
            }
        } else {
            // Leave the engine holding the best-found full assignment.
            load(best_diag);
        }
        return {!aborted, improved};
    }
};

int64_t capacity_bound(const Engine& e) {
    // m <= rounds x rootable qubits, all penalty terms are non-negative.
    return -e.den * static_cast<int64_t>(e.T) * static_cast<int64_t>(e.rootable.size());
}

}  // namespace

std::string trace_csv(const Solution& sol, const IlpModel& model) {
    std::ostringstream os;
    os << "elapsed_s,incumbent,bound\n";
    double den = static_cast<double>(model.objective.den);
    for (const auto& tp : sol.trace)
        os << tp.elapsed_s << "," << static_cast<double>(tp.incumbent) / den << ","
           << static_cast<double>(tp.bound) / den << "\n";
    return os.str();
}

Solution solve(const IlpModel& model, const GaugeStructure& gs, const ShapeCatalog& cat,
               const SolveParams& params) {
    auto start = Clock::now();
    Engine eng(model, gs, cat);
    Solution sol;
    auto elapsed = [&]() {
        return std::chrono::duration<double>(Clock::now() - start).count();
    };
    auto out_of_budget = [&]() {
        if (params.work_limit >= 0 && eng.work > params.work_limit) return true;
        return elapsed() > params.time_limit_s;
    };

    // Incumbent: the hint, or a feasibility search result.
    Diagram incumbent;
    bool have_incumbent = false;
    if (params.hints) {
        incumbent = decode_assignment(model, *params.hints, gs);
        have_incumbent = true;
    } else {
        SolveParams fp = params;
        fp.hints.reset();
        Solution feas = feasibility(model, gs, cat, params);
        sol.work_used += feas.work_used;
        if (feas.status == SolveStatus::Infeasible) {
            sol.status = SolveStatus::Infeasible;
            sol.infeasible_witness = feas.infeasible_witness;
            sol.bound = kInf;
            sol.elapsed_s = elapsed();
            return sol;
        }
        if (feas.status == SolveStatus::Unknown) {
            sol.status = SolveStatus::Unknown;
            sol.elapsed_s = elapsed();
            return sol;
        }
        incumbent = decode_assignment(model, feas.assignment, gs);
        have_incumbent = true;
    }
    eng.load(incumbent);
    int64_t best = eng.total_cost();
    Diagram best_diag = incumbent;
    int64_t bound = capacity_bound(eng);
    auto push_trace = [&]() {
        if (params.emit_trace) sol.trace.push_back({elapsed(), eng.work, best, bound});
    };
    push_trace();

    size_t n = gs.ops.size();
    bool proven = best <= bound;
    // Full-space dive when the model is small enough to close exactly.
    if (!proven && model.primary_count <= 160) {
        std::vector<int> all(n);
        for (size_t i = 0; i < n; i++) all[static_cast<size_t>(i)] = static_cast<int>(i);
        auto res = eng.dive(all, best, best_diag, params.work_limit >= 0
                                                     ? params.work_limit
                                                     : int64_t(50) * 1000 * 1000);
        if (res.improved) push_trace();
        if (res.explored) {
            bound = best;
            proven = true;
            push_trace();
        }
    }
    // Neighborhood improvement passes.
    if (!proven) {
        SplitMix64 rng(params.seed * 0x9e3779b97f4a7c15ULL + 17);
        std::vector<int> seq(n);
        for (size_t i = 0; i < n; i++) seq[i] = static_cast<int>(i);
        for (size_t i = n; i > 1; i--) std::swap(seq[i - 1], seq[rng.next() % i]);
        size_t cursor = 0;
        int radius = 1;
        size_t since_improve = 0;
        while (!out_of_budget()) {
            int seed_op = seq[cursor];
            cursor = (cursor + 1) % n;
            std::set<int> free_set = {seed_op};
            for (int r = 0; r < radius; r++) {
                std::set<int> grow = free_set;
                for (int op : free_set)
                    for (int nb : eng.op_neighbors[static_cast<size_t>(op)]) grow.insert(nb);
                free_set = std::move(grow);
                if (free_set.size() > 10) break;
            }
            std::vector<int> free_ops(free_set.begin(), free_set.end());
            auto res = eng.dive(free_ops, best, best_diag, 200000);
            if (res.improved) {
                push_trace();
                since_improve = 0;
            } else {
                since_improve++;
            }
            if (since_improve > 2 * n) {
                if (radius >= 2) break;  // local minimum at both radii
                radius = 2;
                since_improve = 0;
            }
            if (best <= bound) {
                proven = true;
                break;
            }
        }
    }

    eng.load(best_diag);
    sol.assignment = hint_from_diagram(model, best_diag);
    sol.objective = assignment_objective(model, sol.assignment);
    sol.bound = proven ? sol.objective : bound;
    sol.status = proven ? SolveStatus::Optimal : SolveStatus::Feasible;
    sol.work_used += eng.work;
    sol.elapsed_s = elapsed();
    if (params.emit_trace) sol.trace.push_back({sol.elapsed_s, eng.work, sol.objective, sol.bound});
    (void)have_incumbent;
    return sol;
}

namespace {

// Feasibility search: place every operator exactly once subject to board
// compatibility and superstabilizer windows. Complete (proves UNSAT) unless
// the work budget runs out.
struct FeasEngine {
    const IlpModel& model;
    const GaugeStructure& gs;
    const ShapeCatalog& cat;
    int T;
    size_t n;
    bool cyclic;
    int64_t work = 0;

    FeasEngine(const IlpModel& m, const GaugeStructure& g, const ShapeCatalog& c)
        : model(m), gs(g), cat(c), T(m.rounds), n(g.ops.size()), cyclic(m.cyclic) {}

    struct Result {
        SolveStatus status = SolveStatus::Unknown;
        Diagram diag;
        std::vector<std::string> witness;
    };

    Result run(int64_t budget, uint64_t seed) {
        int nwin = cyclic ? T : T - 1;
        (void)seed;
        std::vector<std::vector<std::pair<int, int>>> cands(n);
        for (size_t i = 0; i < n; i++) {
            for (int t = 0; t < T; t++)
                for (int p = 0; p < cat.count(static_cast<int>(i)); p++)
                    cands[i].emplace_back(t, p);
        }
        std::vector<std::vector<int>> cand_at(n);  // cand index by (t, p)
        for (size_t i = 0; i < n; i++) {
            cand_at[i].assign(static_cast<size_t>(T * cat.count(static_cast<int>(i))), -1);
            for (size_t ci = 0; ci < cands[i].size(); ci++)
                cand_at[i][static_cast<size_t>(cands[i][ci].first *
                                                   cat.count(static_cast<int>(i)) +
                                               cands[i][ci].second)] = static_cast<int>(ci);
        }
        size_t nss = gs.superstabs.size();
        std::vector<std::vector<size_t>> ss_of(n);
        for (size_t s = 0; s < nss; s++)
            for (int m : gs.superstabs[s].members) ss_of[static_cast<size_t>(m)].push_back(s);

        std::vector<std::vector<bool>> alive(n);
        std::vector<int> alive_count(n);
        for (size_t i = 0; i < n; i++) {
            alive[i].assign(cands[i].size(), true);
            alive_count[i] = static_cast<int>(cands[i].size());
        }
        std::vector<int> placed(n, -1);  // candidate index
        std::vector<std::vector<std::pair<size_t, size_t>>> trail;
        std::vector<std::vector<std::pair<size_t, uint32_t>>> wtrail;
        std::vector<std::pair<size_t, size_t>> stack;
        std::vector<uint32_t> wmask(nss, (uint32_t(1) << nwin) - 1);
        std::vector<std::map<int, int>> boards(static_cast<size_t>(T));

        auto boards_allowed = [&](uint32_t mask) {
            uint32_t b = 0;
            for (int w = 0; w < nwin; w++)
                if (mask & (uint32_t(1) << w))
                    b |= (uint32_t(1) << w) | (uint32_t(1) << ((w + 1) % T));
            return b;
        };
        auto kill = [&](size_t op, size_t ci) {
            alive[op][ci] = false;
            alive_count[op]--;
            if (!trail.empty()) trail.back().push_back({op, ci});
        };
        auto undo_top = [&]() {
            auto [pop, pci] = stack.back();
            stack.pop_back();
            for (auto [oi, oc] : trail.back()) {
                alive[oi][oc] = true;
                alive_count[oi]++;
            }
            trail.pop_back();
            for (auto it = wtrail.back().rbegin(); it != wtrail.back().rend(); ++it)
                wmask[it->first] = it->second;
            wtrail.pop_back();
            boards[static_cast<size_t>(cands[pop][pci].first)].erase(static_cast<int>(pop));
            placed[pop] = -1;
            kill(pop, pci);
        };

        size_t placed_n = 0;
        Result res;
        while (placed_n < n) {
            if (++work > budget) {
                res.status = SolveStatus::Unknown;
                return res;
            }
            size_t best = SIZE_MAX;
            for (size_t i = 0; i < n; i++) {
                if (placed[i] >= 0) continue;
                if (best == SIZE_MAX || alive_count[i] < alive_count[best]) best = i;
            }
            if (alive_count[best] == 0) {
                if (stack.empty()) {
                    res.status = SolveStatus::Infeasible;
                    res.witness = {"measure-once", "compat"};
                    if (!gs.superstabs.empty()) res.witness.push_back("superstab");
                    return res;
                }
                undo_top();
                continue;
            }
            size_t ci = 0;
            while (!alive[best][ci]) ci++;
            auto [t, p] = cands[best][ci];
            boards[static_cast<size_t>(t)].emplace(static_cast<int>(best), p);
            placed[best] = static_cast<int>(ci);
            placed_n++;
            stack.push_back({best, ci});
            trail.push_back({});
            wtrail.push_back({});
            bool wiped = false;
            for (auto [j, pj] : cat.conflicts[static_cast<size_t>(
                     cat.gindex(static_cast<int>(best), p))]) {
                size_t ji = static_cast<size_t>(j);
                if (placed[ji] >= 0) continue;
                int ciq = cand_at[ji][static_cast<size_t>(t * cat.count(j) + pj)];
                if (ciq >= 0 && alive[ji][static_cast<size_t>(ciq)]) {
                    kill(ji, static_cast<size_t>(ciq));
                    if (alive_count[ji] == 0) wiped = true;
                }
            }
            for (size_t s : ss_of[best]) {
                uint32_t covering = 0;
                for (int w = 0; w < nwin; w++)
                    if (w == t || (w + 1) % T == t) covering |= uint32_t(1) << w;
                uint32_t nm = wmask[s] & covering;
                if (nm != wmask[s]) {
                    wtrail.back().push_back({s, wmask[s]});
                    wmask[s] = nm;
                }
                if (nm == 0) {
                    wiped = true;
                    continue;
                }
                uint32_t ballow = boards_allowed(nm);
                for (int m : gs.superstabs[s].members) {
                    size_t mi = static_cast<size_t>(m);
                    if (placed[mi] >= 0) continue;
                    for (size_t cj = 0; cj < cands[mi].size(); cj++) {
                        if (!alive[mi][cj]) continue;
                        if (!((ballow >> cands[mi][cj].first) & 1)) kill(mi, cj);
                    }
                    if (alive_count[mi] == 0) wiped = true;
                }
            }
            // Coverage wipe: an unplaced op with an empty domain fails later;
            // handled by the selection loop.
            if (wiped) undo_top();
        }
        res.status = SolveStatus::Feasible;
        res.diag.d = gs.patch.d;
        res.diag.rounds = T;
        res.diag.provenance = Provenance::Optimized;
        res.diag.boards = boards;
        return res;
    }
};

}  // namespace

Solution feasibility(const IlpModel& model, const GaugeStructure& gs, const ShapeCatalog& cat,
                     const SolveParams& params) {
    auto start = Clock::now();
    Solution sol;
    FeasEngine eng(model, gs, cat);
    int64_t budget = params.work_limit >= 0 ? params.work_limit : INT64_MAX / 2;
    auto res = eng.run(budget, params.seed);
    sol.work_used = eng.work;
    sol.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
    sol.status = res.status;
    sol.infeasible_witness = res.witness;
    if (res.status == SolveStatus::Feasible) {
        sol.assignment = hint_from_diagram(model, res.diag);
        sol.objective = assignment_objective(model, sol.assignment);
        sol.bound = -kInf;
    }
    return sol;
}

}  // namespace luci
