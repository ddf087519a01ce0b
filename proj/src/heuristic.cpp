#include "luci/heuristic.h"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace luci {

std::vector<int> four_color(const GaugeStructure& gs, const ShapeCatalog& cat) {
    size_t n = gs.ops.size();
    std::vector<std::vector<int>> adj(n);
    for (size_t i = 0; i < n; i++)
        for (size_t j = i + 1; j < n; j++)
            if (cat.pair_incompatible(static_cast<int>(i), 0, static_cast<int>(j), 0)) {
                adj[i].push_back(static_cast<int>(j));
                adj[j].push_back(static_cast<int>(i));
            }
    std::vector<int> color(n, -1);
    bool greedy_ok = true;
    for (size_t i = 0; i < n; i++) {
        bool used[4] = {false, false, false, false};
        for (int nb : adj[i])
            if (color[static_cast<size_t>(nb)] >= 0) used[color[static_cast<size_t>(nb)]] = true;
        int c = 0;
        while (c < 4 && used[c]) c++;
        if (c >= 4) {
            greedy_ok = false;
            break;
        }
        color[i] = c;
    }
    if (greedy_ok) return color;
    // Greedy can overshoot on dense defect clusters; fall back to exact
    // backtracking, most-constrained vertex first.
    std::fill(color.begin(), color.end(), -1);
    std::vector<int> order(n);
    for (size_t i = 0; i < n; i++) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return adj[static_cast<size_t>(a)].size() >
                                                adj[static_cast<size_t>(b)].size(); });
    long nodes = 0;
    std::function<bool(size_t)> assign = [&](size_t k) {
        if (k == n) return true;
        if (++nodes > 1000000) return false;
        size_t v = static_cast<size_t>(order[k]);
        bool used[4] = {false, false, false, false};
        for (int nb : adj[v])
            if (color[static_cast<size_t>(nb)] >= 0) used[color[static_cast<size_t>(nb)]] = true;
        for (int c = 0; c < 4; c++) {
            if (used[c]) continue;
            color[v] = c;
            if (assign(k + 1)) return true;
            color[v] = -1;
        }
        return false;
    };
    if (!assign(0)) throw std::logic_error("conflict graph needed more than four colors");
    return color;
}

namespace {

bool board_accepts(const std::map<int, int>& board, const ShapeCatalog& cat, int op, int p) {
    for (auto [j, q] : board)
        if (cat.pair_incompatible(op, p, j, q)) return false;
    return true;
}

}  // namespace

namespace {

int cnots_touching(const Shape& s, Coord q) {
    int n = 0;
    for (const CnotLayer* layer : {&s.layer1, &s.layer2})
        for (auto [c, t] : *layer)
            if (c == q || t == q) n++;
    return n;
}

}  // namespace

std::vector<Coord> trim_unused_boundary_qubits(GaugeStructure& gs, ShapeCatalog& cat,
                                               Diagram& diag) {
    std::vector<Coord> all_removed;
    int dd = 2 * gs.patch.d;
    for (;;) {
        std::map<Coord, std::vector<int>> member_of;
        for (const auto& op : gs.ops)
            for (Coord q : op.support) member_of[q].push_back(op.id);

        // A boundary measure qubit is removable when it hosts a weight-one
        // stabilizer, is never the measure qubit of any other operator, and is
        // never an interior (waypoint) node of an assigned shape: leaf CNOTs
        // can be clipped, an interior node cannot.
        std::set<Coord> removed_q;
        std::set<int> removed_ops;
        for (const auto& [q, ids] : member_of) {
            if (!PatchSpec::is_measure_coord(q)) continue;
            if (q.x != 0 && q.x != dd && q.y != 0 && q.y != dd) continue;
            int own = -1;
            for (int id : ids) {
                const auto& op = gs.ops[static_cast<size_t>(id)];
                if (op.weight() == 1 && op.kind == OpKind::Stabilizer) own = id;
            }
            if (own < 0) continue;
            bool ok = true;
            for (const auto& board : diag.boards) {
                for (auto [opid, p] : board) {
                    const Shape& s = cat.at(opid, p);
                    if (s.root == q && opid != own) ok = false;
                    if (s.root != q && cnots_touching(s, q) >= 2) ok = false;
                }
                if (!ok) break;
            }
            if (ok) {
                removed_q.insert(q);
                removed_ops.insert(own);
            }
        }
        if (removed_q.empty()) break;

        // Shrink surviving operators and re-id them.
        std::vector<int> remap(gs.ops.size(), -1);
        std::vector<MidCycleOp> ops;
        std::vector<OpOrigin> origins;
        std::map<std::pair<int, Support>, int> dedupe;
        for (size_t i = 0; i < gs.ops.size(); i++) {
            if (removed_ops.count(static_cast<int>(i))) continue;
            MidCycleOp op = gs.ops[i];
            Support s;
            for (Coord q : op.support)
                if (!removed_q.count(q)) s.push_back(q);
            if (s.empty()) continue;
            op.support = std::move(s);
            auto key = std::make_pair(static_cast<int>(op.basis), op.support);
            auto it = dedupe.find(key);
            if (it != dedupe.end()) {
                remap[i] = it->second;
                continue;
            }
            op.id = static_cast<int>(ops.size());
            remap[i] = op.id;
            dedupe.emplace(key, op.id);
            ops.push_back(std::move(op));
            origins.push_back(gs.origins[i]);
        }
        auto old_shapes = cat.shapes;
        auto old_boards = diag.boards;
        gs.ops = std::move(ops);
        gs.origins = std::move(origins);
        for (Coord q : removed_q) {
            gs.trimmed_boundary.insert(q);
            all_removed.push_back(q);
        }
        for (auto& ss : gs.superstabs) {
            for (int& m : ss.members) m = remap[static_cast<size_t>(m)];
            ss.support.clear();
            for (int m : ss.members)
                for (Coord q : gs.ops[static_cast<size_t>(m)].support)
                    support_toggle(ss.support, q);
        }
        cat = build_catalog(gs);

        // Re-point the diagram: clip leaf CNOTs on removed qubits and look the
        // clipped shape up in the rebuilt catalog.
        for (size_t t = 0; t < old_boards.size(); t++) {
            std::map<int, int> nb;
            for (auto [opid, p] : old_boards[t]) {
                int nid = remap[static_cast<size_t>(opid)];
                if (nid < 0) continue;
                Shape s = old_shapes[static_cast<size_t>(opid)][static_cast<size_t>(p)];
                auto clip = [&](CnotLayer& layer) {
                    CnotLayer out;
                    for (auto cn : layer)
                        if (!removed_q.count(cn.first) && !removed_q.count(cn.second))
                            out.push_back(cn);
                    layer = std::move(out);
                };
                clip(s.layer1);
                clip(s.layer2);
                int np = -1;
                const auto& list = cat.shapes[static_cast<size_t>(nid)];
                for (size_t cp = 0; cp < list.size(); cp++)
                    if (list[cp].root == s.root && list[cp].layer1 == s.layer1 &&
                        list[cp].layer2 == s.layer2)
                        np = static_cast<int>(cp);
                if (np < 0) throw std::logic_error("clipped shape missing from rebuilt catalog");
                nb.emplace(nid, np);
            }
            diag.boards[t] = std::move(nb);
        }
    }
    return all_removed;
}

Diagram canonical_diagram(const GaugeStructure& gs, const ShapeCatalog& cat, int mirror,
                          int shift, int rounds) {
    Diagram diag;
    diag.d = gs.patch.d;
    diag.rounds = rounds;
    diag.provenance = Provenance::Heuristic;
    diag.boards.assign(static_cast<size_t>(rounds), {});
    for (const auto& op : gs.ops) {
        int phase = gs.origins[static_cast<size_t>(op.id)].phase;
        int p = 0;
        if (mirror) {
            // The reflected convention uses every root's other tree; it keeps
            // the Z diamonds' phase split and swaps the X diamonds' one.
            const auto& list = cat.shapes[static_cast<size_t>(op.id)];
            Coord root = list[0].root;
            for (size_t k = 1; k < list.size(); k++)
                if (list[k].root == root) p = static_cast<int>(k);
            if (op.basis == Basis::X) phase ^= 1;
        }
        for (int t = 0; t < rounds; t++)
            if ((t + shift) % 2 == phase) diag.boards[static_cast<size_t>(t)].emplace(op.id, p);
    }
    return diag;
}

Diagram default_diagram(GaugeStructure& gs, ShapeCatalog& cat, const HeuristicOptions& opts) {
    if (gs.ops.empty()) throw std::runtime_error("no operators to schedule");
    // Dense defect clusters can defeat a proper four-coloring; priorities only
    // steer the search, so fall back to the structural phase/basis classes.
    std::vector<int> colors;
    try {
        colors = four_color(gs, cat);
    } catch (const std::logic_error&) {
        colors.resize(gs.ops.size());
        for (const auto& op : gs.ops)
            colors[static_cast<size_t>(op.id)] =
                2 * gs.origins[static_cast<size_t>(op.id)].phase +
                (op.basis == Basis::X ? 1 : 0);
    }
    // Give each superstabilizer's members a common priority color so their
    // covering round pair exists by construction; opposite-basis groups of the
    // same region must land on different boards.
    std::map<std::pair<int, int>, int> group_color;  // (region, basis) -> color
    for (const auto& ss : gs.superstabs) {
        int region = gs.ops[static_cast<size_t>(ss.members.front())].region.value_or(-1);
        int c = colors[static_cast<size_t>(ss.members.front())];
        auto other = group_color.find({region, static_cast<int>(opposite(ss.basis))});
        if (other != group_color.end() && other->second == c) c = (c + 1) % 4;
        group_color[{region, static_cast<int>(ss.basis)}] = c;
        for (int m : ss.members) colors[static_cast<size_t>(m)] = c;
    }
    Diagram diag;
    diag.d = gs.patch.d;
    diag.rounds = opts.rounds;
    diag.provenance = Provenance::Heuristic;
    diag.boards.assign(static_cast<size_t>(opts.rounds), {});

    size_t n = gs.ops.size();
    int T = opts.rounds;
    // Skeleton pass: place every operator exactly once so coverage and the
    // superstabilizer windows hold by construction. Forward-checking search,
    // most-constrained operator first, deterministic restarts with rotated
    // board preferences when a node budget runs out.
    std::vector<int> order(n);
    for (size_t i = 0; i < n; i++) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        auto key = [&](int i) {
            return std::make_tuple(gs.ops[static_cast<size_t>(i)].kind == OpKind::Stabilizer, i);
        };
        return key(a) < key(b);
    });
    std::vector<int> rank_of(n);
    for (size_t k = 0; k < n; k++) rank_of[static_cast<size_t>(order[k])] = static_cast<int>(k);

    size_t nss = gs.superstabs.size();
    std::vector<std::vector<size_t>> ss_of(n);
    for (size_t s = 0; s < nss; s++)
        for (int m : gs.superstabs[s].members) ss_of[static_cast<size_t>(m)].push_back(s);
    int nwin = opts.cyclic ? T : T - 1;
    auto boards_allowed = [&](uint32_t mask) {
        uint32_t b = 0;
        for (int w = 0; w < nwin; w++)
            if (mask & (uint32_t(1) << w)) b |= (uint32_t(1) << w) | (uint32_t(1) << ((w + 1) % T));
        return b;
    };

    bool skeleton_done = false;
    std::string last_failure = "skeleton search failed";
    for (int attempt = 0; attempt < 6 && !skeleton_done; attempt++) {
        for (auto& b : diag.boards) b.clear();
        long node_budget = 50000L << attempt;
        // Candidates (board, shape) per op, boards visited from the priority
        // color outward, same parity first; restarts rotate the color.
        std::vector<std::vector<std::pair<int, int>>> cands(n);
        std::vector<std::vector<int>> board_pos(n, std::vector<int>(static_cast<size_t>(T), 0));
        for (size_t i = 0; i < n; i++) {
            int c = (colors[i] + attempt) % 4;
            std::vector<int> visit(static_cast<size_t>(T));
            for (int t = 0; t < T; t++) visit[static_cast<size_t>(t)] = t;
            std::sort(visit.begin(), visit.end(), [&](int a, int b) {
                auto key = [&](int t) {
                    int dt = ((t - c) % T + T) % T;
                    return std::make_pair(dt % 2, dt);
                };
                return key(a) < key(b);
            });
            int nshapes = cat.count(static_cast<int>(i));
            for (size_t v = 0; v < visit.size(); v++) {
                board_pos[i][static_cast<size_t>(visit[v])] = static_cast<int>(v);
                for (int p = 0; p < nshapes; p++) cands[i].emplace_back(visit[v], p);
            }
        }
        auto cand_index = [&](size_t op, int t, int p) {
            return static_cast<size_t>(board_pos[op][static_cast<size_t>(t)] * cat.count(static_cast<int>(op)) + p);
        };

        std::vector<std::vector<bool>> alive(n);
        std::vector<int> alive_count(n);
        for (size_t i = 0; i < n; i++) {
            alive[i].assign(cands[i].size(), true);
            alive_count[i] = static_cast<int>(cands[i].size());
        }
        std::vector<bool> placed_flag(n, false);
        std::vector<std::vector<std::pair<size_t, size_t>>> trail;
        std::vector<std::vector<std::pair<size_t, uint32_t>>> wtrail;
        std::vector<std::pair<size_t, size_t>> placement_stack;
        std::vector<uint32_t> wmask(nss, (uint32_t(1) << nwin) - 1);
        long nodes = 0;
        size_t placed_n = 0;
        auto kill = [&](size_t op, size_t ci) {
            alive[op][ci] = false;
            alive_count[op]--;
            if (!trail.empty()) trail.back().push_back({op, ci});
        };
        auto undo_top = [&]() {
            auto [pop, pci] = placement_stack.back();
            placement_stack.pop_back();
            for (auto [oi, oc] : trail.back()) {
                alive[oi][oc] = true;
                alive_count[oi]++;
            }
            trail.pop_back();
            for (auto it = wtrail.back().rbegin(); it != wtrail.back().rend(); ++it)
                wmask[it->first] = it->second;
            wtrail.pop_back();
            diag.boards[static_cast<size_t>(cands[pop][pci].first)].erase(static_cast<int>(pop));
            placed_flag[pop] = false;
            placed_n--;
            kill(pop, pci);  // the failed choice dies in the parent context
        };
        bool gave_up = false;
        while (placed_n < n) {
            if (++nodes > node_budget) {
                last_failure = "skeleton search exceeded its node budget";
                gave_up = true;
                break;
            }
            size_t best = SIZE_MAX;
            for (size_t i = 0; i < n; i++) {
                if (placed_flag[i]) continue;
                if (best == SIZE_MAX || alive_count[i] < alive_count[best] ||
                    (alive_count[i] == alive_count[best] && rank_of[i] < rank_of[best]))
                    best = i;
            }
            if (alive_count[best] == 0) {
                if (placement_stack.empty()) {
                    last_failure = "no valid schedule: operator " + std::to_string(best) +
                                   " has no remaining placement";
                    gave_up = true;
                    break;
                }
                undo_top();
                continue;
            }
            size_t ci = 0;
            while (!alive[best][ci]) ci++;
            auto [t, p] = cands[best][ci];
            diag.boards[static_cast<size_t>(t)].emplace(static_cast<int>(best), p);
            placed_flag[best] = true;
            placed_n++;
            placement_stack.push_back({best, ci});
            trail.push_back({});
            wtrail.push_back({});
            bool wiped = false;
            for (auto [j, pj] : cat.conflicts[static_cast<size_t>(cat.gindex(static_cast<int>(best), p))]) {
                size_t ji = static_cast<size_t>(j);
                if (placed_flag[ji]) continue;
                size_t cj = cand_index(ji, t, pj);
                if (alive[ji][cj]) {
                    kill(ji, cj);
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
                    if (placed_flag[mi]) continue;
                    for (size_t cj = 0; cj < cands[mi].size(); cj++) {
                        if (!alive[mi][cj]) continue;
                        if (!((ballow >> cands[mi][cj].first) & 1)) kill(mi, cj);
                    }
                    if (alive_count[mi] == 0) wiped = true;
                }
            }
            if (wiped) undo_top();
        }
        if (!gave_up) skeleton_done = true;
    }
    if (!skeleton_done) throw std::runtime_error(last_failure);

    // Densify: extra measurements never violate coverage or superstabilizer
    // windows, only board compatibility, so fill greedily.
    for (int t = 0; t < T; t++) {
        std::vector<int> forder(n);
        for (size_t i = 0; i < n; i++) forder[i] = static_cast<int>(i);
        auto key = [&](int i) {
            int c = colors[static_cast<size_t>(i)];
            bool stab = gs.ops[static_cast<size_t>(i)].kind == OpKind::Stabilizer;
            return std::make_tuple(((c - t) % 2 + 2) % 2, ((c - t) % 4 + 4) % 4, stab, i);
        };
        std::sort(forder.begin(), forder.end(), [&](int a, int b) { return key(a) < key(b); });
        auto& board = diag.boards[static_cast<size_t>(t)];
        for (int op : forder) {
            if (board.count(op)) continue;
            for (int p = 0; p < cat.count(op); p++)
                if (board_accepts(board, cat, op, p)) {
                    board.emplace(op, p);
                    break;
                }
        }
    }
    if (opts.trim) {
        trim_unused_boundary_qubits(gs, cat, diag);
        auto viol = validate_diagram(diag, gs, cat, opts.cyclic);
        if (!viol.empty())
            throw std::logic_error("diagram invalid after trim: " + viol.front().family + " " +
                                   viol.front().detail);
    }
    return diag;
}

}  // namespace luci
