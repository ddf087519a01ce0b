#include "luci/analysis.h"

#include <algorithm>
#include <map>
#include <queue>

namespace luci {

FrequencyStats measurement_frequency_stats(const Diagram& diag, const GaugeStructure& gs) {
    FrequencyStats out;
    out.per_op.assign(gs.ops.size(), 0);
    for (const auto& board : diag.boards)
        for (auto [op, p] : board) {
            (void)p;
            out.per_op[static_cast<size_t>(op)]++;
        }
    for (int c : out.per_op) out.histogram[c]++;
    return out;
}

PathCount min_weight_paths(const std::vector<Detector>& slice, Basis logical_basis,
                           const PatchSpec& patch) {
    // Vertices are qubits; qubits sharing a detector's spatial support are
    // adjacent. A basis-Z logical runs between the left and right boundaries,
    // a basis-X logical between top and bottom.
    std::map<Coord, std::set<Coord>> adj;
    for (const auto& det : slice)
        for (Coord a : det.spatial_support)
            for (Coord b : det.spatial_support) {
                if (a == b) continue;
                adj[a].insert(b);
            }
    int dd = 2 * patch.d;
    auto on_side = [&](Coord q, bool far) {
        if (logical_basis == Basis::Z) return far ? q.x >= dd - 1 : q.x <= 1;
        return far ? q.y >= dd - 1 : q.y <= 1;
    };
    // Multi-source BFS from the near side, counting shortest paths by the
    // number of qubits used.
    std::map<Coord, int> dist;
    std::map<Coord, uint64_t> ways;
    std::queue<Coord> bfs;
    for (const auto& [q, nbs] : adj) {
        (void)nbs;
        if (on_side(q, false)) {
            dist[q] = 1;
            ways[q] = 1;
            bfs.push(q);
        }
    }
    PathCount out;
    int best = -1;
    // Plain BFS; accumulate counts level by level.
    while (!bfs.empty()) {
        Coord q = bfs.front();
        bfs.pop();
        if (best >= 0 && dist[q] > best) continue;
        if (on_side(q, true)) {
            if (best < 0) best = dist[q];
            if (dist[q] == best) out.count += ways[q];
            continue;
        }
        for (Coord nb : adj[q]) {
            auto it = dist.find(nb);
            if (it == dist.end()) {
                dist[nb] = dist[q] + 1;
                ways[nb] = ways[q];
                bfs.push(nb);
            } else if (it->second == dist[q] + 1) {
                ways[nb] += ways[q];
            }
        }
    }
    out.length = best;
    return out;
}

std::vector<Detector> end_cycle_slice(const CircuitAnalysis& ana, const Circuit& circ,
                                      Basis logical_basis) {
    // Detectors of the basis that senses logical_basis errors, excluding those
    // touching terminal data measurements; keep the latest detector per
    // defining-measurement op set.
    int want = logical_basis == Basis::Z ? 0 : 1;  // X detectors sense Z errors
    int terminal_board = circ.total_boards();
    std::map<std::vector<int>, Detector> latest;  // key: sorted op ids
    for (const auto& det : ana.detectors) {
        if (det.basis != want) continue;
        if (det.anchor_board >= terminal_board) continue;
        std::vector<int> ops;
        for (int m : det.meas) ops.push_back(circ.records[static_cast<size_t>(m)].op_id);
        std::sort(ops.begin(), ops.end());
        ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
        auto it = latest.find(ops);
        if (it == latest.end() || it->second.anchor_board < det.anchor_board)
            latest[ops] = det;
    }
    std::vector<Detector> out;
    for (auto& [k, det] : latest) out.push_back(det);
    return out;
}

}  // namespace luci
