#pragma once

#include "luci/detectors.h"

namespace luci {

// Per-operator measurement counts per cycle and the fraction measured exactly
// k times.
struct FrequencyStats {
    std::vector<int> per_op;                 // count per op id
    std::map<int, size_t> histogram;         // count -> #ops
    double fraction_measured(int times) const {
        auto it = histogram.find(times);
        if (it == histogram.end()) return 0.0;
        return static_cast<double>(it->second) / static_cast<double>(per_op.size());
    }
};
FrequencyStats measurement_frequency_stats(const Diagram& diag, const GaugeStructure& gs);

// Shortest side-to-side path through the shared-detector graph and the number
// of minimum-weight paths (dynamic programming on BFS layers). Lengths count
// qubits on the path. Returns length -1 when the sides are disconnected.
struct PathCount {
    int length = -1;
    uint64_t count = 0;
};
PathCount min_weight_paths(const std::vector<Detector>& slice, Basis logical_basis,
                           const PatchSpec& patch);

// The end-cycle detector slice: per operator group of the sensing basis, the
// last completed detector before the terminal layers.
std::vector<Detector> end_cycle_slice(const CircuitAnalysis& ana, const Circuit& circ,
                                      Basis logical_basis);

}  // namespace luci
