#pragma once

#include "luci/circuit.h"
#include "luci/gauge.h"

namespace luci {

// A deterministic measurement parity of the noiseless circuit, with its
// space-time sensitivity derived by Pauli propagation.
struct Detector {
    int id = -1;
    std::vector<int> meas;  // measurement record indices, sorted
    int basis = -1;         // 0 = X, 1 = Z, 2 = mixed
    int anchor_board = -1;  // board of the last defining measurement
    size_t volume = 0;      // sensitive (slot, qubit, pauli) count
    Support spatial_support;
};

struct CircuitAnalysis {
    std::vector<Detector> detectors;
    std::vector<int> observable;  // measurement records forming the logical
};

// Semantic extraction: symbolic-phase stabilizer simulation finds every
// deterministic parity group; volumes come from backward Pauli propagation.
CircuitAnalysis analyze_circuit(const Circuit& circ, const GaugeStructure& gs,
                                bool with_volumes = true, bool with_observable = true);

// Which detectors an inserted single-Pauli error flips. The slot is the gap
// after layer `slot` (0-based); pauli: 0 = X, 1 = Y, 2 = Z.
std::vector<int> flipped_detectors(const Circuit& circ, const CircuitAnalysis& ana, int slot,
                                   int qubit, int pauli);

// Mean volume and reverse cumulative distribution (threshold -> count).
struct VolumeStats {
    double mean = 0;
    std::vector<std::pair<size_t, size_t>> reverse_cdf;
};
VolumeStats volume_stats(const std::vector<Detector>& dets);

}  // namespace luci
