#pragma once

#include "luci/diagram.h"

namespace luci {

enum class LayerKind : uint8_t { Cnot, Measure, Reset };

struct Layer {
    LayerKind kind = LayerKind::Cnot;
    std::vector<std::pair<int, int>> cnots;  // qubit indices (control, target)
    std::vector<int> targets;                // measured / reset qubits
    std::vector<Basis> bases;                // parallel to targets
    int board = -1;                          // owning board, -1 for terminal layers
};

struct MeasurementRecord {
    int layer = -1;
    int qubit = -1;
    Basis basis = Basis::Z;
    int board = -1;
    int op_id = -1;  // -1 for terminal data measurements
};

// Explicit layered circuit: entry resets and grow half-round, `cycles` full
// schedule cycles of boards (shrink, measure, reset, grow), the final board
// stopping at its reset, then a terminal data measurement.
struct Circuit {
    int d = 0;
    int rounds = 4;
    int cycles = 1;
    Basis memory = Basis::Z;
    std::vector<Coord> qubits;  // dense index -> coordinate, sorted
    std::vector<Layer> layers;
    std::vector<MeasurementRecord> records;

    int qubit_index(Coord q) const;
    int total_boards() const { return rounds * cycles; }
};

Circuit compile_circuit(const Diagram& diag, const GaugeStructure& gs, const ShapeCatalog& cat,
                        int cycles, Basis memory = Basis::Z);

// Gate counts by kind, for cross-checks.
struct GateCounts {
    size_t cnots = 0, measures = 0, resets = 0;
};
GateCounts count_gates(const Circuit& circ);

// Line-oriented stabilizer-circuit text. SI1000-structured noise tags are
// emitted when p > 0. Detector/observable annotation lines reference prior
// measurement records. The grammar is documented in docs/circuit_format.md.
struct CircuitAnnotations {
    std::vector<std::vector<int>> detectors;  // measurement record indices
    std::vector<std::pair<double, double>> detector_coords;
    std::vector<int> observable;
};
std::string circuit_text(const Circuit& circ, double noise_p,
                         const CircuitAnnotations* ann = nullptr);

}  // namespace luci
