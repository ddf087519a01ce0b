#pragma once

#include <optional>
#include <vector>

#include "luci/geometry.h"

namespace luci {

using Support = std::vector<Coord>;  // sorted, unique

// Toggle membership of q in the sorted support s.
void support_toggle(Support& s, Coord q);
bool support_contains(const Support& s, Coord q);
// Parity of |a & b|.
bool odd_overlap(const Support& a, const Support& b);

enum class OpKind : uint8_t { Stabilizer, Gauge };

// A single-basis Pauli operator of the mid-cycle code, possibly split or
// shrunk by dropout.
struct MidCycleOp {
    int id = -1;
    Basis basis = Basis::Z;
    Support support;
    OpKind kind = OpKind::Stabilizer;
    std::optional<int> region;  // dropout-region id for gauges

    int weight() const { return static_cast<int>(support.size()); }
};

// Two single-basis Paulis commute iff same basis or even overlap.
inline bool commutes(const MidCycleOp& a, const MidCycleOp& b) {
    return a.basis == b.basis || !odd_overlap(a.support, b.support);
}

// Conjugate a basis-beta Pauli product through CNOT layers (applied in
// order). Within a layer no qubit is touched twice, so sequential
// application is exact.
void propagate(Support& s, Basis beta, const std::vector<CnotLayer>& layers);

// Dropout-free mid-cycle code: 2d^2-2 commuting operators, each the image of
// a start-of-cycle stabilizer under the first two CNOT layers. Operators come
// in two phases: phase A shrinks onto its ancilla during the second
// half-round of the canonical circuit, phase B is the one grown from the
// ancilla reset by the first half-round.
struct MidCycleCode {
    PatchSpec patch;
    std::vector<MidCycleOp> ops;      // ids 0..n-1
    std::vector<Coord> op_ancilla;    // canonical ancilla per op
    std::vector<int> op_phase;        // 0 = A (shrink), 1 = B (grow)
};

MidCycleCode mid_cycle_operators(const PatchSpec& patch);

}  // namespace luci
