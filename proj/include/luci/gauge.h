#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "luci/ops.h"

namespace luci {

struct PatchDestroyedError : std::runtime_error {
    PatchDestroyedError() : std::runtime_error("patch destroyed: no usable region survives") {}
};

struct SuperStabilizer {
    Basis basis = Basis::Z;
    std::vector<int> members;  // gauge op ids, size >= 2
    Support support;           // product support (symmetric difference)
};

// Provenance of a surviving operator: which rotated check / phase it came
// from. Phase 0 operators shrink onto their ancilla in the canonical second
// half-round, phase 1 operators are grown from the ancilla reset.
struct OpOrigin {
    int check_index = -1;
    int phase = 0;
    Coord ancilla;
};

struct DropoutResult {
    std::vector<MidCycleOp> ops;
    std::vector<OpOrigin> origins;        // per op (first parent when deduped)
    std::set<Coord> kept_region;          // usable qubits kept
    std::set<Coord> discarded_region;     // usable qubits dropped with their region
};

// The three-step gauge construction: delete broken qubits from supports,
// split operators into connected components under usable couplers, keep only
// the largest patch region, then classify survivors by symplectic
// commutation. `extra_broken` lets the measure-qubit restriction feed back.
DropoutResult apply_dropout(const MidCycleCode& code, const DropoutConfig& cfg,
                            const std::set<Coord>& extra_broken = {});

// Full gauge-group pipeline output.
struct GaugeStructure {
    PatchSpec patch;
    DropoutConfig cfg;  // post legacy conversion when legacy = true
    bool legacy = false;
    std::vector<MidCycleOp> ops;
    std::vector<OpOrigin> origins;
    std::vector<SuperStabilizer> superstabs;
    std::set<Coord> kept_region;
    std::set<Coord> discarded_region;
    std::set<Coord> excised_data;      // removed by the measure-qubit restriction
    std::set<Coord> trimmed_boundary;  // removed by the trim pass
    int restrict_iterations = 0;

    bool qubit_usable(Coord q) const {
        return kept_region.count(q) && !trimmed_boundary.count(q);
    }
    bool coupler_usable(const Coupler& c) const {
        return patch.has_coupler(c) && !cfg.broken_couplers.count(c) && qubit_usable(c.a) &&
               qubit_usable(c.b);
    }
    const MidCycleOp* op_by_id(int id) const { return &ops[static_cast<size_t>(id)]; }
};

struct GaugeOptions {
    bool legacy = false;
    bool restrict_measure_qubits = true;
};

GaugeStructure build_gauge_structure(const PatchSpec& patch, const DropoutConfig& cfg,
                                     const GaugeOptions& opts = {});

// Re-runs the dropout construction treating data qubits that carry
// weight-one operators as broken, to fixpoint.
DropoutResult restrict_to_measure_qubits(const MidCycleCode& code, const DropoutConfig& cfg,
                                         std::set<Coord>& excised_out, int& iterations_out);

// Exact minimum weight of a basis-type logical operator: commutes with every
// surviving check, outside the group generated by same-basis operators.
// Meet-in-the-middle search; intended for d <= 7.
int code_distance(const GaugeStructure& gs, Basis basis);

// Throws std::logic_error when the surviving region encodes no logical qubit.
int logical_qubit_count(const GaugeStructure& gs);

}  // namespace luci
