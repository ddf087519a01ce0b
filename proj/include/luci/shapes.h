#pragma once

#include <vector>

#include "luci/gauge.h"

namespace luci {

// One measurement subcircuit: a two-layer CNOT tree rooted at a canonical
// measure qubit, measuring one operator. CNOTs are stored as (control,
// target); Z-type shapes merge toward the root as targets, X-type reversed.
struct Shape {
    int op_id = -1;
    Coord root;
    Basis basis = Basis::Z;
    CnotLayer layer1, layer2;

    Support touched() const;  // root plus all CNOT endpoints, sorted
    char glyph() const;       // orientation character for the text format
    bool operator==(const Shape&) const = default;
};

// All legal shapes for an operator. With restrict_roots the measurement must
// act on a canonical measure qubit (even/even), halving the options.
std::vector<Shape> enumerate_shapes(const MidCycleOp& op, const PatchSpec& patch,
                                    const DropoutConfig& cfg, bool restrict_roots = true);

// Physical incompatibility of two same-board shapes: a qubit used twice in
// one layer (identical CNOTs count once), shared measure qubit, anticommuting
// operators, or joint propagation failing to land both operators on their
// measure qubits.
bool incompatible(const Shape& a, const Support& op_a, Basis basis_a, const Shape& b,
                  const Support& op_b, Basis basis_b);

// Whether a CNOT of the shape carries victim-basis-detectable errors into the
// victim's support: a CNOT with exactly one endpoint inside, oriented to
// propagate errors inward (targets into Z-type victims, controls into X-type).
bool stretches(const Support& victim, Basis victim_basis, const Shape& s);

struct ShapePairKey {
    int i, p, j, q;  // (op, shape) x (op, shape), i < j
    auto operator<=>(const ShapePairKey&) const = default;
};

struct ShapeCatalog {
    std::vector<std::vector<Shape>> shapes;      // indexed by op id
    std::vector<Shape> canonical;                // canonical shape per op (= shapes[i][0])
    std::vector<ShapePairKey> incompatible_pairs;  // all same-board conflicts, i < j
    // Flat conflict lists: global shape index -> conflicting (op, shape) list.
    std::vector<int> gbase;
    std::vector<std::vector<std::pair<int, int>>> conflicts;

    const Shape& at(int op, int p) const {
        return shapes[static_cast<size_t>(op)][static_cast<size_t>(p)];
    }
    int count(int op) const { return static_cast<int>(shapes[static_cast<size_t>(op)].size()); }
    int gindex(int op, int p) const { return gbase[static_cast<size_t>(op)] + p; }
    int total_shapes() const {
        return gbase.empty() ? 0
                             : gbase.back() + count(static_cast<int>(shapes.size()) - 1);
    }
    bool pair_incompatible(int i, int p, int j, int q) const;
    // Shape lookup by root and glyph; -1 if absent.
    int find(int op, Coord root, char glyph) const;
    void rebuild_conflict_lists();
};

ShapeCatalog build_catalog(const GaugeStructure& gs);

}  // namespace luci
