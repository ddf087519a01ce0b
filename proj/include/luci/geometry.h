#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace luci {

// Integer lattice point of the mid-cycle picture. Data qubits sit on odd/odd
// coordinates, canonical measure qubits on even/even ones; couplers join
// diagonal neighbors, so every qubit has even coordinate sum.
struct Coord {
    int x = 0;
    int y = 0;
    auto operator<=>(const Coord&) const = default;
};

inline Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y}; }
inline Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y}; }

// Unordered pair of diagonally adjacent qubits, smaller endpoint first.
struct Coupler {
    Coord a, b;
    Coupler() = default;
    Coupler(Coord p, Coord q) : a(p < q ? p : q), b(p < q ? q : p) {}
    auto operator<=>(const Coupler&) const = default;
};

enum class Basis : uint8_t { X, Z };

inline char basis_char(Basis b) { return b == Basis::X ? 'X' : 'Z'; }
inline Basis opposite(Basis b) { return b == Basis::X ? Basis::Z : Basis::X; }

// The four diagonal coupler directions: NE, NW, SW, SE.
inline constexpr Coord kDiagonals[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};

// Rotated-surface-code patch on the doubled integer grid. Data qubits at
// (odd, odd) for 1 <= x,y <= 2d-1; measure qubits at (even, even) positions
// following the usual boundary cut (weight-2 X checks on the top/bottom
// boundaries, weight-2 Z checks left/right).
struct PatchSpec {
    int d = 0;
    std::vector<Coord> data_qubits;     // sorted
    std::vector<Coord> measure_qubits;  // sorted
    std::vector<Coord> all_qubits;      // sorted
    std::vector<Coupler> couplers;      // sorted

    bool has_qubit(Coord q) const;
    bool has_coupler(const Coupler& c) const;
    static bool is_data_coord(Coord q) { return (q.x & 1) && (q.y & 1); }
    static bool is_measure_coord(Coord q) { return !(q.x & 1) && !(q.y & 1); }
    // Basis of the rotated-picture check hosted on a measure qubit.
    static Basis measure_basis(Coord m) { return ((m.x + m.y) / 2) % 2 != 0 ? Basis::X : Basis::Z; }
    int qubit_index(Coord q) const;  // index into all_qubits, -1 if absent

    // Rotated-picture stabilizer: ancilla plus its data-qubit support.
    struct RotatedCheck {
        Coord ancilla;
        Basis basis;
        std::vector<Coord> support;  // data qubits, sorted
    };
    std::vector<RotatedCheck> rotated_checks() const;
};

PatchSpec build_patch(int d);

// Fabrication-defect configuration for a patch.
struct DropoutConfig {
    int d = 0;
    std::set<Coord> broken_qubits;
    std::set<Coupler> broken_couplers;
    std::optional<uint64_t> seed;

    bool qubit_broken(Coord q) const { return broken_qubits.count(q) != 0; }
    // A coupler is unusable if broken itself or either endpoint is broken.
    bool coupler_usable(const Coupler& c) const {
        return !broken_couplers.count(c) && !qubit_broken(c.a) && !qubit_broken(c.b);
    }
};

DropoutConfig sample_dropout(const PatchSpec& patch, double qubit_rate, double coupler_rate,
                             uint64_t seed);

// Legacy gauge-group prescription: every pair of perpendicular broken
// couplers converts their shared qubit into a broken qubit (to fixpoint).
DropoutConfig legacy_convert(const PatchSpec& patch, const DropoutConfig& cfg);

// One CNOT layer as (control, target) pairs.
using CnotLayer = std::vector<std::pair<Coord, Coord>>;

// The four CNOT layers of the canonical syndrome-extraction round.
// Z ancillas absorb data in the order NW, SW, NE, SE; X ancillas spread in
// the order NW, NE, SW, SE.
std::vector<CnotLayer> canonical_layers(const PatchSpec& patch);

}  // namespace luci
