#include "luci/geometry.h"

#include <algorithm>
#include <stdexcept>

namespace luci {

bool PatchSpec::has_qubit(Coord q) const {
    return std::binary_search(all_qubits.begin(), all_qubits.end(), q);
}

bool PatchSpec::has_coupler(const Coupler& c) const {
    return std::binary_search(couplers.begin(), couplers.end(), c);
}

int PatchSpec::qubit_index(Coord q) const {
    auto it = std::lower_bound(all_qubits.begin(), all_qubits.end(), q);
    if (it == all_qubits.end() || *it != q) return -1;
    return static_cast<int>(it - all_qubits.begin());
}

PatchSpec build_patch(int d) {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be an odd integer >= 3");
    PatchSpec p;
    p.d = d;
    for (int x = 1; x < 2 * d; x += 2)
        for (int y = 1; y < 2 * d; y += 2) p.data_qubits.push_back({x, y});
    // Measure qubits at face corners (2fx, 2fy); boundary faces are kept only
    // on the sides matching their basis.
    for (int fx = 0; fx <= d; fx++) {
        for (int fy = 0; fy <= d; fy++) {
            bool x_boundary = fx == 0 || fx == d;
            bool y_boundary = fy == 0 || fy == d;
            bool parity = (fx % 2) != (fy % 2);  // true -> X check
            if (x_boundary && parity) continue;
            if (y_boundary && !parity) continue;
            if (x_boundary && y_boundary) continue;
            p.measure_qubits.push_back({2 * fx, 2 * fy});
        }
    }
    std::sort(p.data_qubits.begin(), p.data_qubits.end());
    std::sort(p.measure_qubits.begin(), p.measure_qubits.end());
    p.all_qubits = p.data_qubits;
    p.all_qubits.insert(p.all_qubits.end(), p.measure_qubits.begin(), p.measure_qubits.end());
    std::sort(p.all_qubits.begin(), p.all_qubits.end());
    for (Coord m : p.measure_qubits)
        for (Coord dir : kDiagonals) {
            Coord q = m + dir;
            if (std::binary_search(p.data_qubits.begin(), p.data_qubits.end(), q))
                p.couplers.emplace_back(m, q);
        }
    std::sort(p.couplers.begin(), p.couplers.end());
    p.couplers.erase(std::unique(p.couplers.begin(), p.couplers.end()), p.couplers.end());
    return p;
}

std::vector<PatchSpec::RotatedCheck> PatchSpec::rotated_checks() const {
    std::vector<RotatedCheck> checks;
    for (Coord m : measure_qubits) {
        RotatedCheck c;
        c.ancilla = m;
        c.basis = measure_basis(m);
        for (Coord dir : kDiagonals) {
            Coord q = m + dir;
            if (std::binary_search(data_qubits.begin(), data_qubits.end(), q))
                c.support.push_back(q);
        }
        std::sort(c.support.begin(), c.support.end());
        checks.push_back(std::move(c));
    }
    return checks;
}

namespace {

// SplitMix64: portable seeded stream, identical across platforms.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

DropoutConfig sample_dropout(const PatchSpec& patch, double qubit_rate, double coupler_rate,
                             uint64_t seed) {
    if (qubit_rate < 0 || qubit_rate > 1 || coupler_rate < 0 || coupler_rate > 1)
        throw std::invalid_argument("dropout rates must lie in [0, 1]");
    DropoutConfig cfg;
    cfg.d = patch.d;
    cfg.seed = seed;
    SplitMix64 rng(seed);
    for (Coord q : patch.all_qubits)
        if (rng.next_unit() < qubit_rate) cfg.broken_qubits.insert(q);
    for (const Coupler& c : patch.couplers)
        if (rng.next_unit() < coupler_rate) cfg.broken_couplers.insert(c);
    return cfg;
}

DropoutConfig legacy_convert(const PatchSpec& patch, const DropoutConfig& cfg) {
    DropoutConfig out = cfg;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Coord q : patch.all_qubits) {
            if (out.qubit_broken(q)) continue;
            // Collect broken incident coupler directions.
            std::vector<Coord> dirs;
            for (Coord dir : kDiagonals) {
                Coupler c(q, q + dir);
                if (patch.has_coupler(c) && !out.coupler_usable(c)) dirs.push_back(dir);
            }
            bool perpendicular = false;
            for (size_t i = 0; i < dirs.size() && !perpendicular; i++)
                for (size_t j = i + 1; j < dirs.size(); j++)
                    if (dirs[i].x * dirs[j].x + dirs[i].y * dirs[j].y == 0) {
                        perpendicular = true;
                        break;
                    }
            if (perpendicular) {
                out.broken_qubits.insert(q);
                changed = true;
            }
        }
    }
    return out;
}

std::vector<CnotLayer> canonical_layers(const PatchSpec& patch) {
    // Z ancillas: data -> ancilla, order NW, SW, NE, SE.
    static constexpr Coord z_order[4] = {{-1, 1}, {-1, -1}, {1, 1}, {1, -1}};
    // X ancillas: ancilla -> data, order NW, NE, SW, SE.
    static constexpr Coord x_order[4] = {{-1, 1}, {1, 1}, {-1, -1}, {1, -1}};
    std::vector<CnotLayer> layers(4);
    for (int k = 0; k < 4; k++) {
        for (Coord m : patch.measure_qubits) {
            if (PatchSpec::measure_basis(m) == Basis::Z) {
                Coord q = m + z_order[k];
                if (patch.has_qubit(q)) layers[k].emplace_back(q, m);
            } else {
                Coord q = m + x_order[k];
                if (patch.has_qubit(q)) layers[k].emplace_back(m, q);
            }
        }
        std::sort(layers[k].begin(), layers[k].end());
    }
    return layers;
}

}  // namespace luci
