#include "luci/circuit.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace luci {

int Circuit::qubit_index(Coord q) const {
    auto it = std::lower_bound(qubits.begin(), qubits.end(), q);
    if (it == qubits.end() || *it != q) return -1;
    return static_cast<int>(it - qubits.begin());
}

Circuit compile_circuit(const Diagram& diag, const GaugeStructure& gs, const ShapeCatalog& cat,
                        int cycles, Basis memory) {
    if (cycles < 1) throw std::invalid_argument("cycle count must be positive");
    if (!validate_diagram(diag, gs, cat).empty())
        throw std::invalid_argument("cannot compile an invalid diagram");
    Circuit circ;
    circ.d = gs.patch.d;
    circ.rounds = diag.rounds;
    circ.cycles = cycles;
    circ.memory = memory;
    for (Coord q : gs.kept_region)
        if (gs.qubit_usable(q)) circ.qubits.push_back(q);
    std::sort(circ.qubits.begin(), circ.qubits.end());
    int T = diag.rounds;

    auto qi = [&](Coord q) {
        int k = circ.qubit_index(q);
        if (k < 0) throw std::logic_error("shape touches an unusable qubit");
        return k;
    };
    auto board_layers = [&](int db) {
        // Union of the board's shape CNOTs, per layer.
        std::array<std::vector<std::pair<int, int>>, 2> out;
        for (auto [op, p] : diag.boards[static_cast<size_t>(db)]) {
            const Shape& sh = cat.at(op, p);
            for (auto [c, t] : sh.layer1) out[0].push_back({qi(c), qi(t)});
            for (auto [c, t] : sh.layer2) out[1].push_back({qi(c), qi(t)});
        }
        for (auto& l : out) {
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
        }
        return out;
    };
    auto board_roots = [&](int db) {
        std::pair<std::vector<int>, std::vector<Basis>> out;
        for (auto [op, p] : diag.boards[static_cast<size_t>(db)]) {
            const Shape& sh = cat.at(op, p);
            out.first.push_back(qi(sh.root));
            out.second.push_back(sh.basis);
        }
        return out;
    };

    // Entry: reset everything, then re-grow the operators of the last board so
    // the first mid-cycle state matches the steady cycle.
    int last = T - 1;
    {
        Layer r;
        r.kind = LayerKind::Reset;
        std::map<int, Basis> basis_of;
        for (size_t k = 0; k < circ.qubits.size(); k++)
            basis_of[static_cast<int>(k)] = memory;
        auto roots = board_roots(last);
        for (size_t k = 0; k < roots.first.size(); k++)
            basis_of[roots.first[k]] = roots.second[k];
        for (auto [q, b] : basis_of) {
            r.targets.push_back(q);
            r.bases.push_back(b);
        }
        circ.layers.push_back(std::move(r));
        auto grow = board_layers(last);
        Layer g2;
        g2.kind = LayerKind::Cnot;
        g2.cnots = grow[1];
        circ.layers.push_back(std::move(g2));
        Layer g1;
        g1.kind = LayerKind::Cnot;
        g1.cnots = grow[0];
        circ.layers.push_back(std::move(g1));
    }

    int boards = cycles * T;
    for (int b = 0; b < boards; b++) {
        int db = b % T;
        auto shrink = board_layers(db);
        auto roots = board_roots(db);
        Layer l1;
        l1.kind = LayerKind::Cnot;
        l1.cnots = shrink[0];
        l1.board = b;
        circ.layers.push_back(std::move(l1));
        Layer l2;
        l2.kind = LayerKind::Cnot;
        l2.cnots = shrink[1];
        l2.board = b;
        circ.layers.push_back(std::move(l2));
        Layer m;
        m.kind = LayerKind::Measure;
        m.targets = roots.first;
        m.bases = roots.second;
        m.board = b;
        int layer_idx = static_cast<int>(circ.layers.size());
        // Records follow board assignment order (ascending op id).
        {
            size_t k = 0;
            for (auto [op, p] : diag.boards[static_cast<size_t>(db)]) {
                (void)p;
                circ.records.push_back({layer_idx, roots.first[k], roots.second[k], b, op});
                k++;
            }
        }
        circ.layers.push_back(std::move(m));
        Layer r;
        r.kind = LayerKind::Reset;
        r.targets = roots.first;
        r.bases = roots.second;
        r.board = b;
        circ.layers.push_back(std::move(r));
        if (b + 1 < boards) {
            Layer g2;
            g2.kind = LayerKind::Cnot;
            g2.cnots = shrink[1];
            g2.board = b;
            circ.layers.push_back(std::move(g2));
            Layer g1;
            g1.kind = LayerKind::Cnot;
            g1.cnots = shrink[0];
            g1.board = b;
            circ.layers.push_back(std::move(g1));
        }
    }
    // Terminal data measurement in the memory basis.
    Layer m;
    m.kind = LayerKind::Measure;
    int layer_idx = static_cast<int>(circ.layers.size());
    for (size_t k = 0; k < circ.qubits.size(); k++) {
        if (!PatchSpec::is_data_coord(circ.qubits[k])) continue;
        m.targets.push_back(static_cast<int>(k));
        m.bases.push_back(memory);
        circ.records.push_back({layer_idx, static_cast<int>(k), memory, boards, -1});
    }
    circ.layers.push_back(std::move(m));
    return circ;
}

GateCounts count_gates(const Circuit& circ) {
    GateCounts out;
    for (const auto& l : circ.layers) {
        out.cnots += l.cnots.size();
        if (l.kind == LayerKind::Measure) out.measures += l.targets.size();
        if (l.kind == LayerKind::Reset) out.resets += l.targets.size();
    }
    return out;
}

std::string circuit_text(const Circuit& circ, double noise_p, const CircuitAnnotations* ann) {
    std::ostringstream os;
    os << "# LUCI compiled circuit: d=" << circ.d << " T=" << circ.rounds
       << " cycles=" << circ.cycles << " memory=" << basis_char(circ.memory) << "\n";
    for (size_t k = 0; k < circ.qubits.size(); k++)
        os << "QUBIT_COORDS(" << circ.qubits[k].x << ", " << circ.qubits[k].y << ") " << k
           << "\n";
    double p = noise_p;
    size_t total_records = circ.records.size();
    for (const Layer& l : circ.layers) {
        switch (l.kind) {
            case LayerKind::Cnot: {
                if (!l.cnots.empty()) {
                    os << "CX";
                    for (auto [c, t] : l.cnots) os << " " << c << " " << t;
                    os << "\n";
                    if (p > 0) {
                        os << "DEPOLARIZE2(" << p << ")";
                        for (auto [c, t] : l.cnots) os << " " << c << " " << t;
                        os << "\n";
                    }
                }
                break;
            }
            case LayerKind::Measure: {
                if (p > 0) {
                    std::vector<bool> busy(circ.qubits.size(), false);
                    for (int t : l.targets) busy[static_cast<size_t>(t)] = true;
                    std::vector<int> idle;
                    for (size_t k = 0; k < circ.qubits.size(); k++)
                        if (!busy[k]) idle.push_back(static_cast<int>(k));
                    if (!idle.empty()) {
                        os << "DEPOLARIZE1(" << 2 * p << ")";
                        for (int t : idle) os << " " << t;
                        os << "\n";
                    }
                }
                // Emit in record order, grouping consecutive same-basis runs so
                // measurement record indices match the layer's target order.
                size_t k = 0;
                while (k < l.targets.size()) {
                    Basis b = l.bases[k];
                    size_t j = k;
                    while (j < l.targets.size() && l.bases[j] == b) j++;
                    os << (b == Basis::X ? "MX" : "M");
                    if (p > 0) os << "(" << 5 * p << ")";
                    for (size_t t = k; t < j; t++) os << " " << l.targets[t];
                    os << "\n";
                    k = j;
                }
                break;
            }
            case LayerKind::Reset: {
                std::vector<int> xs, zs;
                for (size_t k = 0; k < l.targets.size(); k++)
                    (l.bases[k] == Basis::X ? xs : zs).push_back(l.targets[k]);
                if (!zs.empty()) {
                    os << "R";
                    for (int t : zs) os << " " << t;
                    os << "\n";
                    if (p > 0) {
                        os << "X_ERROR(" << 2 * p << ")";
                        for (int t : zs) os << " " << t;
                        os << "\n";
                    }
                }
                if (!xs.empty()) {
                    os << "RX";
                    for (int t : xs) os << " " << t;
                    os << "\n";
                    if (p > 0) {
                        os << "Z_ERROR(" << 2 * p << ")";
                        for (int t : xs) os << " " << t;
                        os << "\n";
                    }
                }
                break;
            }
        }
        os << "TICK\n";
    }
    if (ann) {
        for (size_t k = 0; k < ann->detectors.size(); k++) {
            os << "DETECTOR";
            if (k < ann->detector_coords.size())
                os << "(" << ann->detector_coords[k].first << ", "
                   << ann->detector_coords[k].second << ")";
            for (int m : ann->detectors[k])
                os << " rec[" << static_cast<long>(m) - static_cast<long>(total_records) << "]";
            os << "\n";
        }
        os << "OBSERVABLE_INCLUDE(0)";
        for (int m : ann->observable)
            os << " rec[" << static_cast<long>(m) - static_cast<long>(total_records) << "]";
        os << "\n";
    }
    return os.str();
}

}  // namespace luci
