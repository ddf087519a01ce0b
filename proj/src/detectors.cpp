#include "luci/detectors.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "luci/gf2.h"

namespace luci {

namespace {

// Stabilizer tableau with symbolic measurement phases: each row's sign is a
// GF(2) combination of measurement outcome symbols plus a constant bit.
struct SymbolicTableau {
    size_t n;
    size_t nsym;
    // Rows 0..n-1 destabilizers, n..2n-1 stabilizers.
    std::vector<BitVec> x, z;
    std::vector<int> rphase;       // i-power mod 4 (constant part)
    std::vector<BitVec> rsym;      // symbol combination per row
    BitVec sx, sz;                 // scratch row
    int sphase = 0;
    BitVec ssym;

    SymbolicTableau(size_t nq, size_t nsymbols) : n(nq), nsym(nsymbols) {
        x.assign(2 * n, BitVec(n));
        z.assign(2 * n, BitVec(n));
        rphase.assign(2 * n, 0);
        rsym.assign(2 * n, BitVec(nsym));
        for (size_t i = 0; i < n; i++) {
            x[i].set(i);          // destabilizer X_i
            z[n + i].set(i);      // stabilizer Z_i
        }
        sx = BitVec(n);
        sz = BitVec(n);
        ssym = BitVec(nsym);
    }

    // Pauli product phase bookkeeping (Aaronson-Gottesman g function).
    static int g(int x1, int z1, int x2, int z2) {
        if (!x1 && !z1) return 0;
        if (x1 && z1) return z2 - x2;
        if (x1 && !z1) return z2 * (2 * x2 - 1);
        return x2 * (1 - 2 * z2);
    }
    // row h *= row i
    void rowsum(size_t h, size_t i) {
        int acc = rphase[h] + rphase[i];
        for (size_t q = 0; q < n; q++)
            acc += g(x[i].get(q), z[i].get(q), x[h].get(q), z[h].get(q));
        rphase[h] = ((acc % 4) + 4) % 4;
        x[h] ^= x[i];
        z[h] ^= z[i];
        rsym[h] ^= rsym[i];
    }
    void rowsum_scratch(size_t i) {
        int acc = sphase + rphase[i];
        for (size_t q = 0; q < n; q++)
            acc += g(x[i].get(q), z[i].get(q), sx.get(q), sz.get(q));
        sphase = ((acc % 4) + 4) % 4;
        sx ^= x[i];
        sz ^= z[i];
        ssym ^= rsym[i];
    }

    void cnot(size_t c, size_t t) {
        for (size_t i = 0; i < 2 * n; i++) {
            int xi_c = x[i].get(c), zi_t = z[i].get(t);
            if (xi_c && zi_t && (x[i].get(t) == z[i].get(c)))
                rphase[i] = (rphase[i] + 2) % 4;
            if (xi_c) x[i].flip(t);
            if (zi_t) z[i].flip(c);
        }
    }
    void hadamard(size_t q) {
        for (size_t i = 0; i < 2 * n; i++) {
            int xi = x[i].get(q), zi = z[i].get(q);
            if (xi && zi) rphase[i] = (rphase[i] + 2) % 4;
            x[i].set(q, zi);
            z[i].set(q, xi);
        }
    }

    // Measure Z_q. When deterministic, out_sym/out_const carry the outcome's
    // symbol combination; when random, the outcome becomes symbol `sym` (or is
    // forgotten when sym == SIZE_MAX, as in a reset).
    struct MeasureResult {
        bool deterministic;
        BitVec sym;
        int constant;
    };
    MeasureResult measure_z(size_t q, size_t sym) {
        size_t p = SIZE_MAX;
        for (size_t i = n; i < 2 * n; i++)
            if (x[i].get(q)) {
                p = i;
                break;
            }
        if (p != SIZE_MAX) {
            for (size_t i = 0; i < 2 * n; i++)
                if (i != p && x[i].get(q)) rowsum(i, p);
            // Old stabilizer becomes the destabilizer.
            x[p - n] = x[p];
            z[p - n] = z[p];
            rphase[p - n] = rphase[p];
            rsym[p - n] = rsym[p];
            x[p] = BitVec(n);
            z[p] = BitVec(n);
            z[p].set(q);
            rphase[p] = 0;
            rsym[p] = BitVec(nsym);
            if (sym != SIZE_MAX) rsym[p].set(sym);
            return {false, BitVec(nsym), 0};
        }
        // Deterministic: accumulate stabilizer rows flagged by destabilizers.
        sx = BitVec(n);
        sz = BitVec(n);
        sphase = 0;
        ssym = BitVec(nsym);
        for (size_t i = 0; i < n; i++)
            if (x[i].get(q)) rowsum_scratch(i + n);
        if (sphase % 2 != 0) throw std::logic_error("non-real measurement phase");
        return {true, ssym, (sphase / 2) % 2};
    }

    // Project qubit q to the +1 eigenstate of Z_q (or X_q via conjugation).
    void reset_z(size_t q) {
        auto res = measure_z(q, SIZE_MAX);
        // Random case: the fresh stabilizer row is already +1 Z_q with no
        // symbols, which is exactly the reset state.
        if (!res.deterministic) return;
        // Deterministic: conditionally flip rows anticommuting with X_q by the
        // outcome combination (classically controlled correction).
        if (!res.sym.any() && res.constant == 0) return;
        for (size_t i = 0; i < 2 * n; i++) {
            if (!z[i].get(q)) continue;
            rsym[i] ^= res.sym;
            if (res.constant) rphase[i] = (rphase[i] + 2) % 4;
        }
    }
};

}  // namespace

CircuitAnalysis analyze_circuit(const Circuit& circ, const GaugeStructure& gs, bool with_volumes,
                                bool with_observable) {
    size_t n = circ.qubits.size();
    size_t nrec = circ.records.size();
    SymbolicTableau tab(n, nrec);
    CircuitAnalysis out;

    // Logical tracking for the observable: a basis-`memory` logical of the
    // surviving code, expressed at the first mid-cycle point, corrected so its
    // pullback to the initial reset layer is deterministic.
    BitVec lx(n), lz(n);
    bool track_logical = with_observable;
    if (track_logical) {
        // Representative from the GF(2) structure: commutes with every
        // surviving operator, outside the same-basis span.
        Basis basis = circ.memory;
        std::vector<BitVec> checks;
        Gf2Basis trivial(n);
        std::vector<BitVec> same_rows;
        for (const auto& op : gs.ops) {
            BitVec v(n);
            for (Coord q : op.support) {
                int k = circ.qubit_index(q);
                if (k >= 0) v.set(static_cast<size_t>(k));
            }
            if (op.basis == basis) {
                trivial.insert(v);
                same_rows.push_back(v);
            } else {
                checks.push_back(v);
            }
        }
        // Find a kernel vector outside `trivial` by RREF over the checks.
        std::vector<BitVec> mat = checks;  // rows over qubits
        std::vector<size_t> pivot_col;
        size_t rr = 0;
        for (size_t c = 0; c < n && rr < mat.size(); c++) {
            size_t pr = SIZE_MAX;
            for (size_t i = rr; i < mat.size(); i++)
                if (mat[i].get(c)) {
                    pr = i;
                    break;
                }
            if (pr == SIZE_MAX) continue;
            std::swap(mat[rr], mat[pr]);
            for (size_t i = 0; i < mat.size(); i++)
                if (i != rr && mat[i].get(c)) mat[i] ^= mat[rr];
            pivot_col.push_back(c);
            rr++;
        }
        std::vector<bool> is_pivot(n, false);
        for (size_t c : pivot_col) is_pivot[c] = true;
        BitVec logical(n);
        bool found = false;
        for (size_t fc = 0; fc < n && !found; fc++) {
            if (is_pivot[fc]) continue;
            BitVec v(n);
            v.set(fc);
            for (size_t k = 0; k < pivot_col.size(); k++)
                if (mat[k].get(fc)) v.set(pivot_col[k]);
            if (!trivial.contains(v)) {
                logical = v;
                found = true;
            }
        }
        if (!found) throw std::logic_error("no logical representative found");
        if (basis == Basis::Z)
            lz = logical;
        else
            lx = logical;

        // Pull back through the entry layers (reset, grow2, grow1) and fix any
        // support on oppositely-reset qubits by multiplying same-basis
        // operators (solved over GF(2)).
        auto pullback = [&](const BitVec& v) {
            // Entry CNOT layers are layers 1 and 2; pulling a basis-`basis`
            // support back through a CNOT layer is the same toggle rule.
            BitVec s = v;
            for (size_t li : {static_cast<size_t>(2), static_cast<size_t>(1)}) {
                const Layer& l = circ.layers[li];
                std::vector<size_t> toggles;
                for (auto [c, t] : l.cnots) {
                    if (basis == Basis::Z) {
                        if (s.get(static_cast<size_t>(t))) toggles.push_back(static_cast<size_t>(c));
                    } else {
                        if (s.get(static_cast<size_t>(c))) toggles.push_back(static_cast<size_t>(t));
                    }
                }
                for (size_t q : toggles) s.flip(q);
            }
            return s;
        };
        // Qubits reset in the opposite basis at entry.
        const Layer& entry = circ.layers[0];
        std::vector<size_t> bad_qubits;
        std::vector<bool> is_bad(n, false);
        for (size_t k = 0; k < entry.targets.size(); k++)
            if (entry.bases[k] != basis) {
                bad_qubits.push_back(static_cast<size_t>(entry.targets[k]));
                is_bad[static_cast<size_t>(entry.targets[k])] = true;
            }
        auto bad_signature = [&](const BitVec& v) {
            BitVec sig(bad_qubits.size());
            for (size_t k = 0; k < bad_qubits.size(); k++)
                if (v.get(bad_qubits[k])) sig.set(k);
            return sig;
        };
        BitVec target = bad_signature(pullback(logical));
        if (target.any()) {
            // Solve sum_i x_i * sig(pullback(row_i)) = target.
            std::vector<BitVec> sigs;
            for (const auto& row : same_rows) sigs.push_back(bad_signature(pullback(row)));
            // Gaussian solve with combination tracking.
            size_t m = sigs.size();
            std::vector<BitVec> combo(m, BitVec(m));
            for (size_t i = 0; i < m; i++) combo[i].set(i);
            BitVec tgt = target;
            BitVec tcombo(m);
            size_t rr2 = 0;
            for (size_t c = 0; c < bad_qubits.size() && rr2 < m; c++) {
                size_t pr = SIZE_MAX;
                for (size_t i = rr2; i < m; i++)
                    if (sigs[i].get(c)) {
                        pr = i;
                        break;
                    }
                if (pr == SIZE_MAX) continue;
                std::swap(sigs[rr2], sigs[pr]);
                std::swap(combo[rr2], combo[pr]);
                for (size_t i = 0; i < m; i++)
                    if (i != rr2 && sigs[i].get(c)) {
                        sigs[i] ^= sigs[rr2];
                        combo[i] ^= combo[rr2];
                    }
                if (tgt.get(c)) {
                    tgt ^= sigs[rr2];
                    tcombo ^= combo[rr2];
                }
                rr2++;
            }
            if (tgt.any())
                throw std::logic_error("memory observable cannot be made deterministic");
            for (size_t i = 0; i < m; i++)
                if (tcombo.get(i)) logical ^= same_rows[i];
            if (basis == Basis::Z)
                lz = logical;
            else
                lx = logical;
        }
        // The logical is stated at the first mid-cycle point; rewind it to the
        // very start of the circuit so forward conjugation is uniform.
        BitVec l0 = pullback(logical);
        if (basis == Basis::Z) {
            lz = l0;
            lx = BitVec(n);
        } else {
            lx = l0;
            lz = BitVec(n);
        }
    }

    // Forward pass.
    size_t rec = 0;
    for (size_t li = 0; li < circ.layers.size(); li++) {
        const Layer& l = circ.layers[li];
        switch (l.kind) {
            case LayerKind::Cnot:
                for (auto [c, t] : l.cnots) {
                    tab.cnot(static_cast<size_t>(c), static_cast<size_t>(t));
                    if (track_logical) {
                        if (lx.get(static_cast<size_t>(c))) lx.flip(static_cast<size_t>(t));
                        if (lz.get(static_cast<size_t>(t))) lz.flip(static_cast<size_t>(c));
                    }
                }
                break;
            case LayerKind::Measure:
                for (size_t k = 0; k < l.targets.size(); k++) {
                    size_t q = static_cast<size_t>(l.targets[k]);
                    bool hx = l.bases[k] == Basis::X;
                    if (hx) tab.hadamard(q);
                    auto res = tab.measure_z(q, rec);
                    if (hx) tab.hadamard(q);
                    if (res.deterministic) {
                        Detector det;
                        det.id = static_cast<int>(out.detectors.size());
                        for (size_t s = 0; s < nrec; s++)
                            if (res.sym.get(s)) det.meas.push_back(static_cast<int>(s));
                        det.meas.push_back(static_cast<int>(rec));
                        std::sort(det.meas.begin(), det.meas.end());
                        det.anchor_board = circ.records[rec].board;
                        int bset = -1;
                        for (int m : det.meas) {
                            int bb = circ.records[static_cast<size_t>(m)].basis == Basis::X ? 0 : 1;
                            if (bset < 0)
                                bset = bb;
                            else if (bset != bb)
                                bset = 2;
                        }
                        det.basis = bset;
                        out.detectors.push_back(std::move(det));
                    }
                    if (track_logical) {
                        bool comp = hx ? lx.get(q) && !lz.get(q) : lz.get(q) && !lx.get(q);
                        bool anti = hx ? lz.get(q) : lx.get(q);
                        if (anti)
                            throw std::logic_error("logical anticommutes with a measurement");
                        if (comp) {
                            (hx ? lx : lz).flip(q);
                            out.observable.push_back(static_cast<int>(rec));
                        }
                    }
                    rec++;
                }
                break;
            case LayerKind::Reset:
                for (size_t k = 0; k < l.targets.size(); k++) {
                    size_t q = static_cast<size_t>(l.targets[k]);
                    bool hx = l.bases[k] == Basis::X;
                    if (track_logical) {
                        // A same-basis component is pinned to +1 and rides on;
                        // an opposite-basis one would be destroyed.
                        bool opp = hx ? lz.get(q) : lx.get(q);
                        if (opp) throw std::logic_error("logical destroyed by a reset");
                    }
                    if (hx) tab.hadamard(q);
                    tab.reset_z(q);
                    if (hx) tab.hadamard(q);
                }
                break;
        }
    }
    if (track_logical && (lx.any() || lz.any()))
        throw std::logic_error("logical not fully absorbed by measurements");
    std::sort(out.observable.begin(), out.observable.end());

    if (with_volumes) {
        std::vector<size_t> rec_base(circ.layers.size(), 0);
        {
            size_t r = 0;
            for (size_t li = 0; li < circ.layers.size(); li++) {
                rec_base[li] = r;
                if (circ.layers[li].kind == LayerKind::Measure)
                    r += circ.layers[li].targets.size();
            }
        }
        // Backward accumulation per detector: at each slot the detector is
        // sensitive to the two Paulis anticommuting with its pulled-back
        // product on each support qubit; walking from the end, slot li-1 is
        // recorded right after layer li is processed.
        for (auto& det : out.detectors) {
            BitVec ax(n), az(n);
            std::set<int> in_det(det.meas.begin(), det.meas.end());
            size_t volume = 0;
            Support sup;
            for (size_t li = circ.layers.size(); li-- > 0;) {
                const Layer& l = circ.layers[li];
                if (l.kind == LayerKind::Measure) {
                    for (size_t k = 0; k < l.targets.size(); k++) {
                        size_t r = rec_base[li] + k;
                        if (!in_det.count(static_cast<int>(r))) continue;
                        size_t q = static_cast<size_t>(l.targets[k]);
                        if (l.bases[k] == Basis::X)
                            ax.flip(q);
                        else
                            az.flip(q);
                    }
                } else if (l.kind == LayerKind::Reset) {
                    for (int t : l.targets) {
                        ax.set(static_cast<size_t>(t), false);
                        az.set(static_cast<size_t>(t), false);
                    }
                } else {
                    for (auto [c, t] : l.cnots) {
                        if (ax.get(static_cast<size_t>(c))) ax.flip(static_cast<size_t>(t));
                        if (az.get(static_cast<size_t>(t))) az.flip(static_cast<size_t>(c));
                    }
                }
                if (li == 0) break;
                // Slot li-1 sensitivity.
                for (size_t q = 0; q < n; q++) {
                    if (ax.get(q) || az.get(q)) {
                        volume += 2;
                        sup.push_back(circ.qubits[q]);
                    }
                }
            }
            std::sort(sup.begin(), sup.end());
            sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
            det.volume = volume;
            det.spatial_support = std::move(sup);
        }
    }
    return out;
}

std::vector<int> flipped_detectors(const Circuit& circ, const CircuitAnalysis& ana, int slot,
                                   int qubit, int pauli) {
    size_t n = circ.qubits.size();
    BitVec ex(n), ez(n);
    if (pauli == 0 || pauli == 1) ex.set(static_cast<size_t>(qubit));
    if (pauli == 2 || pauli == 1) ez.set(static_cast<size_t>(qubit));
    std::vector<bool> flips(circ.records.size(), false);
    size_t rec = 0;
    for (size_t li = 0; li < circ.layers.size(); li++) {
        const Layer& l = circ.layers[li];
        if (static_cast<int>(li) <= slot) {
            if (l.kind == LayerKind::Measure) rec += l.targets.size();
            continue;
        }
        switch (l.kind) {
            case LayerKind::Cnot:
                for (auto [c, t] : l.cnots) {
                    if (ex.get(static_cast<size_t>(c))) ex.flip(static_cast<size_t>(t));
                    if (ez.get(static_cast<size_t>(t))) ez.flip(static_cast<size_t>(c));
                }
                break;
            case LayerKind::Measure:
                for (size_t k = 0; k < l.targets.size(); k++) {
                    size_t q = static_cast<size_t>(l.targets[k]);
                    bool anti = l.bases[k] == Basis::X ? ez.get(q) : ex.get(q);
                    if (anti) flips[rec] = true;
                    rec++;
                }
                break;
            case LayerKind::Reset:
                for (int t : l.targets) {
                    ex.set(static_cast<size_t>(t), false);
                    ez.set(static_cast<size_t>(t), false);
                }
                break;
        }
    }
    std::vector<int> out;
    for (const auto& det : ana.detectors) {
        int parity = 0;
        for (int m : det.meas) parity ^= flips[static_cast<size_t>(m)] ? 1 : 0;
        if (parity) out.push_back(det.id);
    }
    return out;
}

VolumeStats volume_stats(const std::vector<Detector>& dets) {
    if (dets.empty()) throw std::invalid_argument("no detectors");
    VolumeStats out;
    double total = 0;
    std::vector<size_t> vols;
    for (const auto& d : dets) {
        total += static_cast<double>(d.volume);
        vols.push_back(d.volume);
    }
    out.mean = total / static_cast<double>(dets.size());
    std::sort(vols.begin(), vols.end());
    std::vector<size_t> uniq = vols;
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (size_t v : uniq) {
        size_t count = vols.end() - std::lower_bound(vols.begin(), vols.end(), v);
        out.reverse_cdf.push_back({v, count});
    }
    return out;
}

}  // namespace luci
