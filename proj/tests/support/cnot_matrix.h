#pragma once

#include <algorithm>
#include <vector>

#include "luci/shapes.h"

namespace luci::testsupport {

// F2 transition-matrix oracle for CNOT circuits, independent of the support
// propagation used in production code. A CNOT circuit acts on computational
// basis states as x -> A x; conjugation then sends X_s to X_{A s} and Z_r to
// Z_{A^{-T} r}, so "the shape measures its operator" becomes a linear check:
//   X-type: A s == e_root;  Z-type: r == A^T e_root (row `root` of A).
struct CnotMatrixOracle {
    std::vector<Coord> qubits;              // sorted index set
    std::vector<std::vector<uint8_t>> a;    // A over F2

    explicit CnotMatrixOracle(std::vector<Coord> qs) : qubits(std::move(qs)) {
        std::sort(qubits.begin(), qubits.end());
        size_t n = qubits.size();
        a.assign(n, std::vector<uint8_t>(n, 0));
        for (size_t i = 0; i < n; i++) a[i][i] = 1;
    }
    size_t index(Coord q) const {
        return static_cast<size_t>(std::lower_bound(qubits.begin(), qubits.end(), q) -
                                   qubits.begin());
    }
    void apply(const CnotLayer& layer) {
        for (auto [c, t] : layer) {
            size_t ci = index(c), ti = index(t);
            for (size_t j = 0; j < qubits.size(); j++) a[ti][j] ^= a[ci][j];
        }
    }
    bool z_lands_on(const Support& op, Coord root) const {
        // r must equal row `root` of A.
        size_t ri = index(root);
        for (size_t j = 0; j < qubits.size(); j++) {
            bool want = a[ri][j] != 0;
            bool have = std::binary_search(op.begin(), op.end(), qubits[j]);
            if (want != have) return false;
        }
        return true;
    }
    bool x_lands_on(const Support& op, Coord root) const {
        size_t ri = index(root);
        for (size_t i = 0; i < qubits.size(); i++) {
            bool bit = false;
            for (size_t j = 0; j < qubits.size(); j++)
                if (a[i][j] && std::binary_search(op.begin(), op.end(), qubits[j])) bit = !bit;
            if (bit != (i == ri)) return false;
        }
        return true;
    }
    bool lands_on(const Support& op, Basis b, Coord root) const {
        return b == Basis::Z ? z_lands_on(op, root) : x_lands_on(op, root);
    }
};

}  // namespace luci::testsupport
