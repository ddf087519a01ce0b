#include "luci/ops.h"

#include <algorithm>
#include <stdexcept>

namespace luci {

void support_toggle(Support& s, Coord q) {
    auto it = std::lower_bound(s.begin(), s.end(), q);
    if (it != s.end() && *it == q)
        s.erase(it);
    else
        s.insert(it, q);
}

bool support_contains(const Support& s, Coord q) {
    return std::binary_search(s.begin(), s.end(), q);
}

bool odd_overlap(const Support& a, const Support& b) {
    size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            i++;
        else if (b[j] < a[i])
            j++;
        else {
            n++;
            i++;
            j++;
        }
    }
    return n % 2 == 1;
}

void propagate(Support& s, Basis beta, const std::vector<CnotLayer>& layers) {
    for (const CnotLayer& layer : layers) {
        std::vector<Coord> toggles;
        for (auto [c, t] : layer) {
            if (beta == Basis::Z) {
                if (support_contains(s, t)) toggles.push_back(c);  // Z_t -> Z_c Z_t
            } else {
                if (support_contains(s, c)) toggles.push_back(t);  // X_c -> X_c X_t
            }
        }
        for (Coord q : toggles) support_toggle(s, q);
    }
}

MidCycleCode mid_cycle_operators(const PatchSpec& patch) {
    MidCycleCode code;
    code.patch = patch;
    auto layers = canonical_layers(patch);
    std::vector<CnotLayer> first_half = {layers[0], layers[1]};
    auto checks = patch.rotated_checks();

    for (const auto& check : checks) {
        Basis b = check.basis;
        // Phase A: image of the weight-five start operator (plaquette times
        // the ancilla's own single-qubit stabilizer).
        Support a = check.support;
        support_toggle(a, check.ancilla);
        propagate(a, b, first_half);
        // Phase B: image of the ancilla's single-qubit stabilizer.
        Support g = {check.ancilla};
        propagate(g, b, first_half);

        MidCycleOp opA{static_cast<int>(code.ops.size()), b, std::move(a), OpKind::Stabilizer, {}};
        code.ops.push_back(std::move(opA));
        code.op_ancilla.push_back(check.ancilla);
        code.op_phase.push_back(0);
        MidCycleOp opB{static_cast<int>(code.ops.size()), b, std::move(g), OpKind::Stabilizer, {}};
        code.ops.push_back(std::move(opB));
        code.op_ancilla.push_back(check.ancilla);
        code.op_phase.push_back(1);
    }
    for (const auto& op : code.ops)
        if (op.support.empty()) throw std::logic_error("empty mid-cycle operator");
    return code;
}

}  // namespace luci
