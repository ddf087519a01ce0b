#include <functional>

#include "doctest.h"
#include "luci/heuristic.h"
#include "luci/solver.h"

using namespace luci;

namespace {

DropoutConfig empty_cfg(int d) {
    DropoutConfig cfg;
    cfg.d = d;
    return cfg;
}

struct Instance {
    GaugeStructure gs;
    ShapeCatalog cat;
    Diagram def;
    IlpModel model;
};

Instance make_instance(int d, const DropoutConfig& cfg, int rounds = 4,
                       Objective obj = Objective::full()) {
    Instance inst;
    inst.gs = build_gauge_structure(build_patch(d), cfg);
    inst.cat = build_catalog(inst.gs);
    inst.def = default_diagram(inst.gs, inst.cat);
    inst.model = build_model(inst.gs, inst.cat, rounds, obj);
    return inst;
}

// Exhaustive optimum over all cell assignments; oracle for tiny instances.
int64_t exhaustive_optimum(const Instance& inst) {
    int T = inst.model.rounds;
    size_t n = inst.gs.ops.size();
    std::vector<std::pair<int, int>> cells;
    for (size_t i = 0; i < n; i++)
        for (int t = 0; t < T; t++) cells.push_back({static_cast<int>(i), t});
    int64_t best = INT64_MAX;
    Diagram diag;
    diag.d = inst.gs.patch.d;
    diag.rounds = T;
    diag.boards.assign(static_cast<size_t>(T), {});
    std::function<void(size_t)> rec = [&](size_t k) {
        if (k == cells.size()) {
            if (!validate_diagram(diag, inst.gs, inst.cat).empty()) return;
            auto terms = objective_terms(diag, inst.gs, inst.cat, inst.model.cyclic);
            best = std::min(best, fold_objective(terms, inst.model.objective));
            return;
        }
        auto [op, t] = cells[k];
        for (int p = -1; p < inst.cat.count(op); p++) {
            if (p >= 0) diag.boards[static_cast<size_t>(t)].emplace(op, p);
            rec(k + 1);
            if (p >= 0) diag.boards[static_cast<size_t>(t)].erase(op);
        }
    };
    rec(0);
    return best;
}

}  // namespace

TEST_CASE("canonical no-dropout model solves to optimal and stays canonical") {
    auto inst = make_instance(3, empty_cfg(3));
    SolveParams params;
    params.time_limit_s = 60;
    params.hints = hint_from_diagram(inst.model, inst.def);
    auto sol = solve(inst.model, inst.gs, inst.cat, params);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == -2 * static_cast<int64_t>(inst.gs.ops.size()));
    CHECK(sol.bound == sol.objective);
    auto diag = decode_assignment(inst.model, sol.assignment, inst.gs);
    bool canonical = false;
    for (int mirror : {0, 1})
        for (int shift : {0, 1})
            canonical =
                canonical || diag.boards == canonical_diagram(inst.gs, inst.cat, mirror, shift).boards;
    CHECK(canonical);
}

TEST_CASE("warm start floor: zero budget returns the hint") {
    auto inst = make_instance(5, empty_cfg(5));
    SolveParams params;
    params.time_limit_s = 0.0;
    params.work_limit = 0;
    params.hints = hint_from_diagram(inst.model, inst.def);
    auto sol = solve(inst.model, inst.gs, inst.cat, params);
    CHECK(sol.assignment == *params.hints);
    CHECK(sol.objective == assignment_objective(inst.model, *params.hints));
}

TEST_CASE("solver optimum equals exhaustive enumeration on tiny instances") {
    // Keep only a 2x2 block of the d=3 patch alive: a handful of operators,
    // at most 12 primary variables... build several tiny instances by heavy
    // breakage and compare against brute force.
    auto patch = build_patch(3);
    int tested = 0;
    for (uint64_t seed = 50; tested < 4 && seed < 200; seed++) {
        auto cfg = sample_dropout(patch, 0.25, 0.25, seed);
        Instance inst;
        try {
            inst = make_instance(3, cfg);
        } catch (const std::exception&) {
            continue;
        }
        size_t cells = 0;
        for (const auto& op : inst.gs.ops)
            cells += static_cast<size_t>(inst.cat.count(op.id));
        if (inst.gs.ops.size() > 3 || cells * 4 > 20) continue;  // keep brute force tractable
        SolveParams params;
        params.time_limit_s = 30;
        params.hints = hint_from_diagram(inst.model, inst.def);
        auto sol = solve(inst.model, inst.gs, inst.cat, params);
        CHECK(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == exhaustive_optimum(inst));
        tested++;
    }
    CHECK(tested == 4);
}

TEST_CASE("optimized objective never exceeds the default objective") {
    auto patch = build_patch(5);
    int tested = 0;
    for (uint64_t seed = 60; tested < 6 && seed < 120; seed++) {
        GaugeStructure gs;
        try {
            gs = build_gauge_structure(patch, sample_dropout(patch, 0.02, 0.02, seed));
        } catch (const PatchDestroyedError&) {
            continue;
        }
        auto cat = build_catalog(gs);
        auto def = default_diagram(gs, cat);
        auto model = build_model(gs, cat, 4, Objective::full());
        SolveParams params;
        params.time_limit_s = 5;
        params.work_limit = 2000000;
        params.hints = hint_from_diagram(model, def);
        auto sol = solve(model, gs, cat, params);
        int64_t def_obj = assignment_objective(model, *params.hints);
        CHECK(sol.objective <= def_obj);
        // The decoded diagram stays valid.
        auto diag = decode_assignment(model, sol.assignment, gs);
        CHECK(validate_diagram(diag, gs, cat).empty());
        tested++;
    }
    CHECK(tested == 6);
}

TEST_CASE("trace is monotone and deterministic under a work budget") {
    auto patch = build_patch(5);
    auto cfg = sample_dropout(patch, 0.02, 0.02, 77);
    auto run = [&]() {
        auto gs = build_gauge_structure(patch, cfg);
        auto cat = build_catalog(gs);
        auto def = default_diagram(gs, cat);
        auto model = build_model(gs, cat, 4, Objective::full());
        SolveParams params;
        params.time_limit_s = 3600;  // the deterministic budget is the binding limit
        params.work_limit = 500000;
        params.seed = 5;
        params.emit_trace = true;
        params.hints = hint_from_diagram(model, def);
        return solve(model, gs, cat, params);
    };
    auto a = run();
    auto b = run();
    CHECK(a.objective == b.objective);
    CHECK(a.assignment == b.assignment);
    CHECK(a.trace.size() == b.trace.size());
    for (size_t k = 0; k < a.trace.size(); k++) {
        CHECK(a.trace[k].incumbent == b.trace[k].incumbent);
        CHECK(a.trace[k].bound == b.trace[k].bound);
    }
    for (size_t k = 1; k < a.trace.size(); k++) {
        CHECK(a.trace[k].incumbent <= a.trace[k - 1].incumbent);
        CHECK(a.trace[k].bound >= a.trace[k - 1].bound);
    }
}

TEST_CASE("two-round feasibility holds without dropout") {
    auto gs = build_gauge_structure(build_patch(3), empty_cfg(3));
    auto cat = build_catalog(gs);
    auto model = build_model(gs, cat, 2, Objective::full());
    SolveParams params;
    auto sol = feasibility(model, gs, cat, params);
    CHECK(sol.status == SolveStatus::Feasible);
    auto diag = decode_assignment(model, sol.assignment, gs);
    CHECK(validate_diagram(diag, gs, cat).empty());
}

TEST_CASE("two adjacent collinear broken couplers are three-round infeasible") {
    auto patch = build_patch(5);
    DropoutConfig cfg = empty_cfg(5);
    Coord q{4, 4};
    cfg.broken_couplers.insert(Coupler(q, q + Coord{1, 1}));
    cfg.broken_couplers.insert(Coupler(q + Coord{1, 1}, q + Coord{2, 2}));
    auto gs = build_gauge_structure(patch, cfg);
    auto cat = build_catalog(gs);
    auto model3 = build_model(gs, cat, 3, Objective::full());
    SolveParams params;
    auto sol3 = feasibility(model3, gs, cat, params);
    CHECK(sol3.status == SolveStatus::Infeasible);
    CHECK(!sol3.infeasible_witness.empty());
    auto model4 = build_model(gs, cat, 4, Objective::full());
    auto sol4 = feasibility(model4, gs, cat, params);
    CHECK(sol4.status == SolveStatus::Feasible);
}

TEST_CASE("feasibility answers are consistent with validate_diagram") {
    auto patch = build_patch(5);
    int tested = 0;
    for (uint64_t seed = 130; tested < 8 && seed < 200; seed++) {
        GaugeStructure gs;
        try {
            gs = build_gauge_structure(patch, sample_dropout(patch, 0.03, 0.03, seed));
        } catch (const PatchDestroyedError&) {
            continue;
        }
        auto cat = build_catalog(gs);
        auto model = build_model(gs, cat, 3, Objective::full());
        SolveParams params;
        auto sol = feasibility(model, gs, cat, params);
        if (sol.status == SolveStatus::Feasible) {
            auto diag = decode_assignment(model, sol.assignment, gs);
            CHECK(validate_diagram(diag, gs, cat).empty());
        }
        tested++;
    }
    CHECK(tested == 8);
}
