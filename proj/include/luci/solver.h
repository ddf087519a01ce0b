#pragma once

#include <optional>

#include "luci/ilp.h"

namespace luci {

struct SolveParams {
    double time_limit_s = 300.0;  // wall-clock deadline
    int64_t work_limit = -1;      // deterministic work units; -1 = unlimited
    uint64_t seed = 0;
    std::optional<Assignment> hints;
    bool emit_trace = false;
};

enum class SolveStatus : uint8_t { Optimal, Feasible, Infeasible, Unknown };

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        default: return "unknown";
    }
}

struct TracePoint {
    double elapsed_s = 0;
    int64_t work = 0;
    int64_t incumbent = 0;  // scaled objective
    int64_t bound = 0;      // scaled proven lower bound
};

struct Solution {
    Assignment assignment;
    int64_t objective = 0;  // scaled by model.objective.den
    int64_t bound = 0;
    SolveStatus status = SolveStatus::Unknown;
    std::vector<TracePoint> trace;
    std::vector<std::string> infeasible_witness;
    int64_t work_used = 0;
    double elapsed_s = 0;
};

// Anytime exact optimizer: warm start from hints, incumbent improvement by
// bounded branch-and-bound dives over operator neighborhoods, and a global
// capacity bound for the optimality certificate. Deterministic for a fixed
// (model, params) when the deadline is expressed in work units.
Solution solve(const IlpModel& model, const GaugeStructure& gs, const ShapeCatalog& cat,
               const SolveParams& params);

// SAT-style decision for reduced round counts, ignoring the objective.
Solution feasibility(const IlpModel& model, const GaugeStructure& gs, const ShapeCatalog& cat,
                     const SolveParams& params);

// Trace CSV: "elapsed_s,incumbent,bound" per line.
std::string trace_csv(const Solution& sol, const IlpModel& model);

}  // namespace luci
