#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "luci/diagram.h"

namespace luci {

enum class VarTag : uint8_t { Primary, AuxF, AuxOr, AuxAnd, AuxSlack };

struct BoolVar {
    int id = -1;
    VarTag tag = VarTag::Primary;
    std::string name;
    int64_t lb = 0, ub = 1;
    bool integer_general = false;  // alignment slacks are bounded integers
};

enum class Sense : uint8_t { LE, GE, EQ };

struct LinearConstraint {
    std::vector<std::pair<int, int64_t>> terms;
    Sense sense = Sense::LE;
    int64_t rhs = 0;
    // compat | measure-once | one-shape | superstab | lin-and | lin-or | align-slack
    const char* label = "";
};

// Minimize -m + alpha*s2 + beta*s3 + gamma*a + delta*b; coefficients are
// rationals over a common denominator so the solver stays in integers.
struct Objective {
    int64_t alpha = 6, beta = 5, gamma = 12, delta = 2;
    int64_t den = 1;
    enum class Mode : uint8_t { Full, MaxMeasurements } mode = Mode::Full;

    static Objective full() { return {}; }
    static Objective max_measurements() {
        Objective o;
        o.alpha = o.beta = o.gamma = o.delta = 0;
        o.mode = Mode::MaxMeasurements;
        return o;
    }
    // Parse decimal coefficients into a common-denominator form.
    static Objective from_doubles(double a, double b, double g, double d);
};

struct ObjectiveTerms {
    int64_t m = 0, s2 = 0, s3 = 0, a = 0, b = 0;
};

// How an auxiliary variable's value is induced by earlier variables.
struct AuxDef {
    enum class Kind : uint8_t { Or, And, OrOfNot, SlackEq } kind = Kind::Or;
    int var = -1;
    std::vector<int> inputs;  // SlackEq: stretchers..., then the OR guard
};

struct IlpModel {
    int rounds = 4;
    bool cyclic = true;
    Objective objective;
    std::vector<BoolVar> vars;
    std::vector<LinearConstraint> constraints;
    std::vector<int64_t> obj_coeff;  // scaled by objective.den
    int64_t obj_constant = 0;        // scaled constant (from the b term)
    std::vector<AuxDef> aux_defs;    // dependency order

    // Index maps.
    std::vector<std::vector<std::vector<int>>> v_index;  // [t][op][shape]
    std::vector<std::vector<int>> f_index;               // [t][op]
    size_t primary_count = 0;

    size_t var_count() const { return vars.size(); }
    size_t constraint_count() const { return constraints.size(); }
    std::string fingerprint;
};

IlpModel build_model(const GaugeStructure& gs, const ShapeCatalog& cat, int rounds,
                     const Objective& obj, bool cyclic = true);

// Evaluate the five objective terms on a concrete schedule.
ObjectiveTerms objective_terms(const Diagram& diag, const GaugeStructure& gs,
                               const ShapeCatalog& cat, bool cyclic = true);
// Scaled objective value of a term tuple.
int64_t fold_objective(const ObjectiveTerms& t, const Objective& obj);

using Assignment = std::vector<int64_t>;  // value per var id

// Full assignment (primaries plus induced auxiliaries) from a diagram;
// throws with the violated constraint's label if infeasible for the model.
Assignment hint_from_diagram(const IlpModel& model, const Diagram& diag);

// Diagram from the primary variables of an assignment.
Diagram decode_assignment(const IlpModel& model, const Assignment& x, const GaugeStructure& gs);

// Derive the induced auxiliary values from the primaries in-place.
void complete_assignment(const IlpModel& model, Assignment& x);

bool constraint_satisfied(const LinearConstraint& c, const Assignment& x);
// Returns nullptr when feasible, else the first violated constraint.
const LinearConstraint* first_violation(const IlpModel& model, const Assignment& x);
int64_t assignment_objective(const IlpModel& model, const Assignment& x);

// CPLEX-LP text interchange format.
std::string write_lp(const IlpModel& model);

}  // namespace luci
