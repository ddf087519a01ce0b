#include "luci/ilp.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace luci {

Objective Objective::from_doubles(double a, double b, double g, double d) {
    // Decimal inputs with up to six places become exact rationals.
    int64_t den = 1;
    for (double x : {a, b, g, d}) {
        int64_t cur = 1;
        while (cur < 1000000 && std::abs(x * static_cast<double>(cur) -
                                         static_cast<double>(std::llround(
                                             x * static_cast<double>(cur)))) > 1e-9)
            cur *= 10;
        den = std::lcm(den, cur);
    }
    Objective o;
    o.den = den;
    o.alpha = std::llround(a * static_cast<double>(den));
    o.beta = std::llround(b * static_cast<double>(den));
    o.gamma = std::llround(g * static_cast<double>(den));
    o.delta = std::llround(d * static_cast<double>(den));
    if (o.alpha < 0 || o.beta < 0 || o.gamma < 0 || o.delta < 0)
        throw std::invalid_argument("objective coefficients must be non-negative");
    if (o.alpha == 0 && o.beta == 0 && o.gamma == 0 && o.delta == 0)
        o.mode = Mode::MaxMeasurements;
    return o;
}

namespace {

struct Builder {
    IlpModel model;

    int add_var(VarTag tag, std::string name, int64_t ub = 1, bool integer_general = false) {
        BoolVar v;
        v.id = static_cast<int>(model.vars.size());
        v.tag = tag;
        v.name = std::move(name);
        v.ub = ub;
        v.integer_general = integer_general;
        model.vars.push_back(std::move(v));
        model.obj_coeff.push_back(0);
        return model.vars.back().id;
    }
    void add_constraint(std::vector<std::pair<int, int64_t>> terms, Sense s, int64_t rhs,
                        const char* label) {
        model.constraints.push_back({std::move(terms), s, rhs, label});
    }
    // y = OR(xs): y >= x_k, y <= sum x_k.
    void define_or(int y, const std::vector<int>& xs) {
        for (int x : xs) add_constraint({{y, 1}, {x, -1}}, Sense::GE, 0, "lin-or");
        std::vector<std::pair<int, int64_t>> terms = {{y, 1}};
        for (int x : xs) terms.push_back({x, -1});
        add_constraint(std::move(terms), Sense::LE, 0, "lin-or");
        model.aux_defs.push_back({AuxDef::Kind::Or, y, xs});
    }
    // y = AND(xs): y <= x_k, y >= sum x_k - (n - 1).
    void define_and(int y, const std::vector<int>& xs) {
        for (int x : xs) add_constraint({{y, 1}, {x, -1}}, Sense::LE, 0, "lin-and");
        std::vector<std::pair<int, int64_t>> terms = {{y, 1}};
        for (int x : xs) terms.push_back({x, -1});
        add_constraint(std::move(terms), Sense::GE, 1 - static_cast<int64_t>(xs.size()),
                       "lin-and");
        model.aux_defs.push_back({AuxDef::Kind::And, y, xs});
    }
    // y = OR over negated inputs: y >= 1 - x_k, y <= n - sum x_k.
    void define_or_of_not(int y, const std::vector<int>& xs) {
        for (int x : xs) add_constraint({{y, 1}, {x, 1}}, Sense::GE, 1, "lin-or");
        std::vector<std::pair<int, int64_t>> terms = {{y, 1}};
        for (int x : xs) terms.push_back({x, 1});
        add_constraint(std::move(terms), Sense::LE, static_cast<int64_t>(xs.size()), "lin-or");
        model.aux_defs.push_back({AuxDef::Kind::OrOfNot, y, xs});
    }
};

std::string coord_tag(Coord q) { return std::to_string(q.x) + "_" + std::to_string(q.y); }

}  // namespace

IlpModel build_model(const GaugeStructure& gs, const ShapeCatalog& cat, int rounds,
                     const Objective& obj, bool cyclic) {
    if (rounds < 2) throw std::invalid_argument("round count must be at least 2");
    size_t n = gs.ops.size();
    for (size_t i = 0; i < n; i++)
        if (cat.count(static_cast<int>(i)) == 0)
            throw std::invalid_argument("operator with empty shape catalog");

    Builder b;
    IlpModel& model = b.model;
    model.rounds = rounds;
    model.cyclic = cyclic;
    model.objective = obj;
    int T = rounds;

    model.v_index.assign(static_cast<size_t>(T), {});
    for (int t = 0; t < T; t++) {
        model.v_index[static_cast<size_t>(t)].resize(n);
        for (size_t i = 0; i < n; i++)
            for (int p = 0; p < cat.count(static_cast<int>(i)); p++)
                model.v_index[static_cast<size_t>(t)][i].push_back(
                    b.add_var(VarTag::Primary, "v_" + std::to_string(t) + "_" +
                                                   std::to_string(i) + "_" + std::to_string(p)));
    }
    model.primary_count = model.vars.size();
    model.f_index.assign(static_cast<size_t>(T), std::vector<int>(n, -1));
    for (int t = 0; t < T; t++)
        for (size_t i = 0; i < n; i++)
            model.f_index[static_cast<size_t>(t)][i] =
                b.add_var(VarTag::AuxF, "f_" + std::to_string(t) + "_" + std::to_string(i));

    auto v_at = [&](int t, size_t i, int p) {
        return model.v_index[static_cast<size_t>(t)][i][static_cast<size_t>(p)];
    };
    auto f_at = [&](int t, size_t i) {
        return model.f_index[static_cast<size_t>((t % T + T) % T)][i];
    };

    for (int t = 0; t < T; t++)
        for (const auto& pk : cat.incompatible_pairs)
            b.add_constraint({{v_at(t, static_cast<size_t>(pk.i), pk.p), 1},
                              {v_at(t, static_cast<size_t>(pk.j), pk.q), 1}},
                             Sense::LE, 1, "compat");
    for (size_t i = 0; i < n; i++) {
        std::vector<std::pair<int, int64_t>> terms;
        for (int t = 0; t < T; t++)
            for (int p = 0; p < cat.count(static_cast<int>(i)); p++)
                terms.push_back({v_at(t, i, p), 1});
        b.add_constraint(std::move(terms), Sense::GE, 1, "measure-once");
    }
    for (int t = 0; t < T; t++)
        for (size_t i = 0; i < n; i++) {
            std::vector<std::pair<int, int64_t>> terms;
            for (int p = 0; p < cat.count(static_cast<int>(i)); p++)
                terms.push_back({v_at(t, i, p), 1});
            b.add_constraint(std::move(terms), Sense::LE, 1, "one-shape");
        }
    for (int t = 0; t < T; t++)
        for (size_t i = 0; i < n; i++) {
            std::vector<int> xs;
            for (int p = 0; p < cat.count(static_cast<int>(i)); p++) xs.push_back(v_at(t, i, p));
            b.define_or(f_at(t, i), xs);
        }

    // Skip windows.
    int nw2 = cyclic ? T : T - 1;
    int nw3 = cyclic ? T : std::max(0, T - 2);
    std::vector<std::vector<int>> or2(static_cast<size_t>(nw2), std::vector<int>(n, -1));
    std::vector<std::vector<int>> or3(static_cast<size_t>(nw3), std::vector<int>(n, -1));
    for (int t = 0; t < nw2; t++)
        for (size_t i = 0; i < n; i++) {
            int y = b.add_var(VarTag::AuxOr, "or2_" + std::to_string(t) + "_" + std::to_string(i));
            or2[static_cast<size_t>(t)][i] = y;
            b.define_or(y, {f_at(t, i), f_at(t + 1, i)});
        }
    for (int t = 0; t < nw3; t++)
        for (size_t i = 0; i < n; i++) {
            int y = b.add_var(VarTag::AuxOr, "or3_" + std::to_string(t) + "_" + std::to_string(i));
            or3[static_cast<size_t>(t)][i] = y;
            b.define_or(y, {f_at(t, i), f_at(t + 1, i), f_at(t + 2, i)});
        }
    std::vector<int> s2(n, -1), s3(n, -1);
    for (size_t i = 0; i < n; i++) {
        s2[i] = b.add_var(VarTag::AuxOr, "s2_" + std::to_string(i));
        std::vector<int> w2;
        for (int t = 0; t < nw2; t++) w2.push_back(or2[static_cast<size_t>(t)][i]);
        b.define_or_of_not(s2[i], w2);
        if (nw3 > 0) {
            s3[i] = b.add_var(VarTag::AuxOr, "s3_" + std::to_string(i));
            std::vector<int> w3;
            for (int t = 0; t < nw3; t++) w3.push_back(or3[static_cast<size_t>(t)][i]);
            b.define_or_of_not(s3[i], w3);
        }
    }
    // Gauge deterministic-measurement pairs.
    std::vector<std::vector<int>> gm(static_cast<size_t>(T), std::vector<int>(n, -1));
    for (int t = 0; t < T; t++) {
        if (!cyclic && t == 0) continue;
        for (size_t i = 0; i < n; i++) {
            if (gs.ops[i].kind != OpKind::Gauge) continue;
            int y = b.add_var(VarTag::AuxAnd, "gm_" + std::to_string(t) + "_" + std::to_string(i));
            gm[static_cast<size_t>(t)][i] = y;
            b.define_and(y, {f_at(t - 1, i), f_at(t, i)});
        }
    }
    // Superstabilizer inferability.
    for (size_t s = 0; s < gs.superstabs.size(); s++) {
        const auto& ss = gs.superstabs[s];
        std::vector<std::pair<int, int64_t>> cover;
        for (int t = 0; t < nw2; t++) {
            int y = b.add_var(VarTag::AuxAnd, "ssw_" + std::to_string(s) + "_" + std::to_string(t));
            std::vector<int> xs;
            for (int m : ss.members)
                xs.push_back(or2[static_cast<size_t>(t)][static_cast<size_t>(m)]);
            b.define_and(y, xs);
            cover.push_back({y, 1});
        }
        b.add_constraint(std::move(cover), Sense::GE, 1, "superstab");
    }

    // Alignment slacks for stabilizer and superstabilizer victims.
    struct Victim {
        const Support* support;
        Basis basis;
        std::string tag;
    };
    std::vector<Victim> victims;
    for (const auto& op : gs.ops)
        if (op.kind == OpKind::Stabilizer)
            victims.push_back({&op.support, op.basis, "o" + std::to_string(op.id)});
    for (size_t s = 0; s < gs.superstabs.size(); s++)
        victims.push_back({&gs.superstabs[s].support, gs.superstabs[s].basis,
                           "ss" + std::to_string(s)});
    std::vector<int> align_slacks;
    for (const auto& vic : victims) {
        std::vector<std::pair<size_t, int>> stretchers;  // time-independent
        for (size_t i = 0; i < n; i++)
            for (int p = 0; p < cat.count(static_cast<int>(i)); p++)
                if (stretches(*vic.support, vic.basis, cat.at(static_cast<int>(i), p)))
                    stretchers.push_back({i, p});
        if (stretchers.size() < 2) continue;  // the slack would be identically zero
        for (int t = 0; t < T; t++) {
            int w = b.add_var(VarTag::AuxOr, "stw_" + std::to_string(t) + "_" + vic.tag);
            std::vector<int> xs;
            for (auto [i, p] : stretchers) xs.push_back(v_at(t, i, p));
            b.define_or(w, xs);
            int slack = b.add_var(VarTag::AuxSlack, "s_" + std::to_string(t) + "_" + vic.tag,
                                  static_cast<int64_t>(stretchers.size()), true);
            // slack - sum(stretchers) + w = 0: exact at every feasible point.
            std::vector<std::pair<int, int64_t>> terms = {{slack, 1}, {w, 1}};
            for (auto [i, p] : stretchers) terms.push_back({v_at(t, i, p), -1});
            b.add_constraint(std::move(terms), Sense::EQ, 0, "align-slack");
            AuxDef def{AuxDef::Kind::SlackEq, slack, {}};
            for (auto [i, p] : stretchers) def.inputs.push_back(v_at(t, i, p));
            def.inputs.push_back(w);
            model.aux_defs.push_back(std::move(def));
            align_slacks.push_back(slack);
        }
    }

    // Basis-change indicators per rootable qubit.
    std::map<Coord, std::array<std::vector<std::pair<size_t, int>>, 2>> roots;
    for (size_t i = 0; i < n; i++)
        for (int p = 0; p < cat.count(static_cast<int>(i)); p++) {
            const Shape& sh = cat.at(static_cast<int>(i), p);
            roots[sh.root][sh.basis == Basis::X ? 0 : 1].push_back({i, p});
        }
    std::vector<int> j_vars;
    int64_t b_windows = cyclic ? T : T - 1;
    int64_t b_constant = 0;
    for (const auto& [q, by_basis] : roots) {
        b_constant += b_windows;
        for (int bb = 0; bb < 2; bb++) {
            if (by_basis[static_cast<size_t>(bb)].empty()) continue;
            const char* bc = bb == 0 ? "X" : "Z";
            std::vector<int> u(static_cast<size_t>(T));
            for (int t = 0; t < T; t++) {
                u[static_cast<size_t>(t)] =
                    b.add_var(VarTag::AuxOr, std::string("u_") + coord_tag(q) + "_" +
                                                 std::to_string(t) + "_" + bc);
                std::vector<int> xs;
                for (auto [i, p] : by_basis[static_cast<size_t>(bb)]) xs.push_back(v_at(t, i, p));
                b.define_or(u[static_cast<size_t>(t)], xs);
            }
            for (int t = 0; t < static_cast<int>(b_windows); t++) {
                int y = b.add_var(VarTag::AuxAnd, std::string("j_") + coord_tag(q) + "_" +
                                                      std::to_string(t) + "_" + bc);
                b.define_and(y, {u[static_cast<size_t>(t)], u[static_cast<size_t>((t + 1) % T)]});
                j_vars.push_back(y);
            }
        }
    }

    // Objective, scaled by den.
    for (int t = 0; t < T; t++)
        for (size_t i = 0; i < n; i++) {
            if (gs.ops[i].kind == OpKind::Stabilizer)
                model.obj_coeff[static_cast<size_t>(f_at(t, i))] -= obj.den;
            else if (gm[static_cast<size_t>(t)][i] >= 0)
                model.obj_coeff[static_cast<size_t>(gm[static_cast<size_t>(t)][i])] -= obj.den;
        }
    for (size_t i = 0; i < n; i++) {
        model.obj_coeff[static_cast<size_t>(s2[i])] += obj.alpha;
        if (s3[i] >= 0) model.obj_coeff[static_cast<size_t>(s3[i])] += obj.beta;
    }
    for (int s : align_slacks) model.obj_coeff[static_cast<size_t>(s)] += obj.gamma;
    for (int y : j_vars) model.obj_coeff[static_cast<size_t>(y)] -= obj.delta;
    model.obj_constant = obj.delta * b_constant;

    uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](int64_t x) {
        h ^= static_cast<uint64_t>(x) + 0x9e3779b97f4a7c15ULL;
        h *= 1099511628211ULL;
    };
    mix(gs.patch.d);
    for (Coord q : gs.cfg.broken_qubits) mix(q.x * 1000 + q.y);
    for (const auto& c : gs.cfg.broken_couplers) {
        mix(c.a.x * 1000 + c.a.y);
        mix(c.b.x * 1000 + c.b.y);
    }
    for (Coord q : gs.trimmed_boundary) mix(q.x * 1000 + q.y + 7);
    mix(T);
    mix(cyclic ? 1 : 0);
    mix(obj.alpha);
    mix(obj.beta);
    mix(obj.gamma);
    mix(obj.delta);
    mix(obj.den);
    std::ostringstream os;
    os << std::hex << h;
    model.fingerprint = os.str();
    return model;
}

ObjectiveTerms objective_terms(const Diagram& diag, const GaugeStructure& gs,
                               const ShapeCatalog& cat, bool cyclic) {
    int T = diag.rounds;
    size_t n = gs.ops.size();
    auto f = diag.coverage(n);
    auto fat = [&](int t, size_t i) { return f[static_cast<size_t>((t % T + T) % T)][i]; };
    ObjectiveTerms out;
    int nw2 = cyclic ? T : T - 1;
    int nw3 = cyclic ? T : std::max(0, T - 2);
    for (size_t i = 0; i < n; i++) {
        bool skip2 = false, skip3 = false;
        for (int t = 0; t < nw2; t++)
            if (!fat(t, i) && !fat(t + 1, i)) skip2 = true;
        for (int t = 0; t < nw3; t++)
            if (!fat(t, i) && !fat(t + 1, i) && !fat(t + 2, i)) skip3 = true;
        out.s2 += skip2 ? 1 : 0;
        out.s3 += skip3 ? 1 : 0;
        if (gs.ops[i].kind == OpKind::Stabilizer) {
            for (int t = 0; t < T; t++) out.m += fat(t, i) ? 1 : 0;
        } else {
            for (int t = cyclic ? 0 : 1; t < T; t++)
                out.m += (fat(t - 1, i) && fat(t, i)) ? 1 : 0;
        }
    }
    auto count_stretchers = [&](const Support& sup, Basis basis) {
        int64_t total = 0;
        for (int t = 0; t < T; t++) {
            int c = 0;
            for (auto [op, p] : diag.boards[static_cast<size_t>(t)])
                if (stretches(sup, basis, cat.at(op, p))) c++;
            total += std::max(0, c - 1);
        }
        return total;
    };
    for (const auto& op : gs.ops)
        if (op.kind == OpKind::Stabilizer) out.a += count_stretchers(op.support, op.basis);
    for (const auto& ss : gs.superstabs) out.a += count_stretchers(ss.support, ss.basis);

    std::set<Coord> rootable;
    for (size_t i = 0; i < n; i++)
        for (int p = 0; p < cat.count(static_cast<int>(i)); p++)
            rootable.insert(cat.at(static_cast<int>(i), p).root);
    int nwb = cyclic ? T : T - 1;
    // Root basis per (qubit, board).
    std::map<Coord, std::vector<int>> root_basis;
    for (Coord q : rootable) root_basis[q].assign(static_cast<size_t>(T), -1);
    for (int t = 0; t < T; t++)
        for (auto [op, p] : diag.boards[static_cast<size_t>(t)]) {
            const Shape& sh = cat.at(op, p);
            root_basis[sh.root][static_cast<size_t>(t)] = sh.basis == Basis::X ? 0 : 1;
        }
    for (const auto& [q, per_t] : root_basis)
        for (int t = 0; t < nwb; t++) {
            int b0 = per_t[static_cast<size_t>(t)];
            int b1 = per_t[static_cast<size_t>((t + 1) % T)];
            bool j = b0 >= 0 && b1 >= 0 && b0 == b1;
            out.b += j ? 0 : 1;
        }
    return out;
}

int64_t fold_objective(const ObjectiveTerms& t, const Objective& obj) {
    return -obj.den * t.m + obj.alpha * t.s2 + obj.beta * t.s3 + obj.gamma * t.a + obj.delta * t.b;
}

bool constraint_satisfied(const LinearConstraint& c, const Assignment& x) {
    int64_t acc = 0;
    for (auto [id, coef] : c.terms) acc += coef * x[static_cast<size_t>(id)];
    switch (c.sense) {
        case Sense::LE: return acc <= c.rhs;
        case Sense::GE: return acc >= c.rhs;
        case Sense::EQ: return acc == c.rhs;
    }
    return false;
}

const LinearConstraint* first_violation(const IlpModel& model, const Assignment& x) {
    for (const auto& c : model.constraints)
        if (!constraint_satisfied(c, x)) return &c;
    return nullptr;
}

int64_t assignment_objective(const IlpModel& model, const Assignment& x) {
    int64_t acc = model.obj_constant;
    for (size_t i = 0; i < model.vars.size(); i++) acc += model.obj_coeff[i] * x[i];
    return acc;
}

void complete_assignment(const IlpModel& model, Assignment& x) {
    x.resize(model.vars.size(), 0);
    for (const auto& def : model.aux_defs) {
        int64_t v = 0;
        switch (def.kind) {
            case AuxDef::Kind::Or:
                for (int in : def.inputs) v |= x[static_cast<size_t>(in)] != 0;
                break;
            case AuxDef::Kind::And: {
                v = 1;
                for (int in : def.inputs) v &= x[static_cast<size_t>(in)] != 0;
                break;
            }
            case AuxDef::Kind::OrOfNot:
                for (int in : def.inputs) v |= x[static_cast<size_t>(in)] == 0;
                break;
            case AuxDef::Kind::SlackEq: {
                for (size_t k = 0; k + 1 < def.inputs.size(); k++)
                    v += x[static_cast<size_t>(def.inputs[k])];
                v -= x[static_cast<size_t>(def.inputs.back())];
                break;
            }
        }
        x[static_cast<size_t>(def.var)] = v;
    }
}

Assignment hint_from_diagram(const IlpModel& model, const Diagram& diag) {
    if (diag.rounds != model.rounds) throw std::invalid_argument("round count mismatch");
    Assignment x(model.vars.size(), 0);
    for (int t = 0; t < model.rounds; t++)
        for (auto [op, p] : diag.boards[static_cast<size_t>(t)]) {
            const auto& row = model.v_index[static_cast<size_t>(t)][static_cast<size_t>(op)];
            if (p < 0 || static_cast<size_t>(p) >= row.size())
                throw std::invalid_argument("diagram references a shape outside the model");
            x[static_cast<size_t>(row[static_cast<size_t>(p)])] = 1;
        }
    complete_assignment(model, x);
    if (const LinearConstraint* c = first_violation(model, x))
        throw std::runtime_error(std::string("hint infeasible: violates ") + c->label);
    return x;
}

Diagram decode_assignment(const IlpModel& model, const Assignment& x, const GaugeStructure& gs) {
    Diagram diag;
    diag.d = gs.patch.d;
    diag.rounds = model.rounds;
    diag.provenance = Provenance::Optimized;
    diag.boards.assign(static_cast<size_t>(model.rounds), {});
    for (int t = 0; t < model.rounds; t++)
        for (size_t i = 0; i < model.v_index[static_cast<size_t>(t)].size(); i++)
            for (size_t p = 0; p < model.v_index[static_cast<size_t>(t)][i].size(); p++)
                if (x[static_cast<size_t>(model.v_index[static_cast<size_t>(t)][i][p])] != 0)
                    diag.boards[static_cast<size_t>(t)].emplace(static_cast<int>(i),
                                                                static_cast<int>(p));
    return diag;
}

std::string write_lp(const IlpModel& model) {
    std::ostringstream os;
    os << "\\ LUCI schedule model, fingerprint " << model.fingerprint << "\n";
    os << "\\ objective scaled by " << model.objective.den << ", constant offset "
       << model.obj_constant << "\n";
    os << "Minimize\n obj:";
    bool first = true;
    for (size_t i = 0; i < model.vars.size(); i++) {
        int64_t c = model.obj_coeff[i];
        if (c == 0) continue;
        if (c >= 0)
            os << (first ? " " : " + ") << c << " " << model.vars[i].name;
        else
            os << " - " << -c << " " << model.vars[i].name;
        first = false;
    }
    if (first) os << " 0 " << model.vars.front().name;
    os << "\nSubject To\n";
    for (size_t k = 0; k < model.constraints.size(); k++) {
        const auto& c = model.constraints[k];
        os << " c" << k << "_" << c.label << ":";
        for (auto [id, coef] : c.terms) {
            if (coef >= 0)
                os << " + " << coef << " " << model.vars[static_cast<size_t>(id)].name;
            else
                os << " - " << -coef << " " << model.vars[static_cast<size_t>(id)].name;
        }
        os << (c.sense == Sense::LE ? " <= " : c.sense == Sense::GE ? " >= " : " = ") << c.rhs
           << "\n";
    }
    os << "Bounds\n";
    for (const auto& v : model.vars)
        if (v.integer_general) os << " " << v.lb << " <= " << v.name << " <= " << v.ub << "\n";
    os << "Binaries\n";
    for (const auto& v : model.vars)
        if (!v.integer_general) os << " " << v.name << "\n";
    bool any_general = false;
    for (const auto& v : model.vars) any_general = any_general || v.integer_general;
    if (any_general) {
        os << "Generals\n";
        for (const auto& v : model.vars)
            if (v.integer_general) os << " " << v.name << "\n";
    }
    os << "End\n";
    return os.str();
}

}  // namespace luci
