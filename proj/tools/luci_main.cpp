#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "luci/analysis.h"
#include "luci/heuristic.h"
#include "luci/json_io.h"
#include "luci/render.h"
#include "luci/solver.h"

using namespace luci;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "luci 0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalidInput = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string fnv1a64(const std::string& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

// Every command records how to reproduce its outputs byte-identically.
struct Manifest {
    std::string command;
    json parameters = json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    void write(const std::string& primary_out) const {
        json j;
        j["tool"] = kVersion;
        j["command"] = command;
        j["parameters"] = parameters;
        json ins = json::array();
        for (const auto& p : inputs) {
            json e;
            e["path"] = p;
            e["fnv1a64"] = fnv1a64(read_file(p));
            ins.push_back(e);
        }
        j["inputs"] = ins;
        json outs = json::array();
        for (const auto& p : outputs) {
            json e;
            e["path"] = p;
            e["fnv1a64"] = fnv1a64(read_file(p));
            outs.push_back(e);
        }
        j["outputs"] = outs;
        write_file(primary_out + ".manifest.json", j.dump(2) + "\n");
    }
};

struct PipelineFlags {
    bool legacy = false;
    bool trim = true;
};

struct Context {
    PatchSpec patch;
    DropoutConfig cfg;
    GaugeStructure gs;
    ShapeCatalog cat;
    Diagram default_diag;
};

// Deterministic reconstruction shared by every command that reads a diagram:
// the default pass (including its trim) fixes the operator ids.
Context build_context(const std::string& config_path, const PipelineFlags& flags) {
    Context ctx;
    ctx.cfg = config_from_json(read_file(config_path));
    ctx.patch = build_patch(ctx.cfg.d);
    ctx.gs = build_gauge_structure(ctx.patch, ctx.cfg, {.legacy = flags.legacy});
    ctx.cat = build_catalog(ctx.gs);
    HeuristicOptions opts;
    opts.trim = flags.trim;
    ctx.default_diag = default_diagram(ctx.gs, ctx.cat, opts);
    return ctx;
}

int cmd_sample(int d, double qubit_rate, double coupler_rate, uint64_t seed, int count,
               int jobs, const std::string& out) {
    auto patch = build_patch(d);
    Manifest man;
    man.command = "sample";
    man.parameters = {{"d", d},
                      {"qubit_rate", qubit_rate},
                      {"coupler_rate", coupler_rate},
                      {"seed", seed},
                      {"count", count}};
    if (count <= 1) {
        auto cfg = sample_dropout(patch, qubit_rate, coupler_rate, seed);
        write_file(out, config_to_json(cfg));
        man.outputs.push_back(out);
        man.write(out);
        return kExitOk;
    }
    // Ensemble mode: derived seeds seed+index, files <stem>_<index><ext>.
    auto stem = std::filesystem::path(out);
    std::string ext = stem.extension().string();
    std::string base = (stem.parent_path() / stem.stem()).string();
    std::vector<std::string> files(static_cast<size_t>(count));
    auto work = [&](int lo, int hi) {
        for (int k = lo; k < hi; k++) {
            auto cfg = sample_dropout(patch, qubit_rate, coupler_rate, seed + static_cast<uint64_t>(k));
            std::string path = base + "_" + std::to_string(k) + ext;
            write_file(path, config_to_json(cfg));
            files[static_cast<size_t>(k)] = path;
        }
    };
    jobs = std::max(1, jobs);
    std::vector<std::thread> pool;
    int chunk = (count + jobs - 1) / jobs;
    for (int j = 0; j < jobs; j++) {
        int lo = j * chunk, hi = std::min(count, lo + chunk);
        if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
    for (auto& f : files) man.outputs.push_back(f);
    man.write(base);
    return kExitOk;
}

int cmd_build(const std::string& config, const PipelineFlags& flags, bool report_distance,
              const std::string& out_prefix) {
    Context ctx = build_context(config, flags);
    std::string ops_path = out_prefix + ".operators.json";
    std::string diag_path = out_prefix + ".default.luci";
    write_file(ops_path, operators_to_json(ctx.gs));
    write_file(diag_path, diagram_to_text(ctx.default_diag, ctx.cat));
    Manifest man;
    man.command = "build";
    man.parameters = {{"config", config},
                      {"legacy_gauges", flags.legacy},
                      {"trim", flags.trim}};
    man.inputs.push_back(config);
    man.outputs = {ops_path, diag_path};
    if (report_distance) {
        int dz = code_distance(ctx.gs, Basis::Z);
        int dx = code_distance(ctx.gs, Basis::X);
        std::cout << "distance Z=" << dz << " X=" << dx << "\n";
        json rep = {{"z", dz}, {"x", dx}};
        std::string dist_path = out_prefix + ".distance.json";
        write_file(dist_path, rep.dump(2) + "\n");
        man.outputs.push_back(dist_path);
        man.parameters["report_distance"] = true;
    }
    man.write(out_prefix);
    return kExitOk;
}

int cmd_optimize(const std::string& config, const PipelineFlags& flags, int rounds, double alpha,
                 double beta, double gamma, double delta, const std::string& mode,
                 double time_limit, int64_t work_limit, uint64_t seed, bool no_hint,
                 bool open_time, bool dump_lp, const std::string& out_prefix) {
    Context ctx = build_context(config, flags);
    Objective obj = mode == "max-meas" ? Objective::max_measurements()
                                       : Objective::from_doubles(alpha, beta, gamma, delta);
    IlpModel model = build_model(ctx.gs, ctx.cat, rounds, obj, !open_time);
    SolveParams params;
    params.time_limit_s = time_limit;
    params.work_limit = work_limit;
    params.seed = seed;
    params.emit_trace = true;
    if (!no_hint && rounds == ctx.default_diag.rounds)
        params.hints = hint_from_diagram(model, ctx.default_diag);
    Solution sol = solve(model, ctx.gs, ctx.cat, params);
    Manifest man;
    man.command = "optimize";
    man.parameters = {{"config", config},
                      {"legacy_gauges", flags.legacy},
                      {"trim", flags.trim},
                      {"rounds", rounds},
                      {"alpha", alpha},
                      {"beta", beta},
                      {"gamma", gamma},
                      {"delta", delta},
                      {"mode", mode},
                      {"time_limit", time_limit},
                      {"work_limit", work_limit},
                      {"seed", seed},
                      {"hint", !no_hint},
                      {"time_topology", open_time ? "open" : "cyclic"}};
    man.inputs.push_back(config);
    if (sol.status == SolveStatus::Infeasible) {
        std::cerr << "infeasible:";
        for (const auto& w : sol.infeasible_witness) std::cerr << " " << w;
        std::cerr << "\n";
        return kExitInfeasible;
    }
    if (sol.status == SolveStatus::Unknown) {
        std::cerr << "no schedule found within the budget\n";
        return kExitInfeasible;
    }
    Diagram diag = decode_assignment(model, sol.assignment, ctx.gs);
    std::string diag_path = out_prefix + ".optimized.luci";
    std::string trace_path = out_prefix + ".trace.csv";
    write_file(diag_path, diagram_to_text(diag, ctx.cat));
    write_file(trace_path, trace_csv(sol, model));
    man.outputs = {diag_path, trace_path};
    if (dump_lp) {
        std::string lp_path = out_prefix + ".model.lp";
        write_file(lp_path, write_lp(model));
        man.outputs.push_back(lp_path);
        man.parameters["dump_lp"] = true;
    }
    auto terms = objective_terms(diag, ctx.gs, ctx.cat, !open_time);
    json info = {{"status", status_name(sol.status)},
                 {"objective_scaled", sol.objective},
                 {"bound_scaled", sol.bound},
                 {"denominator", model.objective.den},
                 {"vars", model.var_count()},
                 {"constraints", model.constraint_count()},
                 {"m", terms.m},
                 {"s2", terms.s2},
                 {"s3", terms.s3},
                 {"a", terms.a},
                 {"b", terms.b},
                 {"elapsed_s", sol.elapsed_s},
                 {"work", sol.work_used},
                 {"fingerprint", model.fingerprint}};
    std::string info_path = out_prefix + ".solve.json";
    write_file(info_path, info.dump(2) + "\n");
    man.outputs.push_back(info_path);
    man.write(out_prefix);
    std::cout << "status=" << status_name(sol.status) << " objective="
              << static_cast<double>(sol.objective) / static_cast<double>(model.objective.den)
              << "\n";
    return kExitOk;
}

int cmd_feasibility(const std::string& config, const PipelineFlags& flags, int rounds,
                    int64_t work_limit, double time_limit, const std::string& out_prefix) {
    Context ctx = build_context(config, flags);
    IlpModel model = build_model(ctx.gs, ctx.cat, rounds, Objective::max_measurements(), true);
    SolveParams params;
    params.time_limit_s = time_limit;
    params.work_limit = work_limit;
    Solution sol = feasibility(model, ctx.gs, ctx.cat, params);
    json info = {{"status", status_name(sol.status)}, {"rounds", rounds}, {"work", sol.work_used}};
    std::string info_path = out_prefix + ".feasibility.json";
    write_file(info_path, info.dump(2) + "\n");
    Manifest man;
    man.command = "feasibility";
    man.parameters = {{"config", config},
                      {"legacy_gauges", flags.legacy},
                      {"trim", flags.trim},
                      {"rounds", rounds},
                      {"work_limit", work_limit}};
    man.inputs.push_back(config);
    man.outputs = {info_path};
    man.write(out_prefix);
    std::cout << "T=" << rounds << " " << status_name(sol.status) << "\n";
    if (sol.status == SolveStatus::Infeasible) return kExitInfeasible;
    return sol.status == SolveStatus::Feasible ? kExitOk : kExitInfeasible;
}

int cmd_analyze(const std::string& config, const std::string& diagram_path,
                const PipelineFlags& flags, bool volumes, bool frequencies, bool paths,
                int cycles, const std::string& out_prefix) {
    Context ctx = build_context(config, flags);
    Diagram diag = diagram_from_text(read_file(diagram_path), ctx.cat);
    auto viol = validate_diagram(diag, ctx.gs, ctx.cat);
    if (!viol.empty()) {
        std::cerr << "invalid diagram: " << viol.front().family << " " << viol.front().detail
                  << "\n";
        return kExitInvalidInput;
    }
    Manifest man;
    man.command = "analyze";
    man.parameters = {{"config", config},       {"diagram", diagram_path},
                      {"legacy_gauges", flags.legacy}, {"trim", flags.trim},
                      {"volumes", volumes},     {"frequencies", frequencies},
                      {"paths", paths},         {"cycles", cycles}};
    man.inputs = {config, diagram_path};
    if (frequencies) {
        auto stats = measurement_frequency_stats(diag, ctx.gs);
        write_file(out_prefix + ".frequencies.json",
                   frequency_report_json(stats, diag.rounds));
        write_file(out_prefix + ".frequencies.csv", frequency_report_csv(stats));
        man.outputs.push_back(out_prefix + ".frequencies.json");
        man.outputs.push_back(out_prefix + ".frequencies.csv");
    }
    if (volumes || paths) {
        Circuit circ = compile_circuit(diag, ctx.gs, ctx.cat, cycles);
        auto ana = analyze_circuit(circ, ctx.gs, true, true);
        if (volumes) {
            auto stats = volume_stats(ana.detectors);
            write_file(out_prefix + ".volumes.json", volume_report_json(stats));
            write_file(out_prefix + ".volumes.csv", volume_report_csv(stats));
            man.outputs.push_back(out_prefix + ".volumes.json");
            man.outputs.push_back(out_prefix + ".volumes.csv");
        }
        if (paths) {
            auto zslice = end_cycle_slice(ana, circ, Basis::Z);
            auto xslice = end_cycle_slice(ana, circ, Basis::X);
            auto zp = min_weight_paths(zslice, Basis::Z, ctx.patch);
            auto xp = min_weight_paths(xslice, Basis::X, ctx.patch);
            write_file(out_prefix + ".paths.json", paths_report_json(zp, xp));
            man.outputs.push_back(out_prefix + ".paths.json");
        }
    }
    man.write(out_prefix);
    return kExitOk;
}

int cmd_render(const std::string& config, const std::string& diagram_path,
               const PipelineFlags& flags, const std::string& format, const std::string& out) {
    Context ctx = build_context(config, flags);
    Diagram diag = diagram_from_text(read_file(diagram_path), ctx.cat);
    std::string content = format == "svg" ? render_svg(diag, ctx.gs, ctx.cat)
                                          : render_text(diag, ctx.gs, ctx.cat);
    write_file(out, content);
    Manifest man;
    man.command = "render";
    man.parameters = {{"config", config},
                      {"diagram", diagram_path},
                      {"legacy_gauges", flags.legacy},
                      {"trim", flags.trim},
                      {"format", format}};
    man.inputs = {config, diagram_path};
    man.outputs = {out};
    man.write(out);
    return kExitOk;
}

int cmd_export(const std::string& config, const std::string& diagram_path,
               const PipelineFlags& flags, int cycles, const std::string& noise,
               const std::string& basis, const std::string& out) {
    Context ctx = build_context(config, flags);
    Diagram diag = diagram_from_text(read_file(diagram_path), ctx.cat);
    auto viol = validate_diagram(diag, ctx.gs, ctx.cat);
    if (!viol.empty()) {
        std::cerr << "invalid diagram: " << viol.front().family << "\n";
        return kExitInvalidInput;
    }
    double p = 0;
    if (!noise.empty()) {
        if (noise.rfind("si1000:", 0) != 0)
            throw CLI::ValidationError("--noise", "expected si1000:<p>");
        p = std::stod(noise.substr(7));
    }
    Basis memory = basis == "x" ? Basis::X : Basis::Z;
    Circuit circ = compile_circuit(diag, ctx.gs, ctx.cat, cycles, memory);
    auto ana = analyze_circuit(circ, ctx.gs, false, true);
    CircuitAnnotations ann;
    for (const auto& det : ana.detectors) {
        ann.detectors.push_back(det.meas);
        double cx = 0, cy = 0;
        const auto& rec = circ.records[static_cast<size_t>(det.meas.back())];
        cx = circ.qubits[static_cast<size_t>(rec.qubit)].x;
        cy = circ.qubits[static_cast<size_t>(rec.qubit)].y;
        ann.detector_coords.push_back({cx, cy});
    }
    ann.observable = ana.observable;
    write_file(out, circuit_text(circ, p, &ann));
    Manifest man;
    man.command = "export";
    man.parameters = {{"config", config}, {"diagram", diagram_path},
                      {"legacy_gauges", flags.legacy}, {"trim", flags.trim},
                      {"cycles", cycles}, {"noise", noise},
                      {"basis", basis}};
    man.inputs = {config, diagram_path};
    man.outputs = {out};
    man.write(out);
    return kExitOk;
}

int cmd_replay(const std::string& manifest_path, char** argv0);

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Surface-code measurement-schedule compiler for dropout-afflicted patches"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "Sample a dropout configuration");
    int d = 11;
    double qrate = 0.01, crate = 0.01;
    uint64_t seed = 0;
    int count = 1, jobs = 1;
    std::string out;
    sample->add_option("--d", d, "code distance (odd, >= 3)")->required();
    sample->add_option("--qubit-rate", qrate, "qubit dropout probability");
    sample->add_option("--coupler-rate", crate, "coupler dropout probability");
    sample->add_option("--seed", seed, "RNG seed");
    sample->add_option("--count", count, "ensemble size (derived seeds seed+index)");
    sample->add_option("--jobs", jobs, "parallel workers for ensemble mode");
    sample->add_option("--out", out, "output path")->required();

    // shared pipeline flags
    auto add_pipeline_flags = [](CLI::App* cmd, PipelineFlags* flags) {
        cmd->add_flag("--legacy-gauges", flags->legacy,
                      "disallow weight-one gauges (original prescription)");
        cmd->add_flag("!--no-trim", flags->trim, "skip the boundary-qubit trim pass");
    };

    auto* build = app.add_subcommand("build", "Gauge construction and the default schedule");
    std::string config;
    PipelineFlags bflags;
    bool report_distance = false;
    std::string out_prefix;
    build->add_option("--config", config, "dropout configuration JSON")->required();
    add_pipeline_flags(build, &bflags);
    build->add_flag("--report-distance", report_distance, "compute X/Z code distances");
    build->add_option("--out", out_prefix, "output prefix")->required();

    auto* opt = app.add_subcommand("optimize", "ILP-optimized schedule");
    std::string oconfig, oout, mode = "full";
    PipelineFlags oflags;
    int rounds = 4;
    double alpha = 6, beta = 5, gamma = 12, delta = 2, time_limit = 300;
    int64_t work_limit = -1;
    uint64_t oseed = 0;
    bool no_hint = false, open_time = false, dump_lp = false;
    opt->add_option("--config", oconfig)->required();
    add_pipeline_flags(opt, &oflags);
    opt->add_option("--rounds", rounds, "boards per cycle (default 4)");
    opt->add_option("--alpha", alpha, "skip-twice weight");
    opt->add_option("--beta", beta, "skip-thrice weight");
    opt->add_option("--gamma", gamma, "alignment weight");
    opt->add_option("--delta", delta, "basis-change weight");
    opt->add_option("--mode", mode, "full | max-meas")
        ->check(CLI::IsMember({"full", "max-meas"}));
    opt->add_option("--time-limit", time_limit, "seconds (default 300)");
    opt->add_option("--work-limit", work_limit, "deterministic work budget");
    opt->add_option("--seed", oseed, "search seed");
    opt->add_flag("--no-hint", no_hint, "do not seed the solver with the default schedule");
    opt->add_flag("--time-open", open_time, "open time topology instead of cyclic");
    opt->add_flag("--dump-lp", dump_lp, "write the LP interchange file");
    opt->add_option("--out", oout, "output prefix")->required();

    auto* feas = app.add_subcommand("feasibility", "Schedule existence for reduced rounds");
    std::string fconfig, fout;
    PipelineFlags fflags;
    int frounds = 3;
    int64_t fwork = -1;
    double ftime = 300;
    feas->add_option("--config", fconfig)->required();
    add_pipeline_flags(feas, &fflags);
    feas->add_option("--rounds", frounds, "2 or 3");
    feas->add_option("--work-limit", fwork);
    feas->add_option("--time-limit", ftime);
    feas->add_option("--out", fout, "output prefix")->required();

    auto* ana = app.add_subcommand("analyze", "Detector volumes, frequencies, path counts");
    std::string aconfig, adiag, aout;
    PipelineFlags aflags;
    bool volumes = false, frequencies = false, paths = false;
    int acycles = 3;
    ana->add_option("--config", aconfig)->required();
    ana->add_option("--diagram", adiag)->required();
    add_pipeline_flags(ana, &aflags);
    ana->add_flag("--volumes", volumes);
    ana->add_flag("--frequencies", frequencies);
    ana->add_flag("--paths", paths);
    ana->add_option("--cycles", acycles, "schedule cycles to compile for analysis");
    ana->add_option("--out", aout, "output prefix")->required();

    auto* ren = app.add_subcommand("render", "Board pictures");
    std::string rconfig, rdiag, rformat = "text", rout;
    PipelineFlags rflags;
    ren->add_option("--config", rconfig)->required();
    ren->add_option("--diagram", rdiag)->required();
    add_pipeline_flags(ren, &rflags);
    ren->add_option("--format", rformat)->check(CLI::IsMember({"text", "svg"}));
    ren->add_option("--out", rout)->required();

    auto* exp = app.add_subcommand("export", "Decoder-ready circuit file");
    std::string econfig, ediag, enoise, ebasis = "z", eout;
    PipelineFlags eflags;
    int ecycles = 1;
    exp->add_option("--config", econfig)->required();
    exp->add_option("--diagram", ediag)->required();
    add_pipeline_flags(exp, &eflags);
    exp->add_option("--cycles", ecycles, "full schedule cycles");
    exp->add_option("--noise", enoise, "si1000:<p> annotation");
    exp->add_option("--basis", ebasis)->check(CLI::IsMember({"z", "x"}));
    exp->add_option("--out", eout)->required();

    auto* rep = app.add_subcommand("replay", "Re-run a recorded manifest");
    std::string manifest_path;
    rep->add_option("manifest", manifest_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidInput;
    }

    try {
        if (sample->parsed()) return cmd_sample(d, qrate, crate, seed, count, jobs, out);
        if (build->parsed()) return cmd_build(config, bflags, report_distance, out_prefix);
        if (opt->parsed())
            return cmd_optimize(oconfig, oflags, rounds, alpha, beta, gamma, delta, mode,
                                time_limit, work_limit, oseed, no_hint, open_time, dump_lp, oout);
        if (feas->parsed()) return cmd_feasibility(fconfig, fflags, frounds, fwork, ftime, fout);
        if (ana->parsed())
            return cmd_analyze(aconfig, adiag, aflags, volumes, frequencies, paths, acycles, aout);
        if (ren->parsed()) return cmd_render(rconfig, rdiag, rflags, rformat, rout);
        if (exp->parsed())
            return cmd_export(econfig, ediag, eflags, ecycles, enoise, ebasis, eout);
        if (rep->parsed()) return cmd_replay(manifest_path, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitInvalidInput;
}

namespace {

int cmd_replay(const std::string& manifest_path, char** argv0) {
    json man = json::parse(read_file(manifest_path));
    std::string command = man.at("command").get<std::string>();
    const json& p = man.at("parameters");
    PipelineFlags flags;
    if (p.contains("legacy_gauges")) flags.legacy = p["legacy_gauges"].get<bool>();
    if (p.contains("trim")) flags.trim = p["trim"].get<bool>();
    (void)argv0;
    int rc = kExitInvalidInput;
    std::string prefix = manifest_path.substr(0, manifest_path.size() -
                                                      std::string(".manifest.json").size());
    if (command == "sample")
        rc = cmd_sample(p.at("d").get<int>(), p.at("qubit_rate").get<double>(),
                        p.at("coupler_rate").get<double>(), p.at("seed").get<uint64_t>(),
                        p.at("count").get<int>(), 1,
                        man.at("outputs").at(0).at("path").get<std::string>());
    else if (command == "build")
        rc = cmd_build(p.at("config").get<std::string>(), flags,
                       p.value("report_distance", false), prefix);
    else if (command == "optimize")
        rc = cmd_optimize(p.at("config").get<std::string>(), flags, p.at("rounds").get<int>(),
                          p.at("alpha").get<double>(), p.at("beta").get<double>(),
                          p.at("gamma").get<double>(), p.at("delta").get<double>(),
                          p.at("mode").get<std::string>(), p.at("time_limit").get<double>(),
                          p.at("work_limit").get<int64_t>(), p.at("seed").get<uint64_t>(),
                          !p.at("hint").get<bool>(), p.at("time_topology") == "open",
                          p.value("dump_lp", false), prefix);
    else if (command == "feasibility")
        rc = cmd_feasibility(p.at("config").get<std::string>(), flags, p.at("rounds").get<int>(),
                             p.at("work_limit").get<int64_t>(), 300.0, prefix);
    else if (command == "analyze")
        rc = cmd_analyze(p.at("config").get<std::string>(), p.at("diagram").get<std::string>(),
                         flags, p.at("volumes").get<bool>(), p.at("frequencies").get<bool>(),
                         p.at("paths").get<bool>(), p.at("cycles").get<int>(), prefix);
    else if (command == "render")
        rc = cmd_render(p.at("config").get<std::string>(), p.at("diagram").get<std::string>(),
                        flags, p.at("format").get<std::string>(),
                        man.at("outputs").at(0).at("path").get<std::string>());
    else if (command == "export")
        rc = cmd_export(p.at("config").get<std::string>(), p.at("diagram").get<std::string>(),
                        flags, p.at("cycles").get<int>(), p.at("noise").get<std::string>(),
                        p.at("basis").get<std::string>(),
                        man.at("outputs").at(0).at("path").get<std::string>());
    if (rc != kExitOk) return rc;
    // Verify the recorded output hashes.
    for (const auto& o : man.at("outputs")) {
        std::string path = o.at("path").get<std::string>();
        if (fnv1a64(read_file(path)) != o.at("fnv1a64").get<std::string>()) {
            std::cerr << "replay mismatch: " << path << "\n";
            return 1;
        }
    }
    std::cout << "replay ok\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
