#include "luci/json_io.h"

#include <sstream>

#include "json.hpp"

namespace luci {

using nlohmann::json;

std::string config_to_json(const DropoutConfig& cfg) {
    json j;
    j["d"] = cfg.d;
    json bq = json::array();
    for (Coord q : cfg.broken_qubits) bq.push_back({q.x, q.y});
    j["broken_qubits"] = bq;
    json bc = json::array();
    for (const Coupler& c : cfg.broken_couplers)
        bc.push_back({{c.a.x, c.a.y}, {c.b.x, c.b.y}});
    j["broken_couplers"] = bc;
    if (cfg.seed) j["seed"] = *cfg.seed;
    return j.dump(2) + "\n";
}

DropoutConfig config_from_json(const std::string& text) {
    json j = json::parse(text);
    DropoutConfig cfg;
    cfg.d = j.at("d").get<int>();
    if (cfg.d < 3 || cfg.d % 2 == 0) throw std::runtime_error("bad distance in config");
    for (const auto& q : j.value("broken_qubits", json::array()))
        cfg.broken_qubits.insert({q.at(0).get<int>(), q.at(1).get<int>()});
    for (const auto& c : j.value("broken_couplers", json::array()))
        cfg.broken_couplers.insert(Coupler({c.at(0).at(0).get<int>(), c.at(0).at(1).get<int>()},
                                           {c.at(1).at(0).get<int>(), c.at(1).at(1).get<int>()}));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    // Sanity: every element must exist in the patch.
    PatchSpec patch = build_patch(cfg.d);
    for (Coord q : cfg.broken_qubits)
        if (!patch.has_qubit(q)) throw std::runtime_error("broken qubit outside the patch");
    for (const Coupler& c : cfg.broken_couplers)
        if (!patch.has_coupler(c)) throw std::runtime_error("broken coupler outside the patch");
    return cfg;
}

std::string operators_to_json(const GaugeStructure& gs) {
    json j;
    j["d"] = gs.patch.d;
    j["legacy"] = gs.legacy;
    json ops = json::array();
    for (const auto& op : gs.ops) {
        json o;
        o["id"] = op.id;
        o["basis"] = std::string(1, basis_char(op.basis));
        o["kind"] = op.kind == OpKind::Gauge ? "gauge" : "stabilizer";
        json sup = json::array();
        for (Coord q : op.support) sup.push_back({q.x, q.y});
        o["support"] = sup;
        if (op.region)
            o["region"] = *op.region;
        else
            o["region"] = nullptr;
        ops.push_back(o);
    }
    j["operators"] = ops;
    json supers = json::array();
    for (const auto& ss : gs.superstabs) {
        json s;
        s["basis"] = std::string(1, basis_char(ss.basis));
        s["members"] = ss.members;
        json sup = json::array();
        for (Coord q : ss.support) sup.push_back({q.x, q.y});
        s["support"] = sup;
        supers.push_back(s);
    }
    j["superstabilizers"] = supers;
    json excised = json::array();
    for (Coord q : gs.excised_data) excised.push_back({q.x, q.y});
    j["excised_data_qubits"] = excised;
    json trimmed = json::array();
    for (Coord q : gs.trimmed_boundary) trimmed.push_back({q.x, q.y});
    j["trimmed_boundary_qubits"] = trimmed;
    json discarded = json::array();
    for (Coord q : gs.discarded_region) discarded.push_back({q.x, q.y});
    j["discarded_region"] = discarded;
    return j.dump(2) + "\n";
}

std::string volume_report_json(const VolumeStats& stats) {
    json j;
    j["mean_volume"] = stats.mean;
    json cdf = json::array();
    for (auto [v, c] : stats.reverse_cdf) cdf.push_back({v, c});
    j["reverse_cdf"] = cdf;
    return j.dump(2) + "\n";
}

std::string volume_report_csv(const VolumeStats& stats) {
    std::ostringstream os;
    os << "volume,count_at_least\n";
    for (auto [v, c] : stats.reverse_cdf) os << v << "," << c << "\n";
    return os.str();
}

std::string frequency_report_json(const FrequencyStats& stats, int rounds) {
    json j;
    j["rounds"] = rounds;
    json hist = json::object();
    for (auto [count, ops] : stats.histogram) hist[std::to_string(count)] = ops;
    j["histogram"] = hist;
    json fracs = json::object();
    for (auto [count, ops] : stats.histogram) {
        (void)ops;
        fracs[std::to_string(count)] = stats.fraction_measured(count);
    }
    j["fractions"] = fracs;
    return j.dump(2) + "\n";
}

std::string frequency_report_csv(const FrequencyStats& stats) {
    std::ostringstream os;
    os << "measurements_per_cycle,operator_count\n";
    for (auto [count, ops] : stats.histogram) os << count << "," << ops << "\n";
    return os.str();
}

std::string paths_report_json(const PathCount& z_paths, const PathCount& x_paths) {
    json j;
    auto side = [](const PathCount& p) {
        json s;
        if (p.length < 0) {
            s["length"] = nullptr;
            s["infinite"] = true;
            s["count"] = 0;
        } else {
            s["length"] = p.length;
            s["infinite"] = false;
            s["count"] = p.count;
        }
        return s;
    };
    j["z"] = side(z_paths);
    j["x"] = side(x_paths);
    return j.dump(2) + "\n";
}

}  // namespace luci
