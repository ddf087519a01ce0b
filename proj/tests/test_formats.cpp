#include "doctest.h"
#include "luci/heuristic.h"
#include "luci/json_io.h"
#include "luci/render.h"

using namespace luci;

namespace {

DropoutConfig empty_cfg(int d) {
    DropoutConfig cfg;
    cfg.d = d;
    return cfg;
}

}  // namespace

TEST_CASE("dropout config JSON round-trips canonically") {
    auto patch = build_patch(5);
    auto cfg = sample_dropout(patch, 0.05, 0.05, 99);
    auto text = config_to_json(cfg);
    auto back = config_from_json(text);
    CHECK(back.d == cfg.d);
    CHECK(back.broken_qubits == cfg.broken_qubits);
    CHECK(back.broken_couplers == cfg.broken_couplers);
    CHECK(back.seed == cfg.seed);
    CHECK(config_to_json(back) == text);
    // Readers accept any order.
    std::string shuffled = R"({"broken_couplers": [], "seed": 7,
        "broken_qubits": [[3,3],[1,1]], "d": 5})";
    auto cfg2 = config_from_json(shuffled);
    CHECK(cfg2.broken_qubits.size() == 2);
    // Invalid input rejected.
    CHECK_THROWS(config_from_json("{\"d\": 4}"));
    CHECK_THROWS(config_from_json("{\"d\": 5, \"broken_qubits\": [[0,1]]}"));
    CHECK_THROWS(config_from_json("not json"));
}

TEST_CASE("diagram text round-trips byte-stably") {
    auto patch = build_patch(5);
    auto cfg = sample_dropout(patch, 0.02, 0.02, 123);
    auto gs = build_gauge_structure(patch, cfg);
    auto cat = build_catalog(gs);
    auto diag = default_diagram(gs, cat);
    auto text = diagram_to_text(diag, cat);
    auto back = diagram_from_text(text, cat);
    CHECK(back.d == diag.d);
    CHECK(back.rounds == diag.rounds);
    CHECK(back.boards == diag.boards);
    CHECK(diagram_to_text(back, cat) == text);
    CHECK(back.provenance == Provenance::Imported);
    CHECK_THROWS(diagram_from_text("garbage header\n", cat));
    CHECK_THROWS(diagram_from_text("LUCI v1 d=5 T=4\n0 99999 0 0 a Z\n", cat));
}

TEST_CASE("operator dump is valid JSON with the expected fields") {
    auto patch = build_patch(5);
    DropoutConfig cfg = empty_cfg(5);
    cfg.broken_qubits.insert({5, 5});
    auto gs = build_gauge_structure(patch, cfg);
    auto text = operators_to_json(gs);
    CHECK(text.find("\"operators\"") != std::string::npos);
    CHECK(text.find("\"superstabilizers\"") != std::string::npos);
    CHECK(text.find("\"gauge\"") != std::string::npos);
}

TEST_CASE("text render round-trips through the diagram format") {
    auto gs = build_gauge_structure(build_patch(3), empty_cfg(3));
    auto cat = build_catalog(gs);
    auto diag = default_diagram(gs, cat);
    auto text = render_text(diag, gs, cat);
    auto back = diagram_from_text(text, cat);  // picture lines are comments
    CHECK(back.boards == diag.boards);
}

TEST_CASE("svg render is well-formed") {
    auto gs = build_gauge_structure(build_patch(3), empty_cfg(3));
    auto cat = build_catalog(gs);
    auto diag = default_diagram(gs, cat);
    auto svg = render_svg(diag, gs, cat);
    CHECK(svg.rfind("<svg xmlns=", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    // Four board labels for T=4.
    size_t boards = 0, pos = 0;
    while ((pos = svg.find(">board ", pos)) != std::string::npos) {
        boards++;
        pos++;
    }
    CHECK(boards == 4);
    // Balanced tags: every <line and <circle is self-closed.
    size_t opens = 0, closes = 0;
    for (pos = 0; (pos = svg.find("<line", pos)) != std::string::npos; pos++) opens++;
    for (pos = 0; (pos = svg.find("/>", pos)) != std::string::npos; pos++) closes++;
    CHECK(closes >= opens);
}

TEST_CASE("glyph grammar covers every catalog shape uniquely") {
    auto patch = build_patch(5);
    auto cfg = sample_dropout(patch, 0.03, 0.03, 321);
    auto gs = build_gauge_structure(patch, cfg);
    auto cat = build_catalog(gs);
    for (const auto& op : gs.ops) {
        std::set<std::pair<Coord, char>> seen;
        for (const auto& sh : cat.shapes[static_cast<size_t>(op.id)]) {
            char g = sh.glyph();
            CHECK((g == 'o' || (g >= 'a' && g <= 'h')));
            CHECK(seen.insert({sh.root, g}).second);
            CHECK(cat.find(op.id, sh.root, g) >= 0);
        }
    }
}
