#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "luci/geometry.h"

using namespace luci;

TEST_CASE("patch counts follow 2d^2-1") {
    auto p3 = build_patch(3);
    CHECK(p3.data_qubits.size() == 9);
    CHECK(p3.measure_qubits.size() == 8);
    CHECK(p3.all_qubits.size() == 17);
    auto p11 = build_patch(11);
    CHECK(p11.all_qubits.size() == 241);  // 2*11^2 - 1
    CHECK(p11.data_qubits.size() == 121);
}

TEST_CASE("invalid distances rejected") {
    CHECK_THROWS_AS(build_patch(2), std::invalid_argument);
    CHECK_THROWS_AS(build_patch(4), std::invalid_argument);
    CHECK_THROWS_AS(build_patch(-3), std::invalid_argument);
    CHECK_THROWS_AS(build_patch(1), std::invalid_argument);
}

TEST_CASE("d=3 rotated stabilizer census: 4 weight-4 and 4 weight-2") {
    auto p = build_patch(3);
    auto checks = p.rotated_checks();
    int w4 = 0, w2 = 0;
    for (const auto& c : checks) {
        if (c.support.size() == 4) w4++;
        if (c.support.size() == 2) w2++;
    }
    CHECK(w4 == 4);
    CHECK(w2 == 4);
    CHECK(checks.size() == 8);
}

TEST_CASE("bulk measure qubits have 4 couplers") {
    auto p = build_patch(5);
    for (Coord m : p.measure_qubits) {
        if (m.x == 0 || m.x == 10 || m.y == 0 || m.y == 10) continue;
        int n = 0;
        for (Coord dir : kDiagonals)
            if (p.has_coupler(Coupler(m, m + dir))) n++;
        CHECK(n == 4);
    }
}

TEST_CASE("dropout rate edge cases") {
    auto p = build_patch(5);
    auto none = sample_dropout(p, 0.0, 0.0, 7);
    CHECK(none.broken_qubits.empty());
    CHECK(none.broken_couplers.empty());
    auto all = sample_dropout(p, 1.0, 1.0, 7);
    CHECK(all.broken_qubits.size() == p.all_qubits.size());
    CHECK(all.broken_couplers.size() == p.couplers.size());
    CHECK_THROWS_AS(sample_dropout(p, -0.1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_dropout(p, 0, 1.5, 1), std::invalid_argument);
}

TEST_CASE("dropout sampling is seed-deterministic") {
    auto p = build_patch(7);
    auto a = sample_dropout(p, 0.03, 0.03, 1234);
    auto b = sample_dropout(p, 0.03, 0.03, 1234);
    CHECK(a.broken_qubits == b.broken_qubits);
    CHECK(a.broken_couplers == b.broken_couplers);
    auto c = sample_dropout(p, 0.03, 0.03, 1235);
    CHECK((a.broken_qubits != c.broken_qubits || a.broken_couplers != c.broken_couplers));
}

TEST_CASE("d=11 broken-qubit mean within 3 sigma of binomial") {
    auto p = build_patch(11);
    const int trials = 10000;
    double total = 0;
    for (int s = 0; s < trials; s++)
        total += static_cast<double>(sample_dropout(p, 0.01, 0.01, 1000 + s).broken_qubits.size());
    double mean = total / trials;
    double expect = 241 * 0.01;
    double sigma_mean = std::sqrt(241 * 0.01 * 0.99 / trials);
    CHECK(std::abs(mean - expect) < 3 * sigma_mean);
}

TEST_CASE("legacy conversion breaks perpendicular-coupler qubits") {
    auto p = build_patch(5);
    DropoutConfig cfg;
    cfg.d = 5;
    Coord q{3, 3};
    cfg.broken_couplers.insert(Coupler(q, q + Coord{1, 1}));
    cfg.broken_couplers.insert(Coupler(q, q + Coord{-1, 1}));
    auto legacy = legacy_convert(p, cfg);
    CHECK(legacy.qubit_broken(q));
    // Collinear pair stays unconverted.
    DropoutConfig cfg2;
    cfg2.d = 5;
    cfg2.broken_couplers.insert(Coupler(q, q + Coord{1, 1}));
    cfg2.broken_couplers.insert(Coupler(q, q + Coord{-1, -1}));
    auto legacy2 = legacy_convert(p, cfg2);
    CHECK(!legacy2.qubit_broken(q));
}

TEST_CASE("canonical layers touch each qubit at most once per layer") {
    auto p = build_patch(5);
    auto layers = canonical_layers(p);
    CHECK(layers.size() == 4);
    for (const auto& layer : layers) {
        std::set<Coord> used;
        for (auto [c, t] : layer) {
            CHECK(!used.count(c));
            CHECK(!used.count(t));
            used.insert(c);
            used.insert(t);
        }
    }
}
