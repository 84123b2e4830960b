#include <cmath>
#include <cstddef>

#include "support.hpp"

#include "sptrack/confidence.hpp"

using namespace sptrack;
using testutil::thrown_code;

namespace {

ResponseMap impulse_map(std::size_t n, std::size_t r, std::size_t c, double value,
                        double background = 0.0) {
    Grid g(n, n, background);
    g(r, c) = value;
    return ResponseMap(g);
}

Grid rolled(const Grid& g, std::int64_t dr, std::int64_t dc) {
    Grid out(g.rows(), g.cols());
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c)
            out(r, c) = g.at_wrap(static_cast<std::int64_t>(r) - dr,
                                  static_cast<std::int64_t>(c) - dc);
    return out;
}

} // namespace

TEST_CASE("two peaks of an impulse map") {
    const auto peaks = find_two_peaks(impulse_map(16, 7, 7, 0.9), 3);
    REQUIRE(peaks.primary == 0.9);
    REQUIRE(peaks.primary_row == 7);
    REQUIRE(peaks.primary_col == 7);
    REQUIRE(peaks.secondary == 0.0);
}

TEST_CASE("two equal impulses far apart tie") {
    Grid g(16, 16, 0.0);
    g(3, 3) = 0.7;
    g(12, 12) = 0.7;
    const auto peaks = find_two_peaks(ResponseMap(g), 3);
    REQUIRE(peaks.primary == 0.7);
    REQUIRE(peaks.secondary == 0.7);
    // row-major scan finds (3,3) first
    REQUIRE(peaks.primary_row == 3);
    REQUIRE(peaks.primary_col == 3);
    REQUIRE(peaks.secondary_row == 12);
    REQUIRE(peaks.secondary_col == 12);
}

TEST_CASE("uniform map ties break in row-major order") {
    const ResponseMap map{Grid(16, 16, 0.4)};
    const auto peaks = find_two_peaks(map, 3);
    REQUIRE(peaks.primary == 0.4);
    REQUIRE(peaks.secondary == 0.4);
    REQUIRE(peaks.primary_row == 0);
    REQUIRE(peaks.primary_col == 0);
    // first cell outside the toroidal Chebyshev radius of (0,0)
    REQUIRE(peaks.secondary_row == 0);
    REQUIRE(peaks.secondary_col == 4);
}

TEST_CASE("suppression window larger than the map is rejected") {
    REQUIRE(thrown_code([] { find_two_peaks(ResponseMap{Grid(6, 8, 0.1)}, 3); }) ==
            errc::map_too_small);
    // enough cells, but the toroidal window still covers everything
    REQUIRE(thrown_code([] { find_two_peaks(ResponseMap{Grid(7, 7, 0.1)}, 3); }) ==
            errc::map_too_small);
    REQUIRE_NOTHROW(find_two_peaks(ResponseMap{Grid(8, 8, 0.1)}, 3));
    // a degenerate strip still has cells beyond the column radius
    REQUIRE_NOTHROW(find_two_peaks(ResponseMap{Grid(1, 49, 0.1)}, 3));
    REQUIRE(thrown_code([] { find_two_peaks(ResponseMap{Grid(8, 8, 0.1)}, 0); }) ==
            errc::invariant_violation);
}

TEST_CASE("peak ratio") {
    REQUIRE(peak_ratio(0.9, 0.0) == 0.0);
    REQUIRE(peak_ratio(0.6, 0.6) == 1.0);
    REQUIRE(peak_ratio(0.8, 0.2) == 0.25);
    REQUIRE(thrown_code([] { peak_ratio(0.0, 0.0); }) == errc::non_positive_peak);
    REQUIRE(thrown_code([] { peak_ratio(-1.0, 0.0); }) == errc::non_positive_peak);
}

TEST_CASE("confidence gate branches") {
    ConfidenceConfig cfg;
    cfg.beta1 = 0.3;
    cfg.beta2 = 0.5;
    cfg.suppression_radius = 3;

    // sharp strong peak: pr = 0.1 <= beta1 and 0.9 > beta2 -> 0
    Grid sharp(16, 16, 0.0);
    sharp(8, 8) = 0.9;
    sharp(2, 2) = 0.09;
    REQUIRE(detection_confidence(ResponseMap(sharp), cfg) == 0.0);

    // ambiguous: pr = 0.6 > beta1 -> keep the ratio
    Grid ambiguous(16, 16, 0.0);
    ambiguous(8, 8) = 0.9;
    ambiguous(2, 2) = 0.54;
    REQUIRE(detection_confidence(ResponseMap(ambiguous), cfg) == 0.6);

    // weak: pr = 0.1 but 0.3 <= beta2, magnitude condition fails -> ratio
    Grid weak(16, 16, 0.0);
    weak(8, 8) = 0.3;
    weak(2, 2) = 0.03;
    REQUIRE(detection_confidence(ResponseMap(weak), cfg) ==
            Catch::Approx(0.1).margin(1e-15));
}

TEST_CASE("confidence config validation") {
    ConfidenceConfig cfg;
    cfg.beta1 = 1.0;
    REQUIRE(thrown_code([&] { cfg.validate(); }) == errc::invariant_violation);
    cfg.beta1 = 0.5;
    cfg.beta2 = 0.0;
    REQUIRE(thrown_code([&] { cfg.validate(); }) == errc::invariant_violation);
    cfg.beta2 = 0.12;
    cfg.suppression_radius = 0;
    REQUIRE(thrown_code([&] { cfg.validate(); }) == errc::invariant_violation);
}

TEST_CASE("non-positive maps give worst-case confidence") {
    ConfidenceConfig cfg;
    cfg.suppression_radius = 3;
    REQUIRE(detection_confidence(ResponseMap{Grid(16, 16, -0.2)}, cfg) == 1.0);
    REQUIRE(detection_confidence(ResponseMap{Grid(16, 16, 0.0)}, cfg) == 1.0);
}

TEST_CASE("negative secondary peaks clamp to a zero ratio") {
    ConfidenceConfig cfg;
    cfg.beta1 = 0.5;
    cfg.beta2 = 0.12;
    cfg.suppression_radius = 3;
    REQUIRE(detection_confidence(impulse_map(16, 8, 8, 0.9, -0.3), cfg) == 0.0);
    // weak positive peak over a negative background: gate fails, pr clamps to 0
    REQUIRE(detection_confidence(impulse_map(16, 8, 8, 0.1, -0.3), cfg) == 0.0);
}

TEST_CASE("scaling touches only the magnitude gate") {
    ConfidenceConfig cfg;
    cfg.beta1 = 0.3;
    cfg.beta2 = 0.5;
    cfg.suppression_radius = 3;

    Grid g(16, 16, 0.0);
    g(8, 8) = 0.9;
    g(2, 2) = 0.09;
    REQUIRE(detection_confidence(ResponseMap(g), cfg) == 0.0);

    // scaled far below beta2 the gate no longer fires; the ratio is unchanged
    Grid small = g;
    for (auto& x : small.cells()) x *= 0.01;
    const auto big_peaks = find_two_peaks(ResponseMap(g), 3);
    const auto small_peaks = find_two_peaks(ResponseMap(small), 3);
    REQUIRE(peak_ratio(big_peaks.primary, big_peaks.secondary) ==
            Catch::Approx(peak_ratio(small_peaks.primary, small_peaks.secondary)).epsilon(1e-12));
    REQUIRE(detection_confidence(ResponseMap(small), cfg) ==
            Catch::Approx(0.1).margin(1e-12));
}

TEST_CASE("confidence is invariant under toroidal translation") {
    detail::Rand rng(53);
    ConfidenceConfig cfg;
    cfg.suppression_radius = 3;
    for (int trial = 0; trial < 20; ++trial) {
        Grid g(17, 19);
        for (auto& x : g.cells()) x = rng.uniform(-0.2, 1.0);
        const double base = detection_confidence(ResponseMap(g), cfg);
        REQUIRE(base >= 0.0);
        REQUIRE(base <= 1.0);
        const auto dr = static_cast<std::int64_t>(rng.bits() % 17);
        const auto dc = static_cast<std::int64_t>(rng.bits() % 19);
        REQUIRE(detection_confidence(ResponseMap(rolled(g, dr, dc)), cfg) == base);
    }
}

TEST_CASE("default suppression radius floors at 3") {
    REQUIRE(default_suppression_radius(16, 16) == 3);
    REQUIRE(default_suppression_radius(30, 30) == 3);
    REQUIRE(default_suppression_radius(200, 100) == 10);
    REQUIRE(default_suppression_radius(64, 640) == 6);
}
