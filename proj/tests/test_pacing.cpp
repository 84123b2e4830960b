#include <cmath>
#include <limits>
#include <vector>

#include "support.hpp"

#include "sptrack/pacing.hpp"
#include "sptrack/verify.hpp"

using namespace sptrack;
using testutil::thrown_code;

namespace {

TrainingBuffer<int, int> buffer_of(const std::vector<double>& rhos,
                                   const std::vector<double>& cs) {
    TrainingBuffer<int, int> buf(rhos.size(), 0.1);
    for (std::size_t k = 0; k < rhos.size(); ++k) {
        Sample<int, int> s;
        s.id = static_cast<std::int64_t>(k) + 1;
        s.rho = rhos[k];
        s.c = cs[k];
        buf.insert(s);
    }
    return buf;
}

} // namespace

TEST_CASE("plain closed form") {
    REQUIRE(solve_weight_plain(0.0, 1.0) == 1.0);
    REQUIRE(solve_weight_plain(1.0, 1.0) == 0.0);
    REQUIRE(solve_weight_plain(0.5, 1.0) == 0.5);
    REQUIRE(solve_weight_plain(2.0, 1.0) == 0.0);
}

TEST_CASE("time-weighted closed form") {
    REQUIRE(solve_weight_time(0.0, 1.0, 1.0) == 1.0);
    REQUIRE(solve_weight_time(0.0, 0.5, 1.0) == 0.5);
    REQUIRE(solve_weight_time(0.5, 0.8, 1.0) == 0.4);
}

TEST_CASE("detection-guided closed form") {
    REQUIRE(solve_weight_guided(0.0, 0.0, 1.0, 1.0, 1.0) == 1.0);
    REQUIRE(solve_weight_guided(0.3, 0.2, 1.0, 1.0, 1.0) == 0.5);
    REQUIRE(solve_weight_guided(0.3, 0.8, 1.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("the kink returns the zero branch") {
    REQUIRE(solve_weight_plain(1.0, 1.0) == 0.0);
    REQUIRE(solve_weight_time(1.0, 0.7, 1.0) == 0.0);
    // l + xi*c == lambda exactly
    REQUIRE(solve_weight_guided(0.5, 0.25, 0.9, 1.0, 2.0) == 0.0);
}

TEST_CASE("solver argument validation") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    REQUIRE(thrown_code([&] { solve_weight_plain(nan, 1.0); }) == errc::non_finite);
    REQUIRE(thrown_code([] { solve_weight_plain(-0.1, 1.0); }) == errc::invariant_violation);
    REQUIRE(thrown_code([] { solve_weight_plain(0.5, 0.0); }) == errc::non_positive_pace);
    REQUIRE(thrown_code([] { solve_weight_plain(0.5, -1.0); }) == errc::non_positive_pace);
    REQUIRE(thrown_code([] { solve_weight_time(0.5, 0.0, 1.0); }) == errc::invalid_prior);
    REQUIRE(thrown_code([] { solve_weight_time(0.5, 1.2, 1.0); }) == errc::invalid_prior);
    REQUIRE(thrown_code([] { solve_weight_guided(0.5, -0.1, 1.0, 1.0, 1.0); }) ==
            errc::invariant_violation);
    REQUIRE(thrown_code([] { solve_weight_guided(0.5, 0.1, 1.0, 1.0, -1.0); }) ==
            errc::invariant_violation);
}

TEST_CASE("batch solve applies the matching solver and writes back") {
    auto buf = buffer_of({1.0, 1.0}, {0.0, 0.0});

    SECTION("all zero losses give full weight") {
        const std::vector<double> losses{0.0, 0.0};
        const auto out = solve_weights_batch(buf, losses, {1.0, 0.0}, RegularizerKind::plain);
        REQUIRE(out == std::vector<double>{1.0, 1.0});
        REQUIRE(buf.weights() == out);
    }

    SECTION("losses above the pace zero out") {
        const std::vector<double> losses{0.2, 2.0};
        const auto out = solve_weights_batch(buf, losses, {1.0, 0.0}, RegularizerKind::plain);
        REQUIRE(out == std::vector<double>{0.8, 0.0});
        REQUIRE(buf[0].v == 0.8);
        REQUIRE(buf[1].v == 0.0);
    }

    SECTION("length mismatch is rejected") {
        const std::vector<double> losses{0.2};
        REQUIRE(thrown_code([&] {
                    solve_weights_batch(buf, losses, {1.0, 0.0}, RegularizerKind::plain);
                }) == errc::length_mismatch);
    }
}

TEST_CASE("batch solve matches the numeric oracle on a fixed instance") {
    const std::vector<double> rhos{1.0, 0.8, 0.6, 0.9, 0.3};
    const std::vector<double> cs{0.0, 0.4, 1.2, 0.1, 0.7};
    const std::vector<double> losses{0.05, 0.3, 0.9, 0.45, 0.2};
    const SchedulePoint point{0.8, 0.5};
    auto buf = buffer_of(rhos, cs);
    const auto out = solve_weights_batch(buf, losses, point, RegularizerKind::detection_guided);
    for (std::size_t k = 0; k < losses.size(); ++k) {
        const double ref = verify::oracle_minimize_weight(losses[k], cs[k], rhos[k], point.pace,
                                                          point.xi,
                                                          RegularizerKind::detection_guided);
        REQUIRE(std::abs(out[k] - ref) < 1e-8);
    }
}

TEST_CASE("oracle minimizer on hand-checkable instances") {
    // 1D literal grid search of v*l + lambda*(v^2/2 - v), two refinement passes
    const double l = 0.5, lambda = 1.0;
    double best_v = 0.0, best_f = std::numeric_limits<double>::infinity();
    double lo = 0.0, hi = 1.0;
    for (int pass = 0; pass < 3; ++pass) {
        const double step = (hi - lo) / 1000.0;
        for (int i = 0; i <= 1000; ++i) {
            const double v = lo + step * static_cast<double>(i);
            const double f = v * l + lambda * (0.5 * v * v - v);
            if (f < best_f) {
                best_f = f;
                best_v = v;
            }
        }
        lo = std::max(0.0, best_v - step);
        hi = std::min(1.0, best_v + step);
    }
    REQUIRE(std::abs(best_v - 0.5) < 1e-6);
    REQUIRE(std::abs(verify::oracle_minimize_weight(l, 0.0, 1.0, lambda, 0.0,
                                                    RegularizerKind::plain) -
                     0.5) < 1e-6);

    // at the kink l + xi*c = lambda the minimizer is 0
    REQUIRE(std::abs(verify::oracle_minimize_weight(0.6, 0.4, 1.0, 1.0, 1.0,
                                                    RegularizerKind::detection_guided)) < 1e-6);

    // prior scales the interior solution
    const double got = verify::oracle_minimize_weight(0.3, 0.0, 0.7, 1.0, 0.0,
                                                      RegularizerKind::time_weighted);
    REQUIRE(std::abs(got - 0.7 * (1.0 - 0.3)) < 1e-6);
}

TEST_CASE("regularizer value direct substitutions") {
    const std::vector<double> zero{0.0, 0.0, 0.0};
    const std::vector<double> rhos{1.0, 0.5, 0.9};
    const std::vector<double> cs{0.1, 0.2, 0.3};
    REQUIRE(regularizer_value(zero, rhos, cs, 2.0, 1.0, RegularizerKind::plain) == 0.0);
    REQUIRE(regularizer_value(zero, rhos, cs, 2.0, 1.0, RegularizerKind::time_weighted) == 0.0);
    REQUIRE(regularizer_value(zero, rhos, cs, 2.0, 1.0, RegularizerKind::detection_guided) == 0.0);

    const std::vector<double> one{1.0};
    const std::vector<double> rho1{1.0};
    const std::vector<double> c_half{0.5};
    REQUIRE(regularizer_value(one, rho1, c_half, 2.0, 1.0, RegularizerKind::plain) == -1.0);
    REQUIRE(regularizer_value(one, rho1, c_half, 2.0, 1.0, RegularizerKind::detection_guided) ==
            -0.5);

    REQUIRE(thrown_code([&] {
                regularizer_value(one, rhos, cs, 2.0, 1.0, RegularizerKind::time_weighted);
            }) == errc::length_mismatch);
    REQUIRE(thrown_code([&] {
                regularizer_value(one, rho1, cs, 2.0, 1.0, RegularizerKind::detection_guided);
            }) == errc::length_mismatch);
}

TEST_CASE("closed form matches the oracle over random instances") {
    const auto check = verify::verify_pacing_oracle(1000, 42);
    REQUIRE(check.instances == 3000);
    REQUIRE(check.max_deviation < 1e-6);
}

TEST_CASE("support sets grow with the pace") {
    detail::Rand rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t t = 1 + rng.bits() % 12;
        const double xi = rng.uniform(0.0, 2.0);
        std::vector<double> losses(t), rhos(t), cs(t);
        for (std::size_t k = 0; k < t; ++k) {
            losses[k] = rng.uniform(0.0, 2.0);
            rhos[k] = rng.uniform(0.05, 1.0);
            cs[k] = rng.uniform(0.0, 1.5);
        }
        auto buf = buffer_of(rhos, cs);
        std::vector<bool> prev_support(t, false);
        double pace = rng.uniform(0.05, 0.5);
        for (int stage = 0; stage < 4; ++stage, pace *= rng.uniform(1.5, 3.0)) {
            const auto w = solve_weights_batch(buf, losses, {pace, xi},
                                               RegularizerKind::detection_guided);
            for (std::size_t k = 0; k < t; ++k) {
                if (prev_support[k]) REQUIRE(w[k] > 0.0);
                prev_support[k] = w[k] > 0.0;
            }
        }
    }
}

TEST_CASE("weights move monotonically in each argument") {
    detail::Rand rng(29);
    for (int trial = 0; trial < 500; ++trial) {
        const double l = rng.uniform(0.0, 1.5);
        const double c = rng.uniform(0.0, 1.5);
        const double rho = rng.uniform(0.05, 1.0);
        const double pace = rng.uniform(0.1, 2.0);
        const double xi = rng.uniform(0.0, 2.0);
        const double base = solve_weight_guided(l, c, rho, pace, xi);
        REQUIRE(solve_weight_guided(l + 0.1, c, rho, pace, xi) <= base);
        REQUIRE(solve_weight_guided(l, c + 0.1, rho, pace, xi) <= base);
        REQUIRE(solve_weight_guided(l, c, std::min(1.0, rho + 0.05), pace, xi) >= base);
        REQUIRE(solve_weight_guided(l, c, rho, pace * 1.5, xi) >= base);
    }
}

TEST_CASE("reduction identities hold bit-exactly") {
    detail::Rand rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const double l = rng.uniform(0.0, 2.0);
        const double rho = rng.uniform(0.05, 1.0);
        const double c = rng.uniform(0.0, 1.5);
        const double pace = rng.uniform(0.1, 2.0);
        REQUIRE(solve_weight_time(l, 1.0, pace) == solve_weight_plain(l, pace));
        REQUIRE(solve_weight_guided(l, c, rho, pace, 0.0) == solve_weight_time(l, rho, pace));
    }
}

TEST_CASE("weights stay inside [0, rho]") {
    detail::Rand rng(37);
    for (int trial = 0; trial < 1000; ++trial) {
        const double rho = rng.uniform(0.05, 1.0);
        const double v = solve_weight_guided(rng.uniform(0.0, 3.0), rng.uniform(0.0, 2.0), rho,
                                             rng.uniform(0.1, 2.0), rng.uniform(0.0, 2.0));
        REQUIRE(v >= 0.0);
        REQUIRE(v <= rho);
        REQUIRE(v <= 1.0);
    }
}
