#pragma once

// Response-map quality analysis. The detection confidence is the peak
// ratio (second peak / first peak), gated to 0 when the map shows a
// single sharp, strong peak. The secondary peak is the maximum outside
// a toroidal Chebyshev neighborhood of the primary, so the measure is
// invariant to circular shifts of the map contents.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "sptrack/core.hpp"

namespace sptrack {

struct ConfidenceConfig {
    double beta1 = 0.5;   // peak-ratio threshold, in (0,1)
    double beta2 = 0.12;  // peak-magnitude threshold, response units
    // Pixel radius excluded around the primary peak when locating the
    // secondary one. Unset -> max(3, min(map dimension)/10).
    std::optional<int> suppression_radius{};

    void validate() const {
        if (!(std::isfinite(beta1) && beta1 > 0.0 && beta1 < 1.0))
            fail(errc::invariant_violation, "beta1 must lie in (0,1), got " + std::to_string(beta1));
        if (!(std::isfinite(beta2) && beta2 > 0.0))
            fail(errc::invariant_violation, "beta2 must be > 0, got " + std::to_string(beta2));
        if (suppression_radius && *suppression_radius < 1)
            fail(errc::invariant_violation, "suppression_radius must be >= 1");
    }
};

inline int default_suppression_radius(std::size_t rows, std::size_t cols) {
    const auto dim = static_cast<int>(rows < cols ? rows : cols);
    const int tenth = dim / 10;
    return tenth > 3 ? tenth : 3;
}

struct PeakPair {
    double primary = 0.0;
    std::size_t primary_row = 0, primary_col = 0;
    double secondary = 0.0;
    std::size_t secondary_row = 0, secondary_col = 0;
};

/// Locates the global maximum and the maximum outside the toroidal
/// Chebyshev-radius neighborhood of it. Ties break in row-major scan
/// order, so results are deterministic.
inline PeakPair find_two_peaks(const ResponseMap& map, int radius) {
    if (radius < 1) fail(errc::invariant_violation, "suppression radius must be >= 1");
    const std::size_t rows = map.rows(), cols = map.cols();
    const auto window = static_cast<std::size_t>(2 * radius + 1);
    if (rows * cols < window * window)
        fail(errc::map_too_small, "map with " + std::to_string(rows * cols) +
                                      " cells cannot suppress a radius-" + std::to_string(radius) + " window");

    PeakPair peaks;
    peaks.primary = map(0, 0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (map(r, c) > peaks.primary) {
                peaks.primary = map(r, c);
                peaks.primary_row = r;
                peaks.primary_col = c;
            }

    const auto toroidal_dist = [](std::size_t a, std::size_t b, std::size_t n) {
        const std::size_t d = a > b ? a - b : b - a;
        return d < n - d ? d : n - d;
    };

    bool found = false;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t dr = toroidal_dist(r, peaks.primary_row, rows);
            const std::size_t dc = toroidal_dist(c, peaks.primary_col, cols);
            const std::size_t cheb = dr > dc ? dr : dc;
            if (cheb <= static_cast<std::size_t>(radius)) continue;
            if (!found || map(r, c) > peaks.secondary) {
                peaks.secondary = map(r, c);
                peaks.secondary_row = r;
                peaks.secondary_col = c;
                found = true;
            }
        }
    if (!found)
        fail(errc::map_too_small, "suppression window covers the whole map");
    return peaks;
}

inline PeakPair find_two_peaks(const ResponseMap& map) {
    return find_two_peaks(map, default_suppression_radius(map.rows(), map.cols()));
}

/// g_max2 / g_max1. Callers pass g_max2 in [0, g_max1].
inline double peak_ratio(double g_max1, double g_max2) {
    if (!(std::isfinite(g_max1) && g_max1 > 0.0))
        fail(errc::non_positive_peak, "primary peak must be > 0, got " + std::to_string(g_max1));
    return g_max2 / g_max1;
}

/// Detection confidence c of a response map: 0 when the map has one
/// sharp strong peak (pr <= beta1 and g_max1 > beta2), the peak ratio
/// otherwise. A map whose maximum is not positive is maximally
/// unreliable and yields 1 rather than an error, so a degenerate
/// detection de-weights the sample instead of aborting the tracker.
inline double detection_confidence(const ResponseMap& map, const ConfidenceConfig& cfg) {
    cfg.validate();
    const int radius =
        cfg.suppression_radius ? *cfg.suppression_radius : default_suppression_radius(map.rows(), map.cols());
    const PeakPair peaks = find_two_peaks(map, radius);
    if (peaks.primary <= 0.0) return 1.0;
    const double secondary = peaks.secondary > 0.0 ? peaks.secondary : 0.0;
    const double pr = peak_ratio(peaks.primary, secondary);
    if (pr <= cfg.beta1 && peaks.primary > cfg.beta2) return 0.0;
    return pr;
}

} // namespace sptrack
