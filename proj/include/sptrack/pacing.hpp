#pragma once

// Self-paced regularizers and their closed-form weight solutions.
//
// All three share the structure "weight falls linearly with effective
// loss and hits zero at the pace":
//   plain:            v = 1 - l/lambda                 if l < lambda, else 0
//   time-weighted:    v = rho * (1 - l/lambda)         if l < lambda, else 0
//   detection-guided: v = rho * (1 - (l + xi*c)/lambda) if l + xi*c < lambda, else 0
// At the kink (effective loss == pace) the zero branch applies.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sptrack/core.hpp"

namespace sptrack {

enum class RegularizerKind { plain, time_weighted, detection_guided };

inline const char* regularizer_name(RegularizerKind k) noexcept {
    switch (k) {
    case RegularizerKind::plain: return "plain";
    case RegularizerKind::time_weighted: return "time_weighted";
    case RegularizerKind::detection_guided: return "detection_guided";
    }
    return "unknown";
}

/// One point of the stage schedule handed to the batch solver.
struct SchedulePoint {
    double pace = 1.0;
    double xi = 0.0;
};

namespace detail {

inline void check_loss(double loss) {
    if (!std::isfinite(loss)) fail(errc::non_finite, "loss must be finite");
    if (loss < 0.0) fail(errc::invariant_violation, "loss must be >= 0, got " + std::to_string(loss));
}

inline void check_pace(double pace) {
    if (!(std::isfinite(pace) && pace > 0.0))
        fail(errc::non_positive_pace, "pace must be finite and > 0, got " + std::to_string(pace));
}

inline void check_prior(double prior) {
    if (!(std::isfinite(prior) && prior > 0.0 && prior <= 1.0))
        fail(errc::invalid_prior, "prior must lie in (0,1], got " + std::to_string(prior));
}

inline void check_confidence(double c) {
    if (!std::isfinite(c)) fail(errc::non_finite, "confidence must be finite");
    if (c < 0.0) fail(errc::invariant_violation, "confidence must be >= 0, got " + std::to_string(c));
}

inline void check_xi(double xi) {
    if (!(std::isfinite(xi) && xi >= 0.0))
        fail(errc::invariant_violation, "xi must be finite and >= 0, got " + std::to_string(xi));
}

} // namespace detail

inline double solve_weight_plain(double loss, double pace) {
    detail::check_loss(loss);
    detail::check_pace(pace);
    return loss < pace ? 1.0 - loss / pace : 0.0;
}

inline double solve_weight_time(double loss, double prior, double pace) {
    detail::check_loss(loss);
    detail::check_prior(prior);
    detail::check_pace(pace);
    return loss < pace ? prior * (1.0 - loss / pace) : 0.0;
}

inline double solve_weight_guided(double loss, double confidence, double prior, double pace, double xi) {
    detail::check_loss(loss);
    detail::check_confidence(confidence);
    detail::check_prior(prior);
    detail::check_pace(pace);
    detail::check_xi(xi);
    const double effective = loss + xi * confidence;
    return effective < pace ? prior * (1.0 - effective / pace) : 0.0;
}

/// Element-wise closed-form solve for a whole buffer, aligned by index.
/// Writes the solved weights back into the samples and returns them.
template <typename FeaturesT, typename LabelT>
std::vector<double> solve_weights_batch(TrainingBuffer<FeaturesT, LabelT>& buffer,
                                        std::span<const double> losses,
                                        SchedulePoint point,
                                        RegularizerKind kind) {
    if (losses.size() != buffer.size())
        fail(errc::length_mismatch, "losses length " + std::to_string(losses.size()) +
                                        " != buffer length " + std::to_string(buffer.size()));
    std::vector<double> out(losses.size());
    for (std::size_t k = 0; k < losses.size(); ++k) {
        auto& s = buffer[k];
        switch (kind) {
        case RegularizerKind::plain:
            out[k] = solve_weight_plain(losses[k], point.pace);
            break;
        case RegularizerKind::time_weighted:
            out[k] = solve_weight_time(losses[k], s.rho, point.pace);
            break;
        case RegularizerKind::detection_guided:
            out[k] = solve_weight_guided(losses[k], s.c, s.rho, point.pace, point.xi);
            break;
        }
        s.v = out[k];
    }
    return out;
}

/// Evaluates the selected regularizer f(v; lambda) exactly as written:
///   plain:            lambda * sum(v^2/2 - v)
///   time-weighted:    lambda * sum(v^2/(2 rho) - v)
///   detection-guided: time-weighted + xi * sum(c v)
/// `rhos` is read for the time-weighted and guided kinds, `cs` for the
/// guided kind only.
inline double regularizer_value(std::span<const double> weights,
                                std::span<const double> rhos,
                                std::span<const double> cs,
                                double pace,
                                double xi,
                                RegularizerKind kind) {
    detail::check_pace(pace);
    if (kind != RegularizerKind::plain && rhos.size() != weights.size())
        fail(errc::length_mismatch, "rhos length != weights length");
    if (kind == RegularizerKind::detection_guided && cs.size() != weights.size())
        fail(errc::length_mismatch, "cs length != weights length");

    double value = 0.0;
    switch (kind) {
    case RegularizerKind::plain:
        for (double v : weights) value += 0.5 * v * v - v;
        return pace * value;
    case RegularizerKind::time_weighted:
        for (std::size_t k = 0; k < weights.size(); ++k)
            value += 0.5 * weights[k] * weights[k] / rhos[k] - weights[k];
        return pace * value;
    case RegularizerKind::detection_guided: {
        detail::check_xi(xi);
        double coupling = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            value += 0.5 * weights[k] * weights[k] / rhos[k] - weights[k];
            coupling += cs[k] * weights[k];
        }
        return pace * value + xi * coupling;
    }
    }
    return 0.0;
}

} // namespace sptrack
