#pragma once

// The discriminative model contract and two concrete learners.
//
// A learner exposes a per-sample loss, a weighted refit that exactly
// minimizes sum_k v_k * loss_k + alpha * R(theta), and a response
// operation. RidgeLearner is a plain weighted ridge regressor over
// feature vectors; CorrelationFilterLearner is a single-channel
// correlation filter solved per frequency, responding with a dense
// map over all cyclic shifts of the input patch.

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sptrack/core.hpp"
#include "sptrack/fft.hpp"
#include "sptrack/pacing.hpp"

namespace sptrack {

template <typename L>
concept DiscriminativeLearner =
    requires(const L& m, const typename L::Features& x, const typename L::Label& y,
             const TrainingBuffer<typename L::Features, typename L::Label>& buf) {
        { m.loss(x, y) } -> std::convertible_to<double>;
        { m.refit(buf) } -> std::same_as<L>;
        { m.alpha() } -> std::convertible_to<double>;
        { m.param_norm_sq() } -> std::convertible_to<double>;
    };

namespace detail {

/// Solves A x = b for symmetric positive definite A (row-major, lower
/// triangle populated) by in-place Cholesky. A pivot collapsing to
/// roundoff scale reports the system as rank-deficient.
inline std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, std::size_t d) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        if (a[i * d + i] > max_diag) max_diag = a[i * d + i];
    if (max_diag <= 0.0) fail(errc::singular_system, "normal-equation matrix has no positive diagonal");
    const double tol = max_diag * 1e-13;

    for (std::size_t j = 0; j < d; ++j) {
        double diag = a[j * d + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * d + k] * a[j * d + k];
        if (diag <= tol) fail(errc::singular_system, "weighted normal equations are rank-deficient");
        a[j * d + j] = std::sqrt(diag);
        for (std::size_t i = j + 1; i < d; ++i) {
            double s = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * d + k] * a[j * d + k];
            a[i * d + j] = s / a[j * d + j];
        }
    }
    // L y = b, then L^T x = y
    for (std::size_t i = 0; i < d; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * d + k] * b[k];
        b[i] = s / a[i * d + i];
    }
    for (std::size_t ii = d; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < d; ++k) s -= a[k * d + ii] * b[k];
        b[ii] = s / a[ii * d + ii];
    }
    return b;
}

} // namespace detail

/// Weighted ridge regression over d-dimensional features with scalar
/// labels. R(theta) is the squared parameter norm.
class RidgeLearner {
public:
    using Features = std::vector<double>;
    using Label = double;

    RidgeLearner(std::size_t dim, double alpha) : alpha_(alpha), weights_(dim, 0.0) {
        if (dim == 0) fail(errc::invariant_violation, "feature dimension must be >= 1");
        if (!(std::isfinite(alpha) && alpha >= 0.0))
            fail(errc::invariant_violation, "alpha must be finite and >= 0");
    }

    std::size_t dim() const noexcept { return weights_.size(); }
    double alpha() const noexcept { return alpha_; }
    std::span<const double> weights() const noexcept { return weights_; }

    double respond(const Features& x) const {
        if (x.size() != weights_.size())
            fail(errc::dimension_mismatch, "feature dimension " + std::to_string(x.size()) +
                                               " != model dimension " + std::to_string(weights_.size()));
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += weights_[i] * x[i];
        return s;
    }

    double loss(const Features& x, Label y) const {
        const double d = respond(x) - y;
        return d * d;
    }

    double param_norm_sq() const noexcept {
        double s = 0.0;
        for (double w : weights_) s += w * w;
        return s;
    }

    /// Exact minimizer of sum_k v_k (theta.x_k - y_k)^2 + alpha |theta|^2.
    /// Samples with v == 0 are skipped outright, so adding one leaves
    /// the result bit-identical.
    RidgeLearner refit(const TrainingBuffer<Features, Label>& buf) const {
        const std::size_t d = weights_.size();
        std::vector<double> a(d * d, 0.0), b(d, 0.0);
        bool any = false;
        for (const auto& s : buf) {
            if (s.v == 0.0) continue;
            if (s.features.size() != d)
                fail(errc::dimension_mismatch, "sample feature dimension != model dimension");
            any = true;
            for (std::size_t i = 0; i < d; ++i) {
                b[i] += s.v * s.label * s.features[i];
                for (std::size_t j = 0; j <= i; ++j) a[i * d + j] += s.v * s.features[i] * s.features[j];
            }
        }
        if (!any) fail(errc::all_weights_zero, "refit requires at least one sample with v > 0");
        for (std::size_t i = 0; i < d; ++i) a[i * d + i] += alpha_;

        RidgeLearner out(*this);
        out.weights_ = detail::solve_spd(std::move(a), std::move(b), d);
        return out;
    }

private:
    double alpha_;
    std::vector<double> weights_;
};

/// Weighted ridge objective and its analytic gradient at an arbitrary
/// parameter vector. Used by the verification suite to cross-check the
/// refit against central finite differences.
inline double ridge_weighted_objective(const TrainingBuffer<std::vector<double>, double>& buf,
                                       double alpha,
                                       std::span<const double> theta) {
    double total = 0.0;
    for (const auto& s : buf) {
        if (s.v == 0.0) continue;
        double g = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) g += theta[i] * s.features[i];
        total += s.v * (g - s.label) * (g - s.label);
    }
    for (double t : theta) total += alpha * t * t;
    return total;
}

inline std::vector<double> ridge_weighted_gradient(const TrainingBuffer<std::vector<double>, double>& buf,
                                                   double alpha,
                                                   std::span<const double> theta) {
    std::vector<double> grad(theta.size(), 0.0);
    for (const auto& s : buf) {
        if (s.v == 0.0) continue;
        double g = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) g += theta[i] * s.features[i];
        const double coeff = 2.0 * s.v * (g - s.label);
        for (std::size_t i = 0; i < theta.size(); ++i) grad[i] += coeff * s.features[i];
    }
    for (std::size_t i = 0; i < theta.size(); ++i) grad[i] += 2.0 * alpha * theta[i];
    return grad;
}

/// Desired-response template: a toroidal Gaussian bump with value
/// exactly 1 at the peak cell. Toroidal distance keeps labels
/// consistent under circular shifts of the patch.
inline Grid gaussian_response(std::size_t rows, std::size_t cols, double sigma,
                              std::size_t peak_row, std::size_t peak_col) {
    if (!(std::isfinite(sigma) && sigma > 0.0))
        fail(errc::invariant_violation, "response sigma must be > 0");
    Grid out(rows, cols);
    const auto wrap = [](std::size_t a, std::size_t b, std::size_t n) {
        const std::size_t d = a > b ? a - b : b - a;
        return static_cast<double>(d < n - d ? d : n - d);
    };
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double dr = wrap(r, peak_row, rows);
            const double dc = wrap(c, peak_col, cols);
            out(r, c) = std::exp(-(dr * dr + dc * dc) * inv);
        }
    return out;
}

/// Single-channel correlation filter over fixed-size patches, stored in
/// the frequency domain. The response to a patch is
/// idft(conj(H) .* dft(patch)), i.e. the circular cross-correlation of
/// the spatial filter with the patch. Per-sample loss is the mean
/// squared error of that response against the desired-response label;
/// R(theta) is the mean squared spatial filter coefficient, so the
/// weighted refit decouples per frequency into
///   H(w) = sum_k v_k conj(Y_k(w)) X_k(w) / (sum_k v_k |X_k(w)|^2 + alpha).
class CorrelationFilterLearner {
public:
    using Features = Grid;
    using Label = Grid;

    CorrelationFilterLearner(std::size_t rows, std::size_t cols, double alpha)
        : alpha_(alpha), filter_(rows, cols) {
        if (rows == 0 || cols == 0) fail(errc::invariant_violation, "filter dimensions must be positive");
        if (!(std::isfinite(alpha) && alpha >= 0.0))
            fail(errc::invariant_violation, "alpha must be finite and >= 0");
    }

    std::size_t rows() const noexcept { return filter_.rows; }
    std::size_t cols() const noexcept { return filter_.cols; }
    double alpha() const noexcept { return alpha_; }
    const fft::ComplexGrid& filter_spectrum() const noexcept { return filter_; }

    ResponseMap respond(const Grid& patch) const {
        check_dims(patch, "patch");
        fft::ComplexGrid x = fft::forward2d(patch);
        for (std::size_t i = 0; i < x.cells.size(); ++i)
            x.cells[i] = std::conj(filter_.cells[i]) * x.cells[i];
        return ResponseMap(fft::inverse2d_real(std::move(x)));
    }

    double loss(const Grid& patch, const Grid& label) const {
        check_dims(patch, "patch");
        check_dims(label, "label");
        const ResponseMap g = respond(patch);
        double sum = 0.0;
        for (std::size_t i = 0; i < label.cell_count(); ++i) {
            const double d = g.grid().cells()[i] - label.cells()[i];
            sum += d * d;
        }
        return sum / static_cast<double>(label.cell_count());
    }

    /// Mean squared spatial coefficient, evaluated in the frequency
    /// domain via Parseval: (1/M^2) sum_w |H(w)|^2.
    double param_norm_sq() const noexcept {
        double s = 0.0;
        for (const auto& h : filter_.cells) s += std::norm(h);
        const auto m = static_cast<double>(filter_.cells.size());
        return s / (m * m);
    }

    CorrelationFilterLearner refit(const TrainingBuffer<Grid, Grid>& buf) const {
        fft::ComplexGrid num(filter_.rows, filter_.cols);
        std::vector<double> den(filter_.cells.size(), 0.0);
        bool any = false;
        for (const auto& s : buf) {
            if (s.v == 0.0) continue;
            check_dims(s.features, "sample patch");
            check_dims(s.label, "sample label");
            any = true;
            const fft::ComplexGrid x = fft::forward2d(s.features);
            const fft::ComplexGrid y = fft::forward2d(s.label);
            for (std::size_t i = 0; i < den.size(); ++i) {
                num.cells[i] += s.v * std::conj(y.cells[i]) * x.cells[i];
                den[i] += s.v * std::norm(x.cells[i]);
            }
        }
        if (!any) fail(errc::all_weights_zero, "refit requires at least one sample with v > 0");

        CorrelationFilterLearner out(*this);
        for (std::size_t i = 0; i < den.size(); ++i) {
            const double d = den[i] + alpha_;
            if (d <= 0.0)
                fail(errc::singular_system, "zero-energy frequency bin with alpha = 0");
            out.filter_.cells[i] = num.cells[i] / d;
        }
        return out;
    }

private:
    void check_dims(const Grid& g, const char* what) const {
        if (g.rows() != filter_.rows || g.cols() != filter_.cols)
            fail(errc::dimension_mismatch, std::string(what) + " is " + std::to_string(g.rows()) + "x" +
                                               std::to_string(g.cols()) + ", filter is " +
                                               std::to_string(filter_.rows) + "x" + std::to_string(filter_.cols));
    }

    double alpha_;
    fft::ComplexGrid filter_;
};

static_assert(DiscriminativeLearner<RidgeLearner>);
static_assert(DiscriminativeLearner<CorrelationFilterLearner>);

template <DiscriminativeLearner L>
double per_sample_loss(const L& state, const Sample<typename L::Features, typename L::Label>& s) {
    return state.loss(s.features, s.label);
}

template <DiscriminativeLearner L>
std::vector<double> sample_losses(const L& state,
                                  const TrainingBuffer<typename L::Features, typename L::Label>& buf) {
    std::vector<double> out;
    out.reserve(buf.size());
    for (const auto& s : buf) out.push_back(state.loss(s.features, s.label));
    return out;
}

/// Joint objective of one stage: weighted data term plus model
/// regularizer plus the selected self-paced regularizer. Samples with
/// v == 0 contribute nothing to the data term.
template <DiscriminativeLearner L>
double objective(const L& state, const TrainingBuffer<typename L::Features, typename L::Label>& buf,
                 double pace, double xi, RegularizerKind kind) {
    double data = 0.0;
    for (const auto& s : buf)
        if (s.v != 0.0) data += s.v * state.loss(s.features, s.label);
    return data + state.alpha() * state.param_norm_sq() +
           regularizer_value(buf.weights(), buf.priors(), buf.confidences(), pace, xi, kind);
}

} // namespace sptrack
