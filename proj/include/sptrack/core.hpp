#pragma once

// Core domain types for self-paced sample selection in online
// discriminative learning: samples with temporal priors and detection
// confidences, the bounded training buffer, the geometric pacing
// schedule, and dense response maps.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sptrack {

namespace detail {

/// Uniform doubles in [0,1) built directly from mt19937_64 output bits,
/// so streams are identical across standard libraries.
class Rand {
public:
    explicit Rand(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

} // namespace detail

enum class errc {
    invariant_violation,
    non_finite,
    non_positive_pace,
    invalid_prior,
    length_mismatch,
    map_too_small,
    non_positive_peak,
    dimension_mismatch,
    all_weights_zero,
    singular_system,
    not_initialized,
    empty_frame,
    invalid_spec,
};

inline const char* errc_name(errc c) noexcept {
    switch (c) {
    case errc::invariant_violation: return "InvariantViolation";
    case errc::non_finite: return "NonFinite";
    case errc::non_positive_pace: return "NonPositivePace";
    case errc::invalid_prior: return "InvalidPrior";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::map_too_small: return "MapTooSmall";
    case errc::non_positive_peak: return "NonPositivePeak";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::all_weights_zero: return "AllWeightsZero";
    case errc::singular_system: return "SingularSystem";
    case errc::not_initialized: return "NotInitialized";
    case errc::empty_frame: return "EmptyFrame";
    case errc::invalid_spec: return "InvalidSpec";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw error(code, what);
}

/// Dense 2D grid of doubles, row-major. Used for image frames, patches,
/// desired-response labels and raw response values.
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), cells_(rows * cols, value) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t cell_count() const noexcept { return cells_.size(); }
    bool empty() const noexcept { return cells_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }

    /// Toroidal read: indices wrap modulo the grid dimensions.
    double at_wrap(std::int64_t r, std::int64_t c) const {
        const auto m = static_cast<std::int64_t>(rows_);
        const auto n = static_cast<std::int64_t>(cols_);
        r %= m;
        if (r < 0) r += m;
        c %= n;
        if (c < 0) c += n;
        return cells_[static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c)];
    }

    std::vector<double>& cells() noexcept { return cells_; }
    const std::vector<double>& cells() const noexcept { return cells_; }

    bool operator==(const Grid&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> cells_;
};

/// One training instance. `rho` is the temporal prior in (0,1] (newest
/// sample anchored at 1), `c` the detection confidence (lower = more
/// reliable), `v` the current self-paced weight in [0,1]. `corrupted`
/// is ground truth owned by the simulator; nothing on the optimization
/// path ever reads it.
template <typename FeaturesT, typename LabelT>
struct Sample {
    std::int64_t id = 0;
    FeaturesT features{};
    LabelT label{};
    double rho = 1.0;
    double c = 0.0;
    double v = 1.0;
    bool corrupted = false;
};

template <typename FeaturesT, typename LabelT>
void validate_sample(const Sample<FeaturesT, LabelT>& s) {
    if (!(std::isfinite(s.v) && s.v >= 0.0 && s.v <= 1.0))
        fail(errc::invariant_violation, "sample field v must lie in [0,1], got " + std::to_string(s.v));
    if (!(std::isfinite(s.rho) && s.rho > 0.0 && s.rho <= 1.0))
        fail(errc::invariant_violation, "sample field rho must lie in (0,1], got " + std::to_string(s.rho));
    if (!(std::isfinite(s.c) && s.c >= 0.0))
        fail(errc::invariant_violation, "sample field c must be finite and >= 0, got " + std::to_string(s.c));
}

/// Bounded, id-ordered collection of samples. Single writer; insertion
/// enforces strictly increasing ids and per-sample invariants. Eviction
/// back down to capacity is the replacement policy's job (see
/// tracker.hpp), so size may sit at capacity+1 between an insert and
/// the following replacement pass.
template <typename FeaturesT, typename LabelT>
class TrainingBuffer {
public:
    using sample_type = Sample<FeaturesT, LabelT>;

    TrainingBuffer(std::size_t capacity, double eta, bool normalize_priors = false)
        : capacity_(capacity), eta_(eta), normalize_priors_(normalize_priors) {
        if (capacity_ == 0)
            fail(errc::invariant_violation, "buffer capacity must be >= 1");
        if (!(std::isfinite(eta_) && eta_ >= 0.0 && eta_ < 1.0))
            fail(errc::invariant_violation, "eta must lie in [0,1), got " + std::to_string(eta_));
    }

    void insert(sample_type s) {
        validate_sample(s);
        if (!samples_.empty() && s.id <= samples_.back().id)
            fail(errc::invariant_violation,
                 "sample ids must be strictly increasing: " + std::to_string(s.id) +
                     " after " + std::to_string(samples_.back().id));
        samples_.push_back(std::move(s));
    }

    void erase(std::size_t index) { samples_.erase(samples_.begin() + static_cast<std::ptrdiff_t>(index)); }

    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    std::size_t capacity() const noexcept { return capacity_; }
    double eta() const noexcept { return eta_; }
    bool normalize_priors() const noexcept { return normalize_priors_; }

    sample_type& operator[](std::size_t i) { return samples_[i]; }
    const sample_type& operator[](std::size_t i) const { return samples_[i]; }

    auto begin() { return samples_.begin(); }
    auto end() { return samples_.end(); }
    auto begin() const { return samples_.begin(); }
    auto end() const { return samples_.end(); }

    std::vector<double> weights() const { return field([](const sample_type& s) { return s.v; }); }
    std::vector<double> priors() const { return field([](const sample_type& s) { return s.rho; }); }
    std::vector<double> confidences() const { return field([](const sample_type& s) { return s.c; }); }

private:
    template <typename F>
    std::vector<double> field(F&& get) const {
        std::vector<double> out;
        out.reserve(samples_.size());
        for (const auto& s : samples_) out.push_back(get(s));
        return out;
    }

    std::size_t capacity_;
    double eta_;
    bool normalize_priors_;
    std::vector<sample_type> samples_;
};

/// Geometric stage schedule: pace_at(n) = mu^(n-1) * lambda0 for
/// n = 1..stages, strictly increasing since mu > 1. `xi` trades off
/// training loss against detection confidence in the guided regularizer.
struct PacingSchedule {
    double lambda0 = 1.0;
    double mu = 2.0;
    int stages = 3;
    double xi = 0.0;

    PacingSchedule() = default;
    PacingSchedule(double lambda0_, double mu_, int stages_, double xi_)
        : lambda0(lambda0_), mu(mu_), stages(stages_), xi(xi_) {
        validate();
    }

    void validate() const {
        if (!(std::isfinite(lambda0) && lambda0 > 0.0))
            fail(errc::invariant_violation, "lambda0 must be > 0, got " + std::to_string(lambda0));
        if (!(std::isfinite(mu) && mu > 1.0))
            fail(errc::invariant_violation, "mu must be > 1, got " + std::to_string(mu));
        if (stages < 1)
            fail(errc::invariant_violation, "stages must be >= 1, got " + std::to_string(stages));
        if (!(std::isfinite(xi) && xi >= 0.0))
            fail(errc::invariant_violation, "xi must be >= 0, got " + std::to_string(xi));
    }

    double pace_at(int n) const { return lambda0 * std::pow(mu, n - 1); }

    std::vector<double> paces() const {
        std::vector<double> out(static_cast<std::size_t>(stages));
        for (int n = 1; n <= stages; ++n) out[static_cast<std::size_t>(n - 1)] = pace_at(n);
        return out;
    }
};

/// Validated detection-score grid: finite entries only, non-empty.
class ResponseMap {
public:
    explicit ResponseMap(Grid grid) : grid_(std::move(grid)) {
        if (grid_.rows() == 0 || grid_.cols() == 0)
            fail(errc::invariant_violation, "response map must have positive dimensions");
        for (double x : grid_.cells())
            if (!std::isfinite(x)) fail(errc::non_finite, "response map contains a non-finite value");
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t rows() const noexcept { return grid_.rows(); }
    std::size_t cols() const noexcept { return grid_.cols(); }
    double operator()(std::size_t r, std::size_t c) const { return grid_(r, c); }

private:
    Grid grid_;
};

/// Diagnostics for one stage of the alternating optimization: the
/// objective after every half-step (weight solve / model refit), the
/// final weight vector and how many alternation iterations ran.
struct StageTrace {
    int stage = 0;
    double pace = 0.0;
    std::vector<double> objective;
    std::vector<double> final_weights;
    int iterations = 0;
    std::size_t selected = 0;
};

} // namespace sptrack
