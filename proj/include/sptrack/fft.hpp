#pragma once

// Minimal discrete Fourier transforms for the correlation-filter
// learner. Power-of-two lengths go through an iterative radix-2 FFT;
// anything else falls back to a direct O(n^2) DFT, which is plenty at
// the patch sizes this library works with. Conventions:
//   forward:  X[k] = sum_j x[j] exp(-2*pi*i*j*k/n)
//   inverse:  x[j] = (1/n) sum_k X[k] exp(+2*pi*i*j*k/n)

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "sptrack/core.hpp"

namespace sptrack::fft {

using cpx = std::complex<double>;

inline bool is_pow2(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

inline void radix2(std::vector<cpx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const cpx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cpx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cpx u = a[i + j];
                const cpx t = a[i + j + len / 2] * w;
                a[i + j] = u + t;
                a[i + j + len / 2] = u - t;
                w *= wl;
            }
        }
    }
}

inline void direct_dft(std::vector<cpx>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<cpx> twiddle(n);
    const double base = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) twiddle[m] = cpx(std::cos(base * m), std::sin(base * m));
    std::vector<cpx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cpx acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) acc += a[j] * twiddle[(j * k) % n];
        out[k] = acc;
    }
    a = std::move(out);
}

} // namespace detail

/// In-place 1D transform; the inverse applies the 1/n scale.
inline void transform(std::vector<cpx>& a, bool inverse) {
    if (a.empty()) return;
    if (is_pow2(a.size()))
        detail::radix2(a, inverse);
    else
        detail::direct_dft(a, inverse);
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(a.size());
        for (auto& x : a) x *= scale;
    }
}

struct ComplexGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cpx> cells;

    ComplexGrid() = default;
    ComplexGrid(std::size_t r, std::size_t c) : rows(r), cols(c), cells(r * c) {}

    cpx& operator()(std::size_t r, std::size_t c) { return cells[r * cols + c]; }
    cpx operator()(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
};

namespace detail {

inline void transform2d(ComplexGrid& g, bool inverse) {
    std::vector<cpx> line;
    line.reserve(g.rows > g.cols ? g.rows : g.cols);
    for (std::size_t r = 0; r < g.rows; ++r) {
        line.assign(g.cells.begin() + static_cast<std::ptrdiff_t>(r * g.cols),
                    g.cells.begin() + static_cast<std::ptrdiff_t>((r + 1) * g.cols));
        transform(line, inverse);
        for (std::size_t c = 0; c < g.cols; ++c) g(r, c) = line[c];
    }
    for (std::size_t c = 0; c < g.cols; ++c) {
        line.resize(g.rows);
        for (std::size_t r = 0; r < g.rows; ++r) line[r] = g(r, c);
        transform(line, inverse);
        for (std::size_t r = 0; r < g.rows; ++r) g(r, c) = line[r];
    }
}

} // namespace detail

inline ComplexGrid forward2d(const Grid& g) {
    ComplexGrid out(g.rows(), g.cols());
    for (std::size_t i = 0; i < g.cell_count(); ++i) out.cells[i] = cpx(g.cells()[i], 0.0);
    detail::transform2d(out, false);
    return out;
}

/// Inverse 2D transform of a spectrum known to come from real data;
/// returns the real part.
inline Grid inverse2d_real(ComplexGrid spectrum) {
    detail::transform2d(spectrum, true);
    Grid out(spectrum.rows, spectrum.cols);
    for (std::size_t i = 0; i < out.cell_count(); ++i) out.cells()[i] = spectrum.cells[i].real();
    return out;
}

} // namespace sptrack::fft
