#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "gskit/common.hpp"
#include "gskit/functions.hpp"

namespace gskit {

/// Quadrature box for the numeric transform: samples at (j - M/2) * (2L/M),
/// j = 0..M-1, per axis. The paper's convention is frozen: forward carries no
/// prefactor, the inverse carries (2 pi)^{-n}.
struct FourierSpec {
    double half_width = 12.0;  // L
    int samples = 256;         // M, a power of two

    void validate() const {
        if (!(half_width > 0.0)) fail("bad-params", "fourier half_width must be positive");
        if (samples < 4 || (samples & (samples - 1)) != 0)
            fail("bad-params", "fourier samples must be a power of two >= 4");
    }
};

/// Values on a zero-centered tensor grid with nodes (j - M/2) * spacing.
struct SampledGrid {
    int n = 1;
    int samples = 0;       // M per axis
    double spacing = 0.0;  // grid step
    std::vector<Complex> values;  // row-major over (j_1, ..., j_n)

    double node(int j) const { return (static_cast<double>(j) - 0.5 * samples) * spacing; }
    double half_width() const { return 0.5 * samples * spacing; }

    std::size_t flat_index(const std::vector<int>& j) const {
        std::size_t idx = 0;
        for (int d = 0; d < n; ++d)
            idx = idx * static_cast<std::size_t>(samples) + static_cast<std::size_t>(j[static_cast<std::size_t>(d)]);
        return idx;
    }
};

namespace detail {

/// Iterative radix-2 FFT, no normalization. sign = -1 forward, +1 inverse kernel.
inline void fft_pow2(std::vector<Complex>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/// Apply the 1-D transform along every axis of a row-major tensor.
inline void fft_tensor(std::vector<Complex>& values, int n, int M, int sign) {
    std::size_t stride = 1;
    std::vector<Complex> line(static_cast<std::size_t>(M));
    for (int axis = n - 1; axis >= 0; --axis) {
        const std::size_t total = values.size();
        const std::size_t block = stride * static_cast<std::size_t>(M);
        for (std::size_t start = 0; start < total; start += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int j = 0; j < M; ++j)
                    line[static_cast<std::size_t>(j)] = values[start + off + stride * static_cast<std::size_t>(j)];
                fft_pow2(line, sign);
                for (int j = 0; j < M; ++j)
                    values[start + off + stride * static_cast<std::size_t>(j)] = line[static_cast<std::size_t>(j)];
            }
        }
        stride *= static_cast<std::size_t>(M);
    }
}

inline int parity_sum(const SampledGrid& g, std::size_t flat) {
    int s = 0;
    for (int d = 0; d < g.n; ++d) {
        s += static_cast<int>(flat % static_cast<std::size_t>(g.samples));
        flat /= static_cast<std::size_t>(g.samples);
    }
    return s;
}

/// Zero-centered DFT as function values: out(x_l) = scale * sum_j in(t_j) e^{sign i x_l t_j}.
/// Phase-corrected so outputs are transform values, not DFT bins. M must be a
/// multiple of 4 so the corner phase i^{sign M} is exactly 1.
inline SampledGrid centered_transform(const SampledGrid& in, int sign, double scale) {
    if (in.samples % 4 != 0) fail("bad-params", "centered transform needs M divisible by 4");
    SampledGrid out;
    out.n = in.n;
    out.samples = in.samples;
    out.spacing = 2.0 * M_PI / (static_cast<double>(in.samples) * in.spacing);
    out.values.resize(in.values.size());
    std::vector<Complex> work(in.values.size());
    for (std::size_t i = 0; i < in.values.size(); ++i) {
        const int p = parity_sum(in, i);
        work[i] = (p % 2 == 0 ? 1.0 : -1.0) * in.values[i];
    }
    fft_tensor(work, in.n, in.samples, sign);
    const double amp = scale * std::pow(in.spacing, in.n);
    for (std::size_t i = 0; i < work.size(); ++i) {
        const int p = parity_sum(in, i);
        out.values[i] = amp * (p % 2 == 0 ? 1.0 : -1.0) * work[i];
    }
    return out;
}

}  // namespace detail

/// Closed-form transform within the family: the Gaussian axis maps to decay
/// 1/(4 a_j) with prefactor prod sqrt(pi/a_j); each polynomial factor xi^alpha
/// becomes i^{|alpha|} D^alpha applied to the transformed Gaussian.
inline HermiteGaussian fourier_closed_form(const HermiteGaussian& f) {
    f.validate();
    HermiteGaussian base;
    base.n = f.n;
    base.decay.resize(static_cast<std::size_t>(f.n));
    double pref = 1.0;
    for (int j = 0; j < f.n; ++j) {
        const double a = f.decay[static_cast<std::size_t>(j)];
        base.decay[static_cast<std::size_t>(j)] = 1.0 / (4.0 * a);
        pref *= std::sqrt(M_PI / a);
    }
    base.terms[MultiIndex(static_cast<std::size_t>(f.n), 0)] = 1.0;

    HermiteGaussian out;
    out.n = f.n;
    out.decay = base.decay;
    out.label = f.label.empty() ? "" : "F[" + f.label + "]";
    const Complex i_unit(0.0, 1.0);
    for (const auto& [alpha, c] : f.terms) {
        HermiteGaussian d = derivative_closed_form(base, alpha);
        Complex factor = c * pref;
        for (int r = 0; r < order(alpha); ++r) factor *= i_unit;
        for (const auto& [e, dc] : d.terms) out.terms[e] += factor * dc;
    }
    return out;
}

/// Trapezoid/FFT evaluation of f_hat(x) = int f(xi) e^{-i<x,xi>} d xi on the
/// sampling box. Output nodes are x_l = (l - M/2) pi / L. Signals
/// box-too-small when the boundary samples are not negligible.
inline SampledGrid fourier_numeric(const std::function<Complex(const std::vector<double>&)>& f,
                                   int n, const FourierSpec& spec) {
    spec.validate();
    if (n < 1 || n > 3) fail("bad-params", "numeric transform supports n in {1,2,3}");
    const int M = spec.samples;
    SampledGrid in;
    in.n = n;
    in.samples = M;
    in.spacing = 2.0 * spec.half_width / static_cast<double>(M);
    in.values.resize(static_cast<std::size_t>(std::pow(M, n)));

    double max_abs = 0.0, boundary_abs = 0.0;
    std::vector<int> j(static_cast<std::size_t>(n), 0);
    std::vector<double> xi(static_cast<std::size_t>(n));
    for (std::size_t idx = 0; idx < in.values.size(); ++idx) {
        bool boundary = false;
        for (int d = 0; d < n; ++d) {
            xi[static_cast<std::size_t>(d)] = in.node(j[static_cast<std::size_t>(d)]);
            if (j[static_cast<std::size_t>(d)] == 0 || j[static_cast<std::size_t>(d)] == M - 1) boundary = true;
        }
        const Complex v = f(xi);
        in.values[idx] = v;
        const double av = std::abs(v);
        max_abs = std::fmax(max_abs, av);
        if (boundary) boundary_abs = std::fmax(boundary_abs, av);
        int d = n - 1;
        while (d >= 0 && ++j[static_cast<std::size_t>(d)] == M) {
            j[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
    }
    if (boundary_abs > 1e-14 * max_abs)
        fail("box-too-small", "boundary samples are " + std::to_string(boundary_abs / max_abs) +
                                  " of the peak; enlarge the box");
    return detail::centered_transform(in, -1, 1.0);
}

inline SampledGrid fourier_numeric(const HermiteGaussian& f, const FourierSpec& spec) {
    f.validate();
    return fourier_numeric([&f](const std::vector<double>& x) { return eval_real(f, x); }, f.n,
                           spec);
}

/// Plain sampling of a function onto the transform grid (no transform).
inline SampledGrid sample_grid(const HermiteGaussian& f, const FourierSpec& spec) {
    f.validate();
    spec.validate();
    SampledGrid out;
    out.n = f.n;
    out.samples = spec.samples;
    out.spacing = 2.0 * spec.half_width / static_cast<double>(spec.samples);
    out.values.resize(static_cast<std::size_t>(std::pow(spec.samples, f.n)));
    std::vector<int> j(static_cast<std::size_t>(f.n), 0);
    std::vector<double> x(static_cast<std::size_t>(f.n));
    for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
        for (int d = 0; d < f.n; ++d) x[static_cast<std::size_t>(d)] = out.node(j[static_cast<std::size_t>(d)]);
        out.values[idx] = eval_real(f, x);
        int d = f.n - 1;
        while (d >= 0 && ++j[static_cast<std::size_t>(d)] == spec.samples) {
            j[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
    }
    return out;
}

/// Inverse transform of sampled values: (2 pi)^{-n} int g(x) e^{+i<x,xi>} dx
/// on the grid the samples live on. Round-trips fourier_numeric exactly onto
/// the original nodes.
inline SampledGrid inverse_fourier(const SampledGrid& g) {
    if (g.samples < 4) fail("bad-params", "inverse transform needs a sampled grid");
    return detail::centered_transform(g, +1, std::pow(2.0 * M_PI, -g.n));
}

}  // namespace gskit
