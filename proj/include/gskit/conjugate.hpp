#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gskit/common.hpp"
#include "gskit/multiindex.hpp"
#include "gskit/weights.hpp"

namespace gskit {

/// A sampled real function on a finite increasing grid in [0, inf).
struct GridFunction {
    std::vector<double> xs;
    std::vector<double> ys;

    void validate() const {
        if (xs.size() < 2 || xs.size() != ys.size())
            fail("bad-grid", "GridFunction needs >= 2 matched samples");
        if (!(xs.front() >= 0.0)) fail("bad-grid", "GridFunction domain starts below 0");
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i] > xs[i - 1])) fail("bad-grid", "GridFunction xs must be strictly increasing");
        for (double y : ys)
            if (!std::isfinite(y)) fail("bad-grid", "GridFunction values must be finite");
    }
};

/// Discrete Young conjugate: values[s] = max_j (slope_s * xs[j] - ys[j]),
/// with the winning source index per slope.
struct ConjugateResult {
    std::vector<double> slopes;
    std::vector<double> values;
    std::vector<std::size_t> argmax_index;
};

namespace detail {

// Shared by the brute-force and fast paths so winning values are bit-identical.
inline double support_value(double slope, const GridFunction& g, std::size_t j) {
    return slope * g.xs[j] - g.ys[j];
}

/// Indices of the lower convex envelope of (xs, ys), first and last kept.
/// Collinear interior points are dropped.
inline std::vector<std::size_t> lower_envelope(const GridFunction& g) {
    std::vector<std::size_t> hull;
    hull.reserve(g.xs.size());
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2];
            const std::size_t b = hull[hull.size() - 1];
            const double cross = (g.xs[b] - g.xs[a]) * (g.ys[i] - g.ys[a]) -
                                 (g.ys[b] - g.ys[a]) * (g.xs[i] - g.xs[a]);
            if (cross <= 0.0) hull.pop_back();  // b on or above chord a->i
            else break;
        }
        hull.push_back(i);
    }
    return hull;
}

}  // namespace detail

/// Reference O(N*M) transform; the oracle the fast path must match bit-for-bit.
inline ConjugateResult conjugate_grid_brute(const GridFunction& g,
                                            const std::vector<double>& slopes) {
    g.validate();
    if (slopes.empty()) fail("bad-grid", "conjugate needs at least one slope");
    ConjugateResult out;
    out.slopes = slopes;
    out.values.resize(slopes.size());
    out.argmax_index.resize(slopes.size());
    for (std::size_t s = 0; s < slopes.size(); ++s) {
        double best = detail::support_value(slopes[s], g, 0);
        std::size_t arg = 0;
        for (std::size_t j = 1; j < g.xs.size(); ++j) {
            const double v = detail::support_value(slopes[s], g, j);
            if (v > best) { best = v; arg = j; }
        }
        out.values[s] = best;
        out.argmax_index[s] = arg;
    }
    return out;
}

/// Fast discrete Legendre transform: lower convex envelope, then a single
/// monotone argmax sweep over increasing slopes. Linear after the envelope.
inline ConjugateResult conjugate_grid(const GridFunction& g, const std::vector<double>& slopes) {
    g.validate();
    if (slopes.empty()) fail("bad-grid", "conjugate needs at least one slope");
    for (std::size_t i = 1; i < slopes.size(); ++i)
        if (!(slopes[i] > slopes[i - 1])) fail("bad-grid", "slopes must be strictly increasing");

    const auto hull = detail::lower_envelope(g);
    ConjugateResult out;
    out.slopes = slopes;
    out.values.resize(slopes.size());
    out.argmax_index.resize(slopes.size());
    std::size_t p = 0;
    for (std::size_t s = 0; s < slopes.size(); ++s) {
        const double sl = slopes[s];
        while (p + 1 < hull.size() &&
               detail::support_value(sl, g, hull[p + 1]) > detail::support_value(sl, g, hull[p]))
            ++p;
        out.values[s] = detail::support_value(sl, g, hull[p]);
        out.argmax_index[s] = hull[p];
    }
    return out;
}

/// (g*)* sampled at xs_out through the slope grid. Never exceeds g; equals the
/// lower convex envelope of the samples within grid resolution.
inline GridFunction biconjugate(const GridFunction& g, const std::vector<double>& slopes,
                                const std::vector<double>& xs_out) {
    const ConjugateResult star = conjugate_grid(g, slopes);
    GridFunction star_fn{star.slopes, star.values};
    if (star.slopes.size() == 1) {
        // Degenerate slope grid: (g*)*(x) = x*s0 - g*(s0).
        GridFunction out;
        out.xs = xs_out;
        out.ys.reserve(xs_out.size());
        for (double x : xs_out) out.ys.push_back(x * star.slopes[0] - star.values[0]);
        return out;
    }
    const ConjugateResult back = conjugate_grid(star_fn, xs_out);
    return GridFunction{xs_out, back.values};
}

// ---------------------------------------------------------------------------
// Adaptive conjugation of callables on [0, inf)

/// g*(x) = sup_{y>=0} (x y - g(y)) for a callable g.
/// The bracket starts at y_hi and doubles until the objective has decreased
/// over the last octave (superlinear g guarantees this), capped at 2^60.
/// Convex g: ternary search on the concave objective. Otherwise: coarse scan
/// plus golden-section refinement. y = 0 is always a candidate maximizer.
inline double conjugate_adaptive(const std::function<double(double)>& g, bool convex_flag,
                                 double x, double y_hi = 1.0, double tol = 1e-10) {
    if (!(x >= 0.0)) fail("bad-params", "conjugate_adaptive needs x >= 0");
    const auto h = [&](double y) { return x * y - g(y); };

    const double cap = std::ldexp(1.0, 60);
    double hi = std::fmax(y_hi, 1.0);
    while (!(h(hi) < h(0.5 * hi))) {
        hi *= 2.0;
        if (hi > cap)
            fail("no-decay", "objective still increasing at y = 2^60 (x=" + std::to_string(x) + ")");
    }

    double best = h(0.0);
    if (convex_flag) {
        double lo = 0.0, up = hi;
        int iter = 0;
        while (up - lo > tol && iter++ < 400) {
            const double m1 = lo + (up - lo) / 3.0;
            const double m2 = up - (up - lo) / 3.0;
            if (h(m1) < h(m2)) lo = m1;
            else up = m2;
        }
        best = std::fmax(best, h(0.5 * (lo + up)));
        return best;
    }

    // Coarse scan, then golden-section inside the winning bracket.
    constexpr std::size_t kScan = 1024;
    double scan_best = best;
    std::size_t scan_arg = 0;
    for (std::size_t i = 0; i <= kScan; ++i) {
        const double y = hi * static_cast<double>(i) / static_cast<double>(kScan);
        const double v = h(y);
        if (v > scan_best) { scan_best = v; scan_arg = i; }
    }
    const double step = hi / static_cast<double>(kScan);
    double lo = scan_arg == 0 ? 0.0 : (static_cast<double>(scan_arg) - 1.0) * step;
    double up = std::fmin(hi, (static_cast<double>(scan_arg) + 1.0) * step);
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = up;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = h(c), fd = h(d);
    int iter = 0;
    while (b - a > tol && iter++ < 300) {
        if (fc > fd) { b = d; d = c; fd = fc; c = b - inv_phi * (b - a); fc = h(c); }
        else { a = c; c = d; fc = fd; d = a + inv_phi * (b - a); fd = h(d); }
    }
    return std::fmax(scan_best, std::fmax(fc, fd));
}

inline double conjugate_adaptive(const WeightFunction& g, double x, double y_hi = 1.0,
                                 double tol = 1e-10) {
    return conjugate_adaptive(g.evaluator, g.convex, x, y_hi, tol);
}

/// Memoized radial conjugate r -> g*(r): adaptive values on {0} plus a
/// geometric grid, cubic Hermite interpolation in between, rebuilt with a
/// wider range (and proportionally more nodes) when queried past the end.
class RadialConjugateCache {
public:
    RadialConjugateCache() = default;
    RadialConjugateCache(std::function<double(double)> g, bool convex, double hi = 1e3,
                         std::size_t nodes = 512, double lo = 1e-3)
        : g_(std::move(g)), convex_(convex), lo_(lo), hi_(hi), base_nodes_(nodes) {
        rebuild();
    }

    double operator()(double r) {
        if (!(r >= 0.0)) fail("bad-params", "radial conjugate cache needs r >= 0");
        if (r > hi_) {
            while (hi_ < r) hi_ *= 2.0;
            rebuild();
        }
        return interpolate(r);
    }

    double hi() const { return hi_; }

private:
    void rebuild() {
        // Keep the geometric spacing ratio at or below the 512-node default.
        const double default_ratio = std::log(1e3 / 1e-3) / 511.0;
        const std::size_t span_nodes =
            static_cast<std::size_t>(std::ceil(std::log(hi_ / lo_) / default_ratio)) + 1;
        const std::size_t count = std::max(base_nodes_, span_nodes);
        xs_ = geometric_grid(lo_, hi_, count, true);
        ys_.resize(xs_.size());
        for (std::size_t i = 0; i < xs_.size(); ++i)
            ys_[i] = conjugate_adaptive(g_, convex_, xs_[i]);
    }

    double interpolate(double r) const {
        if (r <= xs_.front()) return ys_.front();
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), r);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        if (i >= xs_.size()) i = xs_.size() - 1;
        const std::size_t i0 = i - 1, i1 = i;
        const double x0 = xs_[i0], x1 = xs_[i1], hseg = x1 - x0;
        const double t = (r - x0) / hseg;
        const double m0 = tangent(i0) * hseg, m1 = tangent(i1) * hseg;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * ys_[i0] + (t3 - 2 * t2 + t) * m0 +
               (-2 * t3 + 3 * t2) * ys_[i1] + (t3 - t2) * m1;
    }

    // Three-point slope, exact for quadratics on nonuniform nodes.
    double tangent(std::size_t i) const {
        const std::size_t n = xs_.size();
        if (i == 0) return (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
        if (i == n - 1) return (ys_[n - 1] - ys_[n - 2]) / (xs_[n - 1] - xs_[n - 2]);
        const double hl = xs_[i] - xs_[i - 1], hr = xs_[i + 1] - xs_[i];
        const double sl = (ys_[i] - ys_[i - 1]) / hl, sr = (ys_[i + 1] - ys_[i]) / hr;
        return (sr * hl + sl * hr) / (hl + hr);
    }

    std::function<double(double)> g_;
    bool convex_ = false;
    double lo_ = 1e-3, hi_ = 1e3;
    std::size_t base_nodes_ = 512;
    std::vector<double> xs_, ys_;
};

// ---------------------------------------------------------------------------
// Lemma-level margin checks

struct MarginProfile {
    std::vector<double> xs;
    std::vector<double> margins;
    double min_margin = kInf;
    bool pass = false;

    void push(double x, double m) {
        xs.push_back(x);
        margins.push_back(m);
        min_margin = std::fmin(min_margin, m);
    }
    void finish() { pass = min_margin >= -eps_check(min_margin); }
};

namespace detail {

// Exp-substituted weights blow up fast; hypothesis scans stay on a domain
// where e^x arguments remain representable.
inline const std::vector<double>& exp_domain_grid() {
    static const std::vector<double> grid = geometric_grid(1e-3, 30.0, 512, true);
    return grid;
}

inline void require_superlinear(const WeightFunction& g, const std::vector<double>& grid,
                                const std::string& who) {
    double ratio = 0.0;
    if (!superlinear_proxy(g, grid, 10.0, &ratio))
        fail("hypothesis-violated", who + " is not superlinear on the grid (right-end ratio " +
                                        std::to_string(ratio) + " < 10)");
}

}  // namespace detail

/// Lemma: g continuous with g(x) >= a x - b implies
/// (g[e])*(x) <= x ln(x/a) - x + b for x > 0. Returns the slack profile.
inline MarginProfile lemma1_margin(const WeightFunction& g, double a, double b,
                                   const std::vector<double>& x_grid) {
    if (!(a > 0.0)) fail("bad-params", "lemma1 needs a > 0");
    for (double x : default_verification_grid())
        if (g(x) < a * x - b - eps_check(a * x - b))
            fail("hypothesis-violated",
                 "g(x) < ax - b at x = " + std::to_string(x) + " (lemma1 lower bound)");

    const WeightFunction ge = exp_substitute(g);
    MarginProfile prof;
    for (double x : x_grid) {
        if (!(x > 0.0)) continue;
        const double bound = x * std::log(x / a) - x + b;
        prof.push(x, bound - conjugate_adaptive(ge, x));
    }
    prof.finish();
    return prof;
}

/// Corollary: grid witness A_M = max over x_grid of (g[e])*(x) - x ln(x/M) + x.
inline double corollary1_bound(const WeightFunction& g, double M,
                               const std::vector<double>& x_grid) {
    if (!(M > 0.0)) fail("bad-params", "corollary1 needs M > 0");
    detail::require_superlinear(g, default_verification_grid(), "g");
    const WeightFunction ge = exp_substitute(g);
    std::vector<double> positives;
    for (double x : x_grid)
        if (x > 0.0) positives.push_back(x);
    if (positives.empty()) fail("bad-grid", "corollary1 needs positive grid points");
    const auto st = detail::scan_max(positives, [&](double x) {
        return conjugate_adaptive(ge, x) - x * std::log(x / M) + x;
    });
    if (st.tail_monotone)
        fail("unbounded-witness", "A_M objective still climbing at grid end");
    return st.max_value;
}

/// Partial sums of sum_{|alpha| in Z_+^dim} e^{(g[e])*(|alpha|)} / (b^|alpha| |alpha|!),
/// grouped by shells (multiplicity C(k+dim-1, dim-1)). Terms in log space.
struct SeriesReport {
    std::vector<double> partial_sums;
    double sum = 0.0;
    bool converged = false;
};

inline SeriesReport remark1_series(const WeightFunction& g, double b, int j_max, int dim = 1) {
    if (!(b > 0.0)) fail("bad-params", "remark1 needs b > 0");
    if (j_max < 10) fail("bad-params", "remark1 needs j_max >= 10");
    if (dim < 1) fail("bad-params", "remark1 needs dim >= 1");
    const WeightFunction ge = exp_substitute(g);
    SeriesReport rep;
    rep.partial_sums.reserve(static_cast<std::size_t>(j_max) + 1);
    double sum = 0.0;
    for (int j = 0; j <= j_max; ++j) {
        const double log_term = conjugate_adaptive(ge, static_cast<double>(j)) -
                                static_cast<double>(j) * std::log(b) - log_factorial(j) +
                                std::log(shell_multiplicity(dim, j));
        if (log_term > 700.0)
            fail("overflow-guard", "remark1 log-term exceeds 700 at j = " + std::to_string(j));
        const double term = std::exp(log_term);
        sum += term;
        rep.partial_sums.push_back(sum);
        if (j >= 10 && term < 1e-12 * sum) {
            rep.converged = true;
            break;
        }
    }
    rep.sum = sum;
    return rep;
}

/// Lemma: 2u(x) <= v(x+tau) + C implies
/// v*(x+y) <= u*(x) + u*(y) + tau(x+y) + A with A = max(C, 2 inf u - inf v).
struct Lemma2Result {
    double A = 0.0;
    std::vector<std::array<double, 3>> profile;  // (x, y, margin)
    double min_margin = kInf;
    bool pass = false;
};

inline Lemma2Result lemma2_constant(const WeightFunction& u, const WeightFunction& v, double tau,
                                    double C, const std::vector<double>& xy_grid,
                                    const std::vector<double>& hypothesis_grid = {}) {
    if (!(tau > 0.0)) fail("bad-params", "lemma2 needs tau > 0");
    const auto& hgrid = hypothesis_grid.empty() ? default_verification_grid() : hypothesis_grid;
    detail::require_superlinear(u, hgrid, "u");
    detail::require_superlinear(v, hgrid, "v");
    double inf_u = kInf, inf_v = kInf;
    for (double x : hgrid) {
        const double vu = u(x), vv = v(x);
        if (2.0 * vu > v(x + tau) + C + eps_check(C + vv))
            fail("hypothesis-violated", "2u(x) > v(x+tau) + C at x = " + std::to_string(x));
        inf_u = std::fmin(inf_u, vu);
        inf_v = std::fmin(inf_v, vv);
    }

    Lemma2Result res;
    res.A = std::fmax(C, 2.0 * inf_u - inf_v);
    std::vector<double> ustar(xy_grid.size());
    for (std::size_t i = 0; i < xy_grid.size(); ++i) ustar[i] = conjugate_adaptive(u, xy_grid[i]);
    for (std::size_t i = 0; i < xy_grid.size(); ++i) {
        for (std::size_t j = i; j < xy_grid.size(); ++j) {
            const double x = xy_grid[i], y = xy_grid[j];
            const double margin =
                ustar[i] + ustar[j] + tau * (x + y) + res.A - conjugate_adaptive(v, x + y);
            res.profile.push_back({x, y, margin});
            res.min_margin = std::fmin(res.min_margin, margin);
        }
    }
    res.pass = res.min_margin >= -eps_check(res.min_margin);
    return res;
}

/// Lemma: u(sigma x) <= v(x) + gamma (with u[e], v[e] superlinear) implies
/// (u[e])*(x) - (v[e])*(x) >= x ln sigma - gamma.
inline MarginProfile lemma3_gap(const WeightFunction& u, const WeightFunction& v, double sigma,
                                double gamma, const std::vector<double>& x_grid) {
    if (!(sigma > 1.0)) fail("bad-params", "lemma3 needs sigma > 1");
    const auto& hgrid = detail::exp_domain_grid();
    const WeightFunction ue = exp_substitute(u), ve = exp_substitute(v);
    detail::require_superlinear(ue, hgrid, "u[e]");
    detail::require_superlinear(ve, hgrid, "v[e]");
    for (double x : hgrid) {
        const double rhs = v(x) + gamma;
        if (u(sigma * x) > rhs + eps_check(rhs))
            fail("hypothesis-violated", "u(sigma x) > v(x) + gamma at x = " + std::to_string(x));
    }
    MarginProfile prof;
    for (double x : x_grid) {
        const double gap = conjugate_adaptive(ue, x) - conjugate_adaptive(ve, x);
        prof.push(x, gap - x * std::log(sigma) + gamma);
    }
    prof.finish();
    return prof;
}

/// Finite-grid proxy for Lemma: [g*((1+delta)x) - g*(x)] / x -> infinity.
struct DivergenceProxy {
    std::vector<double> xs;
    std::vector<double> ratios;
    bool eventually_increasing = false;
    bool last_exceeds_mid = false;
    bool pass = false;
};

inline DivergenceProxy lemma5_gap_growth(const WeightFunction& g, double delta,
                                         const std::vector<double>& x_grid) {
    if (!(delta > 0.0)) fail("bad-params", "lemma5 needs delta > 0");
    detail::require_superlinear(g, default_verification_grid(), "g");
    DivergenceProxy out;
    for (double x : x_grid) {
        if (!(x > 0.0)) continue;
        const double ratio =
            (conjugate_adaptive(g, (1.0 + delta) * x) - conjugate_adaptive(g, x)) / x;
        out.xs.push_back(x);
        out.ratios.push_back(ratio);
    }
    if (out.ratios.size() < 4) fail("bad-grid", "lemma5 needs more positive grid points");
    const std::size_t tail = out.ratios.size() - out.ratios.size() / 4;
    out.eventually_increasing = true;
    for (std::size_t i = tail; i < out.ratios.size(); ++i)
        if (out.ratios[i] + eps_check(out.ratios[i]) < out.ratios[i - 1]) {
            out.eventually_increasing = false;
            break;
        }
    out.last_exceeds_mid = out.ratios.back() > out.ratios[out.ratios.size() / 2];
    out.pass = out.eventually_increasing && out.last_exceeds_mid;
    return out;
}

/// Two-sided sandwich S(t) = (u[e])*(t) + (u*[e])*(t):
/// upper bound S(t) <= t ln t - t always; lower bound within a constant K.
/// K_witness is the grid max of t ln t - t - S(t).
struct Lemma67Result {
    std::vector<double> ts;
    std::vector<double> upper_margins;  // t ln t - t - S(t), must be >= -eps
    std::vector<double> lower_margins;  // S(t) - (t ln t - t - K_witness)
    double K_witness = 0.0;
    bool pass_upper = false;
};

inline Lemma67Result lemma67_sandwich(const WeightFunction& u, const std::vector<double>& t_grid) {
    if (!u.convex) fail("convexity-required", "lemma67 needs a convex weight");
    detail::require_superlinear(u, default_verification_grid(), "u");

    const WeightFunction ue = exp_substitute(u);
    RadialConjugateCache ustar(u.evaluator, u.convex, 1e4);
    auto ustar_e = [&ustar](double y) { return ustar(std::exp(y)); };

    Lemma67Result res;
    double min_upper = kInf;
    for (double t : t_grid) {
        if (!(t > 0.0)) continue;
        const double S = conjugate_adaptive(ue, t) +
                         conjugate_adaptive(ustar_e, /*convex=*/false, t);
        const double upper = xlogx(t) - t - S;
        res.ts.push_back(t);
        res.upper_margins.push_back(upper);
        min_upper = std::fmin(min_upper, upper);
        res.K_witness = std::fmax(res.K_witness, upper);
    }
    res.lower_margins.reserve(res.ts.size());
    for (double m : res.upper_margins) res.lower_margins.push_back(res.K_witness - m);
    res.pass_upper = min_upper >= -eps_check(min_upper);
    return res;
}

/// Biconjugate shift bound (psi_k*)*(x) + A x <= (psi_{k+1}*)*(x) + C(k, A),
/// with C(k, A) the witnessed i2 constant of the family.
inline MarginProfile ineq7_shift(const WeightFamily& family, int k, double A,
                                 const std::vector<double>& x_grid) {
    const double C = family.witness_i2(k, A);
    const WeightFunction psi_k = exp_substitute(family.member(k));
    const WeightFunction psi_k1 = exp_substitute(family.member(k + 1));
    RadialConjugateCache psi_k_star(psi_k.evaluator, false, 64.0);
    RadialConjugateCache psi_k1_star(psi_k1.evaluator, false, 64.0);
    auto lhs_fn = [&psi_k_star](double y) { return psi_k_star(y); };
    auto rhs_fn = [&psi_k1_star](double y) { return psi_k1_star(y); };
    MarginProfile prof;
    for (double x : x_grid) {
        const double lhs = conjugate_adaptive(lhs_fn, false, x) + A * x;
        const double rhs = conjugate_adaptive(rhs_fn, false, x) + C;
        prof.push(x, rhs - lhs);
    }
    prof.finish();
    return prof;
}

/// Subadditivity with shift: psi_{k+1}*(x+y) <= psi_k*(x) + psi_k*(y)
/// + b_k (x+y) + A_k, where b_k = ln h_k and A_k comes from the
/// two-weight lemma applied to (psi_k, psi_{k+1}).
struct Ineq16Result {
    double b_k = 0.0;
    double A_k = 0.0;
    Lemma2Result inner;
};

inline Ineq16Result ineq16_subadd(const WeightFamily& family, int k,
                                  const std::vector<double>& xy_grid, double h = 2.0) {
    const double l_k = family.witness_i5(k, h);
    Ineq16Result res;
    res.b_k = std::log(h);
    res.inner = lemma2_constant(exp_substitute(family.member(k)),
                                exp_substitute(family.member(k + 1)), res.b_k, l_k, xy_grid,
                                detail::exp_domain_grid());
    res.A_k = res.inner.A;
    return res;
}

}  // namespace gskit
