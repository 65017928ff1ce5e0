#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gskit/common.hpp"
#include "gskit/conjugate.hpp"
#include "gskit/functions.hpp"
#include "gskit/multiindex.hpp"
#include "gskit/weights.hpp"

namespace gskit {

/// Box scan controls for all sup searches.
struct SupSearchConfig {
    double half_width = 10.0;
    int points_per_axis = 33;  // odd, includes 0
    int refine_rounds = 3;
    double growth = 1.6;
    int max_expansions = 24;
    double boundary_ratio = 1e-9;  // stop growing when boundary <= ratio * sup

    void validate() const {
        if (points_per_axis < 33 || points_per_axis % 2 == 0)
            fail("bad-params", "points_per_axis must be odd and >= 33");
        if (refine_rounds < 1) fail("bad-params", "refine_rounds must be >= 1");
        if (!(growth > 1.0)) fail("bad-params", "growth factor must exceed 1");
        if (!(half_width > 0.0)) fail("bad-params", "half_width must be positive");
    }
};

/// A computed sup with its witness and truncation certificate.
struct SeminormValue {
    double value = 0.0;
    double log_value = kNegInf;
    std::vector<double> witness_x;
    std::vector<double> witness_y;  // imaginary part, for the entire-function norms
    MultiIndex witness_alpha;
    MultiIndex witness_beta;
    int witness_k = -1;
    int trunc_alpha = 0, trunc_beta = 0, trunc_k = 0;
    double tail_bound = 0.0;
    double tail_ratio = 0.0;
    bool converged = false;
};

/// Surface area of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
inline double sphere_area(int n) {
    if (n < 1) fail("bad-params", "sphere_area needs n >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Per-family conjugate calculus with the memoized inner-loop weights:
/// psi_nu* at integers (exact adaptive), and radial interpolation caches for
/// phi_nu* and (psi_nu*)*. Build one per job; not thread-shared.
class FamilyCalculus {
public:
    explicit FamilyCalculus(WeightFamily family) : family_(std::move(family)) {}
    FamilyCalculus(const FamilyCalculus&) = delete;
    FamilyCalculus& operator=(const FamilyCalculus&) = delete;

    const WeightFamily& family() const { return family_; }

    double phi(int nu, double t) const { return family_.member(nu)(t); }

    const WeightFunction& psi(int nu) {
        auto it = psi_.find(nu);
        if (it == psi_.end()) it = psi_.emplace(nu, exp_substitute(family_.member(nu))).first;
        return it->second;
    }

    /// psi_nu*(k) at integer k, memoized per (nu, k).
    double psi_star(int nu, int k) {
        const auto key = std::make_pair(nu, k);
        auto it = psi_star_int_.find(key);
        if (it != psi_star_int_.end()) return it->second;
        const double v = conjugate_adaptive(psi(nu), static_cast<double>(k));
        return psi_star_int_.emplace(key, v).first->second;
    }

    /// psi_nu*(x) at real argument (uncached; used by margin grids).
    double psi_star_cont(int nu, double x) { return conjugate_adaptive(psi(nu), x); }

    RadialConjugateCache& phi_star_cache(int nu) {
        auto it = phi_star_.find(nu);
        if (it == phi_star_.end()) {
            const WeightFunction& w = family_.member(nu);
            it = phi_star_.emplace(nu, RadialConjugateCache(w.evaluator, w.convex, 128.0)).first;
        }
        return it->second;
    }

    RadialConjugateCache& psi_star_cache(int nu) {
        auto it = psi_star_c_.find(nu);
        if (it == psi_star_c_.end()) {
            const WeightFunction& w = psi(nu);
            it = psi_star_c_.emplace(nu, RadialConjugateCache(w.evaluator, w.convex, 256.0)).first;
        }
        return it->second;
    }

    /// (psi_nu*)* by two-stage adaptive conjugation: conjugate of the stage-1
    /// radial cache. Conjugates are convex, so the outer search is ternary.
    RadialConjugateCache& psi_star_star_cache(int nu) {
        auto it = psi_ss_.find(nu);
        if (it == psi_ss_.end()) {
            RadialConjugateCache& inner = psi_star_cache(nu);
            auto fn = [&inner](double y) { return inner(y); };
            it = psi_ss_.emplace(nu, RadialConjugateCache(fn, /*convex=*/true, 8.0)).first;
        }
        return it->second;
    }

    double phi_star(int nu, double r) { return phi_star_cache(nu)(r); }
    double psi_star_star(int nu, double s) { return psi_star_star_cache(nu)(s); }

private:
    WeightFamily family_;
    std::map<int, WeightFunction> psi_;
    std::map<std::pair<int, int>, double> psi_star_int_;
    std::map<int, RadialConjugateCache> phi_star_;
    std::map<int, RadialConjugateCache> psi_star_c_;
    std::map<int, RadialConjugateCache> psi_ss_;
};

namespace detail {

struct SupOutcome {
    double log_max = kNegInf;
    std::vector<double> arg;
    bool boundary_ok = false;
    bool stable = false;
    double half_width = 0.0;
};

inline std::vector<double> symmetric_axis(double half_width, int points) {
    std::vector<double> axis(static_cast<std::size_t>(points));
    const int mid = (points - 1) / 2;
    axis[static_cast<std::size_t>(mid)] = 0.0;
    for (int i = 1; i <= mid; ++i) {
        const double v = half_width * static_cast<double>(i) / static_cast<double>(mid);
        axis[static_cast<std::size_t>(mid + i)] = v;
        axis[static_cast<std::size_t>(mid - i)] = -v;
    }
    return axis;
}

struct BoxScan {
    double log_max = kNegInf;
    double boundary_log_max = kNegInf;
    std::vector<double> arg;
    bool argmax_outer = false;
};

template <typename F>
BoxScan scan_box(F&& obj, int dims, const std::vector<std::vector<double>>& axes) {
    BoxScan out;
    out.arg.assign(static_cast<std::size_t>(dims), 0.0);
    std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
    std::vector<double> pt(static_cast<std::size_t>(dims), 0.0);
    while (true) {
        bool on_boundary = false, outer = false;
        for (int d = 0; d < dims; ++d) {
            const auto& ax = axes[static_cast<std::size_t>(d)];
            const std::size_t i = idx[static_cast<std::size_t>(d)];
            pt[static_cast<std::size_t>(d)] = ax[i];
            if (i == 0 || i + 1 == ax.size()) on_boundary = true;
            if (std::fabs(ax[i]) >= 0.8 * ax.back()) outer = true;
        }
        const double v = obj(pt);
        if (v > out.log_max) {
            out.log_max = v;
            out.arg = pt;
            out.argmax_outer = outer;
        }
        if (on_boundary) out.boundary_log_max = std::fmax(out.boundary_log_max, v);
        int d = dims - 1;
        while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == axes[static_cast<std::size_t>(d)].size()) {
            idx[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
    }
    return out;
}

/// Zoomed rescans around the argmax of a coarse box scan.
template <typename F>
void refine_around(F&& obj, int dims, const SupSearchConfig& cfg, double box_half_width,
                   double& log_max, std::vector<double>& arg) {
    if (log_max == kNegInf) return;
    double h = 2.0 * box_half_width / static_cast<double>(cfg.points_per_axis - 1);
    for (int round = 0; round < cfg.refine_rounds; ++round) {
        std::vector<std::vector<double>> axes;
        axes.reserve(static_cast<std::size_t>(dims));
        for (int d = 0; d < dims; ++d) {
            std::vector<double> ax(static_cast<std::size_t>(cfg.points_per_axis));
            for (int i = 0; i < cfg.points_per_axis; ++i)
                ax[static_cast<std::size_t>(i)] =
                    arg[static_cast<std::size_t>(d)] +
                    h * (2.0 * static_cast<double>(i) / static_cast<double>(cfg.points_per_axis - 1) - 1.0);
            axes.push_back(std::move(ax));
        }
        const auto local = scan_box(obj, dims, axes);
        if (local.log_max > log_max) {
            log_max = local.log_max;
            arg = local.arg;
        }
        h = 2.0 * h / static_cast<double>(cfg.points_per_axis - 1);
    }
}

/// Box-expansion sup search in log space. Grows the box until the boundary
/// falls below boundary_ratio times the running sup; strong growth with an
/// outer argmax through two consecutive expansions means the weight loses to
/// the objective and the sup does not exist. Stability compares the refined
/// value against a refined rescan on the next larger box.
template <typename F>
SupOutcome sup_search(F&& obj, int dims, const SupSearchConfig& cfg, const std::string& who) {
    cfg.validate();
    double X = cfg.half_width;
    const double log_ratio = std::log(cfg.boundary_ratio);
    SupOutcome out;
    double prev = kNegInf;
    bool have_prev = false;
    int grow_count = 0;
    int expansions = 0;
    BoxScan scan;
    while (true) {
        std::vector<std::vector<double>> axes(static_cast<std::size_t>(dims),
                                              symmetric_axis(X, cfg.points_per_axis));
        scan = scan_box(obj, dims, axes);
        if (have_prev) {
            const bool grew = scan.log_max > prev + std::log(1.05);
            if (grew && scan.argmax_outer) {
                if (++grow_count >= 2)
                    fail("weight-too-weak",
                         who + ": objective grew through two consecutive box expansions");
            } else {
                grow_count = 0;
            }
        }
        if (scan.boundary_log_max <= scan.log_max + log_ratio) {
            out.boundary_ok = true;
            break;
        }
        if (expansions >= cfg.max_expansions) break;
        prev = scan.log_max;
        have_prev = true;
        X *= cfg.growth;
        ++expansions;
    }
    out.log_max = scan.log_max;
    out.arg = scan.arg;
    out.half_width = X;
    refine_around(obj, dims, cfg, X, out.log_max, out.arg);

    if (out.log_max == kNegInf) {
        out.stable = true;  // identically -inf objective (zero function)
        return out;
    }
    // One confirmation pass on the grown box, refined the same way.
    const double Xc = X * cfg.growth;
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(dims),
                                          symmetric_axis(Xc, cfg.points_per_axis));
    auto confirm = scan_box(obj, dims, axes);
    refine_around(obj, dims, cfg, Xc, confirm.log_max, confirm.arg);
    out.stable = std::fabs(confirm.log_max - out.log_max) < 1e-3;
    if (confirm.log_max > out.log_max) {
        out.log_max = confirm.log_max;
        out.arg = confirm.arg;
    }
    return out;
}

inline double norm2(const double* v, int n) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += v[j] * v[j];
    return std::sqrt(s);
}

inline double norm_inf(const double* v, int n) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s = std::fmax(s, std::fabs(v[j]));
    return s;
}

/// log |f(x + iy)| for a Hermite-Gaussian: log|p(z)| + sum a_j (y_j^2 - x_j^2).
inline double log_abs_entire(const HermiteGaussian& f, const std::vector<double>& pt) {
    const int n = f.n;
    std::vector<Complex> z(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        z[static_cast<std::size_t>(j)] = Complex(pt[static_cast<std::size_t>(j)], pt[static_cast<std::size_t>(n + j)]);
    const int deg = f.poly_degree();
    std::vector<std::vector<Complex>> pw(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        auto& col = pw[static_cast<std::size_t>(j)];
        col.resize(static_cast<std::size_t>(deg) + 1);
        col[0] = 1.0;
        for (int d = 1; d <= deg; ++d)
            col[static_cast<std::size_t>(d)] = col[static_cast<std::size_t>(d - 1)] * z[static_cast<std::size_t>(j)];
    }
    Complex p = 0.0;
    for (const auto& [alpha, c] : f.terms) {
        Complex t = c;
        for (int j = 0; j < n; ++j)
            t *= pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(alpha[static_cast<std::size_t>(j)])];
        p += t;
    }
    const double pa = std::abs(p);
    if (pa == 0.0) return kNegInf;
    double expo = 0.0;
    for (int j = 0; j < n; ++j) {
        const double xr = pt[static_cast<std::size_t>(j)], yi = pt[static_cast<std::size_t>(n + j)];
        expo += f.decay[static_cast<std::size_t>(j)] * (yi * yi - xr * xr);
    }
    return std::log(pa) + expo;
}

/// Geometric tail certificate from the last three shell maxima (log scale).
/// Throws not-converged when the trend is not a decay.
inline void shell_tail(const std::vector<double>& shell_log_max, double log_value,
                       SeminormValue& out, const std::string& who) {
    const std::size_t B = shell_log_max.size();
    if (B < 3) {
        out.tail_bound = 0.0;
        return;
    }
    const double r1 = shell_log_max[B - 2] - shell_log_max[B - 3];
    const double r2 = shell_log_max[B - 1] - shell_log_max[B - 2];
    const double log_r = std::fmax(r1, r2);
    if (!(log_r < 0.0))
        fail("not-converged", who + ": shell maxima are not decaying at the truncation budget");
    const double r = std::exp(log_r);
    out.tail_ratio = r;
    out.tail_bound = std::exp(shell_log_max[B - 1] - log_value) * r / (1.0 - r) *
                     std::exp(log_value);
}

}  // namespace detail

/// p_{nu,k}(f) = sup_z |f(z)| (1+||z||)^k / e^{phi_nu(||Im z||)}.
inline SeminormValue p_norm(const HermiteGaussian& f, FamilyCalculus& calc, int nu, int k,
                            const SupSearchConfig& cfg = {}) {
    f.validate();
    const int n = f.n;
    const auto& phi = calc.family().member(nu);
    auto obj = [&](const std::vector<double>& pt) {
        const double la = detail::log_abs_entire(f, pt);
        if (la == kNegInf) return kNegInf;
        const double nx = detail::norm2(pt.data(), n);
        const double ny = detail::norm2(pt.data() + n, n);
        const double nz = std::sqrt(nx * nx + ny * ny);
        return la + static_cast<double>(k) * std::log1p(nz) - phi(ny);
    };
    const auto sup = detail::sup_search(obj, 2 * n, cfg, "p_norm");
    SeminormValue out;
    out.log_value = sup.log_max;
    out.value = sup.log_max == kNegInf ? 0.0 : std::exp(sup.log_max);
    out.converged = sup.log_max == kNegInf ? true : (sup.boundary_ok && sup.stable);
    if (sup.log_max > kNegInf) {
        out.witness_x.assign(sup.arg.begin(), sup.arg.begin() + n);
        out.witness_y.assign(sup.arg.begin() + n, sup.arg.end());
    }
    return out;
}

/// N_{nu,k}(f) variant with the weight e^{(psi_nu*)*(ln(1+||Im z||))}.
inline SeminormValue calN_norm(const HermiteGaussian& f, FamilyCalculus& calc, int nu, int k,
                               const SupSearchConfig& cfg = {}) {
    f.validate();
    const int n = f.n;
    RadialConjugateCache& weight = calc.psi_star_star_cache(nu);
    auto obj = [&](const std::vector<double>& pt) {
        const double la = detail::log_abs_entire(f, pt);
        if (la == kNegInf) return kNegInf;
        const double nx = detail::norm2(pt.data(), n);
        const double ny = detail::norm2(pt.data() + n, n);
        const double nz = std::sqrt(nx * nx + ny * ny);
        return la + static_cast<double>(k) * std::log1p(nz) - weight(std::log1p(ny));
    };
    const auto sup = detail::sup_search(obj, 2 * n, cfg, "calN_norm");
    SeminormValue out;
    out.log_value = sup.log_max;
    out.value = sup.log_max == kNegInf ? 0.0 : std::exp(sup.log_max);
    out.converged = sup.log_max == kNegInf ? true : (sup.boundary_ok && sup.stable);
    if (sup.log_max > kNegInf) {
        out.witness_x.assign(sup.arg.begin(), sup.arg.begin() + n);
        out.witness_y.assign(sup.arg.begin() + n, sup.arg.end());
    }
    return out;
}

/// R_{m,nu}(f) = sup_{x, alpha} (1+||x||)^m |D^alpha f(x)| e^{psi_nu*(|alpha|)} / alpha!.
inline SeminormValue R_seminorm(const HermiteGaussian& f, FamilyCalculus& calc, int m, int nu,
                                int alpha_budget, const SupSearchConfig& cfg = {}) {
    f.validate();
    const int n = f.n;
    DerivativeEvaluator deriv(f, alpha_budget);
    std::vector<double> shell_weight(static_cast<std::size_t>(alpha_budget) + 1);
    for (int s = 0; s <= alpha_budget; ++s)
        shell_weight[static_cast<std::size_t>(s)] = calc.psi_star(nu, s);
    std::vector<double> shell_log_max(static_cast<std::size_t>(alpha_budget) + 1, kNegInf);

    SeminormValue out;
    out.trunc_alpha = alpha_budget;
    double best = kNegInf;
    auto obj = [&](const std::vector<double>& x) {
        const auto st = deriv.prepare(x);
        const double base = static_cast<double>(m) * std::log1p(detail::norm2(x.data(), n));
        double point_best = kNegInf;
        for (int s = 0; s <= alpha_budget; ++s) {
            const double ws = shell_weight[static_cast<std::size_t>(s)];
            double shell_here = kNegInf;
            for_each_in_shell(n, s, [&](const MultiIndex& alpha) {
                const double t = base + deriv.log_abs(st, alpha) + ws - log_factorial(alpha);
                if (t > shell_here) shell_here = t;
                if (t > best) {
                    best = t;
                    out.witness_alpha = alpha;
                    out.witness_x = x;
                }
            });
            shell_log_max[static_cast<std::size_t>(s)] =
                std::fmax(shell_log_max[static_cast<std::size_t>(s)], shell_here);
            point_best = std::fmax(point_best, shell_here);
        }
        return point_best;
    };
    const auto sup = detail::sup_search(obj, n, cfg, "R_seminorm");
    out.log_value = sup.log_max;
    out.value = sup.log_max == kNegInf ? 0.0 : std::exp(sup.log_max);
    if (sup.log_max == kNegInf) {
        out.converged = true;
        return out;
    }
    detail::shell_tail(shell_log_max, out.log_value, out, "R_seminorm");
    out.converged = sup.boundary_ok && sup.stable && out.tail_bound <= 1e-6 * out.value;
    return out;
}

/// ||f||_{m,psi_nu*} = sup_{x, |alpha|<=m, beta} |x^beta D^alpha f(x)| e^{psi_nu*(|beta|)} / |beta|!.
/// For fixed |beta| = k the inner sup over beta is ||x||_inf^k, attained at the
/// multi-index concentrated on the largest coordinate; the witness records it.
inline SeminormValue G_norm(const HermiteGaussian& f, FamilyCalculus& calc, int m, int nu,
                            int beta_budget, const SupSearchConfig& cfg = {}) {
    f.validate();
    const int n = f.n;
    DerivativeEvaluator deriv(f, m);
    std::vector<double> shell_weight(static_cast<std::size_t>(beta_budget) + 1);
    for (int s = 0; s <= beta_budget; ++s)
        shell_weight[static_cast<std::size_t>(s)] = calc.psi_star(nu, s) - log_factorial(s);
    std::vector<double> shell_log_max(static_cast<std::size_t>(beta_budget) + 1, kNegInf);

    SeminormValue out;
    out.trunc_alpha = m;
    out.trunc_beta = beta_budget;
    double best = kNegInf;
    auto obj = [&](const std::vector<double>& x) {
        const auto st = deriv.prepare(x);
        const double lxi = std::log(detail::norm_inf(x.data(), n));
        int arg_j = 0;
        for (int j = 1; j < n; ++j)
            if (std::fabs(x[static_cast<std::size_t>(j)]) > std::fabs(x[static_cast<std::size_t>(arg_j)])) arg_j = j;
        double point_best = kNegInf;
        // max over |alpha| <= m of log|D^alpha f(x)| is shared by every beta shell
        double dmax = kNegInf;
        MultiIndex darg;
        for_each_up_to(n, m, [&](const MultiIndex& alpha) {
            const double t = deriv.log_abs(st, alpha);
            if (t > dmax) {
                dmax = t;
                darg = alpha;
            }
        });
        for (int k = 0; k <= beta_budget; ++k) {
            const double xk = k == 0 ? 0.0 : static_cast<double>(k) * lxi;
            const double t = dmax + xk + shell_weight[static_cast<std::size_t>(k)];
            shell_log_max[static_cast<std::size_t>(k)] =
                std::fmax(shell_log_max[static_cast<std::size_t>(k)], t);
            if (t > point_best) point_best = t;
            if (t > best) {
                best = t;
                out.witness_alpha = darg;
                out.witness_beta.assign(static_cast<std::size_t>(n), 0);
                out.witness_beta[static_cast<std::size_t>(arg_j)] = k;
                out.witness_x = x;
                out.witness_k = k;
            }
        }
        return point_best;
    };
    const auto sup = detail::sup_search(obj, n, cfg, "G_norm");
    out.log_value = sup.log_max;
    out.value = sup.log_max == kNegInf ? 0.0 : std::exp(sup.log_max);
    if (sup.log_max == kNegInf) {
        out.converged = true;
        return out;
    }
    detail::shell_tail(shell_log_max, out.log_value, out, "G_norm");
    out.converged = sup.boundary_ok && sup.stable && out.tail_bound <= 1e-6 * out.value;
    return out;
}

/// N_{nu,m}(f) = max_{|alpha|<=m} sup_{x,k} (1+||x||)^k |D^alpha f(x)| e^{psi_nu*(k)} / k!.
inline SeminormValue N_norm(const HermiteGaussian& f, FamilyCalculus& calc, int nu, int m,
                            int k_budget, const SupSearchConfig& cfg = {}) {
    f.validate();
    const int n = f.n;
    DerivativeEvaluator deriv(f, m);
    std::vector<double> shell_weight(static_cast<std::size_t>(k_budget) + 1);
    for (int s = 0; s <= k_budget; ++s)
        shell_weight[static_cast<std::size_t>(s)] = calc.psi_star(nu, s) - log_factorial(s);
    std::vector<double> shell_log_max(static_cast<std::size_t>(k_budget) + 1, kNegInf);

    SeminormValue out;
    out.trunc_alpha = m;
    out.trunc_k = k_budget;
    double best = kNegInf;
    auto obj = [&](const std::vector<double>& x) {
        const auto st = deriv.prepare(x);
        const double l1px = std::log1p(detail::norm2(x.data(), n));
        double dmax = kNegInf;
        MultiIndex darg;
        for_each_up_to(n, m, [&](const MultiIndex& alpha) {
            const double t = deriv.log_abs(st, alpha);
            if (t > dmax) {
                dmax = t;
                darg = alpha;
            }
        });
        double point_best = kNegInf;
        for (int k = 0; k <= k_budget; ++k) {
            const double t = dmax + static_cast<double>(k) * l1px + shell_weight[static_cast<std::size_t>(k)];
            shell_log_max[static_cast<std::size_t>(k)] =
                std::fmax(shell_log_max[static_cast<std::size_t>(k)], t);
            if (t > point_best) point_best = t;
            if (t > best) {
                best = t;
                out.witness_alpha = darg;
                out.witness_k = k;
                out.witness_x = x;
            }
        }
        return point_best;
    };
    const auto sup = detail::sup_search(obj, n, cfg, "N_norm");
    out.log_value = sup.log_max;
    out.value = sup.log_max == kNegInf ? 0.0 : std::exp(sup.log_max);
    if (sup.log_max == kNegInf) {
        out.converged = true;
        return out;
    }
    detail::shell_tail(shell_log_max, out.log_value, out, "N_norm");
    out.converged = sup.boundary_ok && sup.stable && out.tail_bound <= 1e-6 * out.value;
    return out;
}

/// q_{m,nu}(f) = sup_{x, |alpha|<=m} |D^alpha f(x)| e^{phi_nu*(||x||)}.
inline SeminormValue q_norm(const HermiteGaussian& f, FamilyCalculus& calc, int m, int nu,
                            const SupSearchConfig& cfg = {}) {
    f.validate();
    if (!calc.family().member(nu).convex)
        fail("convexity-required", "q_norm needs a convex phi_nu (its Young conjugate is used)");
    const int n = f.n;
    DerivativeEvaluator deriv(f, m);
    RadialConjugateCache& weight = calc.phi_star_cache(nu);

    SeminormValue out;
    out.trunc_alpha = m;
    double best = kNegInf;
    auto obj = [&](const std::vector<double>& x) {
        const auto st = deriv.prepare(x);
        const double w = weight(detail::norm2(x.data(), n));
        double point_best = kNegInf;
        for_each_up_to(n, m, [&](const MultiIndex& alpha) {
            const double t = deriv.log_abs(st, alpha) + w;
            if (t > point_best) point_best = t;
            if (t > best) {
                best = t;
                out.witness_alpha = alpha;
                out.witness_x = x;
            }
        });
        return point_best;
    };
    const auto sup = detail::sup_search(obj, n, cfg, "q_norm");
    out.log_value = sup.log_max;
    out.value = sup.log_max == kNegInf ? 0.0 : std::exp(sup.log_max);
    out.converged = sup.log_max == kNegInf ? true : (sup.boundary_ok && sup.stable);
    return out;
}

}  // namespace gskit
