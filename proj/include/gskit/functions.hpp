#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gskit/common.hpp"
#include "gskit/multiindex.hpp"

namespace gskit {

using Complex = std::complex<double>;

/// Entire test function f(z) = sum_alpha c_alpha z^alpha * exp(-sum_j a_j z_j^2).
/// The family is closed under differentiation and has a closed-form Fourier
/// transform, which makes it the oracle substrate for every seminorm check.
struct HermiteGaussian {
    int n = 1;
    std::map<MultiIndex, Complex> terms;  // c_alpha, alpha in Z_+^n
    std::vector<double> decay;            // a_j > 0
    std::string label;

    void validate() const {
        if (n < 1) fail("bad-function", "dimension must be >= 1");
        if (terms.empty()) fail("bad-function", "coefficient map must be nonempty");
        if (decay.size() != static_cast<std::size_t>(n))
            fail("bad-function", "decay size must equal the dimension");
        for (double a : decay)
            if (!(a > 0.0)) fail("bad-function", "decay coefficients must be positive");
        for (const auto& [alpha, c] : terms)
            if (alpha.size() != static_cast<std::size_t>(n))
                fail("bad-function", "coefficient multi-index has wrong length");
    }

    int poly_degree() const {
        int d = 0;
        for (const auto& [alpha, c] : terms) d = std::max(d, order(alpha));
        return d;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [alpha, c] : terms) m = std::fmax(m, std::abs(c));
        return m;
    }

    bool real_coefficients() const {
        for (const auto& [alpha, c] : terms)
            if (c.imag() != 0.0) return false;
        return true;
    }

    HermiteGaussian scaled(Complex c) const {
        HermiteGaussian out = *this;
        for (auto& [alpha, coeff] : out.terms) coeff *= c;
        return out;
    }

    /// Sum of two members with identical Gaussian decay.
    HermiteGaussian plus(const HermiteGaussian& other) const {
        if (other.n != n || other.decay != decay)
            fail("bad-function", "sum requires matching dimension and decay");
        HermiteGaussian out = *this;
        for (const auto& [alpha, c] : other.terms) out.terms[alpha] += c;
        return out;
    }
};

namespace detail {

inline void check_coeff_overflow(const std::map<MultiIndex, Complex>& terms) {
    for (const auto& [alpha, c] : terms)
        if (std::abs(c) > 1e300)
            fail("coefficient-overflow",
                 "derivative coefficient exceeds 1e300; use the log-space seminorm path");
}

}  // namespace detail

/// D_j f within the family: (d_j p - 2 a_j z_j p) * G.
inline HermiteGaussian derivative_coord(const HermiteGaussian& f, int j) {
    HermiteGaussian out;
    out.n = f.n;
    out.decay = f.decay;
    out.label = f.label.empty() ? "" : "D_" + std::to_string(j + 1) + "(" + f.label + ")";
    const std::size_t ju = static_cast<std::size_t>(j);
    for (const auto& [alpha, c] : f.terms) {
        if (alpha[ju] > 0) {
            MultiIndex down = alpha;
            down[ju] -= 1;
            out.terms[down] += c * static_cast<double>(alpha[ju]);
        }
        MultiIndex up = alpha;
        up[ju] += 1;
        out.terms[up] -= 2.0 * f.decay[ju] * c;
    }
    detail::check_coeff_overflow(out.terms);
    return out;
}

/// D^alpha f, exact in exact arithmetic.
inline HermiteGaussian derivative_closed_form(const HermiteGaussian& f, const MultiIndex& alpha) {
    if (alpha.size() != static_cast<std::size_t>(f.n))
        fail("bad-params", "derivative multi-index has wrong length");
    HermiteGaussian out = f;
    for (int j = 0; j < f.n; ++j)
        for (int r = 0; r < alpha[static_cast<std::size_t>(j)]; ++r)
            out = derivative_coord(out, j);
    return out;
}

inline Complex eval(const HermiteGaussian& f, const std::vector<Complex>& z) {
    if (z.size() != static_cast<std::size_t>(f.n)) fail("bad-params", "eval dimension mismatch");
    // Power tables per coordinate up to the polynomial degree.
    const int deg = f.poly_degree();
    std::vector<std::vector<Complex>> pw(static_cast<std::size_t>(f.n));
    for (int j = 0; j < f.n; ++j) {
        auto& col = pw[static_cast<std::size_t>(j)];
        col.resize(static_cast<std::size_t>(deg) + 1);
        col[0] = 1.0;
        for (int d = 1; d <= deg; ++d) col[static_cast<std::size_t>(d)] = col[static_cast<std::size_t>(d - 1)] * z[static_cast<std::size_t>(j)];
    }
    Complex p = 0.0;
    for (const auto& [alpha, c] : f.terms) {
        Complex t = c;
        for (int j = 0; j < f.n; ++j) t *= pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(alpha[static_cast<std::size_t>(j)])];
        p += t;
    }
    Complex expo = 0.0;
    for (int j = 0; j < f.n; ++j) expo -= f.decay[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(j)];
    return p * std::exp(expo);
}

inline Complex eval_real(const HermiteGaussian& f, const std::vector<double>& x) {
    std::vector<Complex> z(x.begin(), x.end());
    return eval(f, z);
}

/// Flattened polynomial factor of one derivative, for tight grid loops.
struct PolyFlat {
    std::vector<MultiIndex> exps;
    std::vector<Complex> coeffs;
    int max_degree = 0;

    Complex eval_with_powers(const std::vector<std::vector<double>>& pw) const {
        Complex s = 0.0;
        for (std::size_t t = 0; t < exps.size(); ++t) {
            double m = 1.0;
            for (std::size_t j = 0; j < exps[t].size(); ++j)
                m *= pw[j][static_cast<std::size_t>(exps[t][j])];
            s += coeffs[t] * m;
        }
        return s;
    }
};

/// Lazily built table of D^alpha f polynomials, each derived from its parent
/// by one coordinate differentiation. Shared data for seminorm sweeps,
/// Taylor extension and the quadrature oracle tests.
class DerivativeTable {
public:
    DerivativeTable(const HermiteGaussian& f, int cap = 60) : f_(f), cap_(cap) {
        f_.validate();
        Node root;
        root.terms = f_.terms;
        nodes_.emplace(MultiIndex(static_cast<std::size_t>(f_.n), 0), std::move(root));
    }

    const HermiteGaussian& function() const { return f_; }
    int cap() const { return cap_; }

    const PolyFlat& poly(const MultiIndex& alpha) {
        Node& nd = node(alpha);
        if (nd.flat.exps.empty() && !nd.terms.empty()) flatten(nd);
        return nd.flat;
    }

    /// D^alpha f at real x (power tables supplied by the caller).
    Complex value(const MultiIndex& alpha, const std::vector<double>& x,
                  const std::vector<std::vector<double>>& pw) {
        double expo = 0.0;
        for (int j = 0; j < f_.n; ++j)
            expo -= f_.decay[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        return poly(alpha).eval_with_powers(pw) * std::exp(expo);
    }

    Complex value(const MultiIndex& alpha, const std::vector<double>& x) {
        const auto pw = power_tables(x, order(alpha));
        return value(alpha, x, pw);
    }

    /// log |D^alpha f(x)|; -inf at polynomial zeros.
    double log_abs(const MultiIndex& alpha, const std::vector<double>& x,
                   const std::vector<std::vector<double>>& pw) {
        const double pa = std::abs(poly(alpha).eval_with_powers(pw));
        if (pa == 0.0) return kNegInf;
        double expo = 0.0;
        for (int j = 0; j < f_.n; ++j)
            expo -= f_.decay[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        return std::log(pa) + expo;
    }

    /// Coordinate power tables covering every |alpha| <= shell_cap request.
    std::vector<std::vector<double>> power_tables(const std::vector<double>& x,
                                                  int shell_cap) const {
        const int deg = f_.poly_degree() + shell_cap;
        std::vector<std::vector<double>> pw(static_cast<std::size_t>(f_.n));
        for (int j = 0; j < f_.n; ++j) {
            auto& col = pw[static_cast<std::size_t>(j)];
            col.resize(static_cast<std::size_t>(deg) + 1);
            col[0] = 1.0;
            for (int d = 1; d <= deg; ++d)
                col[static_cast<std::size_t>(d)] = col[static_cast<std::size_t>(d - 1)] * x[static_cast<std::size_t>(j)];
        }
        return pw;
    }

private:
    struct Node {
        std::map<MultiIndex, Complex> terms;
        PolyFlat flat;
    };

    Node& node(const MultiIndex& alpha) {
        auto it = nodes_.find(alpha);
        if (it != nodes_.end()) return it->second;
        if (order(alpha) > cap_)
            fail("bad-params", "derivative order exceeds table cap " + std::to_string(cap_));
        // Derive from the parent along the first nonzero coordinate.
        std::size_t j = 0;
        while (alpha[j] == 0) ++j;
        MultiIndex parent = alpha;
        parent[j] -= 1;
        const Node& pn = node(parent);
        Node nd;
        const double a_j = f_.decay[j];
        for (const auto& [e, c] : pn.terms) {
            if (e[j] > 0) {
                MultiIndex down = e;
                down[j] -= 1;
                nd.terms[down] += c * static_cast<double>(e[j]);
            }
            MultiIndex up = e;
            up[j] += 1;
            nd.terms[up] -= 2.0 * a_j * c;
        }
        detail::check_coeff_overflow(nd.terms);
        return nodes_.emplace(alpha, std::move(nd)).first->second;
    }

    void flatten(Node& nd) {
        nd.flat.exps.reserve(nd.terms.size());
        nd.flat.coeffs.reserve(nd.terms.size());
        for (const auto& [e, c] : nd.terms) {
            if (c == 0.0) continue;
            nd.flat.exps.push_back(e);
            nd.flat.coeffs.push_back(c);
            nd.flat.max_degree = std::max(nd.flat.max_degree, order(e));
        }
        if (nd.flat.exps.empty()) {  // identically zero derivative
            nd.flat.exps.push_back(MultiIndex(static_cast<std::size_t>(f_.n), 0));
            nd.flat.coeffs.push_back(0.0);
        }
    }

    HermiteGaussian f_;
    int cap_;
    std::map<MultiIndex, Node> nodes_;
};

/// Fast derivative values on the real axis via the coordinate-wise
/// three-term recurrence g_{d+1} = -2a (t g_d + d g_{d-1}) for the Gaussian
/// factor and Leibniz for the monomials. O(cap) state per point, O(terms)
/// per multi-index; the polynomial table stays as the exact oracle.
class DerivativeEvaluator {
public:
    explicit DerivativeEvaluator(const HermiteGaussian& f, int cap) : f_(f), cap_(cap) {
        f_.validate();
        max_beta_.assign(static_cast<std::size_t>(f_.n), 0);
        for (const auto& [beta, c] : f_.terms)
            for (int j = 0; j < f_.n; ++j)
                max_beta_[static_cast<std::size_t>(j)] =
                    std::max(max_beta_[static_cast<std::size_t>(j)], beta[static_cast<std::size_t>(j)]);
    }

    const HermiteGaussian& function() const { return f_; }
    int cap() const { return cap_; }

    struct PointState {
        std::vector<double> x;
        std::vector<std::vector<double>> gauss_d;  // [j][d] = D^d e^{-a_j t^2} at x_j
        std::vector<std::vector<double>> pow;      // [j][p] = x_j^p
    };

    PointState prepare(const std::vector<double>& x) const {
        if (x.size() != static_cast<std::size_t>(f_.n))
            fail("bad-params", "derivative evaluator dimension mismatch");
        PointState st;
        st.x = x;
        st.gauss_d.resize(static_cast<std::size_t>(f_.n));
        st.pow.resize(static_cast<std::size_t>(f_.n));
        for (int j = 0; j < f_.n; ++j) {
            const std::size_t ju = static_cast<std::size_t>(j);
            const double a = f_.decay[ju], t = x[ju];
            auto& g = st.gauss_d[ju];
            g.resize(static_cast<std::size_t>(cap_) + 2);
            g[0] = std::exp(-a * t * t);
            g[1] = -2.0 * a * t * g[0];
            for (int d = 1; d <= cap_; ++d)
                g[static_cast<std::size_t>(d) + 1] =
                    -2.0 * a * (t * g[static_cast<std::size_t>(d)] + d * g[static_cast<std::size_t>(d) - 1]);
            if (!std::isfinite(g[static_cast<std::size_t>(cap_) + 1]))
                fail("coefficient-overflow", "derivative values overflow at the requested order");
            auto& p = st.pow[ju];
            p.resize(static_cast<std::size_t>(max_beta_[ju]) + 1);
            p[0] = 1.0;
            for (int d = 1; d <= max_beta_[ju]; ++d)
                p[static_cast<std::size_t>(d)] = p[static_cast<std::size_t>(d) - 1] * t;
        }
        return st;
    }

    /// D^alpha f at the prepared point.
    Complex value(const PointState& st, const MultiIndex& alpha) const {
        Complex sum = 0.0;
        for (const auto& [beta, c] : f_.terms) {
            double prod = 1.0;
            for (int j = 0; j < f_.n && prod != 0.0; ++j)
                prod *= monomial_derivative(st, j, beta[static_cast<std::size_t>(j)],
                                            alpha[static_cast<std::size_t>(j)]);
            sum += c * prod;
        }
        return sum;
    }

    double log_abs(const PointState& st, const MultiIndex& alpha) const {
        const double a = std::abs(value(st, alpha));
        return a == 0.0 ? kNegInf : std::log(a);
    }

private:
    // D^d (t^beta e^{-a t^2}) at x_j by Leibniz; beta is tiny in practice.
    double monomial_derivative(const PointState& st, int j, int beta, int d) const {
        const std::size_t ju = static_cast<std::size_t>(j);
        const auto& g = st.gauss_d[ju];
        const auto& p = st.pow[ju];
        double sum = 0.0;
        double comb = 1.0;    // C(d, i)
        double falling = 1.0; // beta (beta-1) ... (beta-i+1)
        const int imax = std::min(beta, d);
        for (int i = 0; i <= imax; ++i) {
            sum += comb * falling * p[static_cast<std::size_t>(beta - i)] *
                   g[static_cast<std::size_t>(d - i)];
            comb *= static_cast<double>(d - i) / static_cast<double>(i + 1);
            falling *= static_cast<double>(beta - i);
        }
        return sum;
    }

    HermiteGaussian f_;
    int cap_;
    std::vector<int> max_beta_;
};

// ---------------------------------------------------------------------------
// Cauchy-contour numerical differentiation

/// Polycircle L_R(x): one circle of radius R about each real coordinate,
/// Q trapezoid nodes per circle.
struct ContourSpec {
    std::vector<double> center;
    double radius = 1.0;
    int nodes = 64;

    void validate(int n) const {
        if (center.size() != static_cast<std::size_t>(n))
            fail("bad-params", "contour center dimension mismatch");
        if (!(radius > 0.0)) fail("bad-params", "contour radius must be positive");
        if (nodes < 8 || (nodes & (nodes - 1)) != 0)
            fail("bad-params", "contour nodes must be a power of two >= 8");
    }
};

namespace detail {

inline Complex cauchy_estimate(const HermiteGaussian& f, const std::vector<double>& x, double R,
                               int Q, const MultiIndex& alpha) {
    const int n = f.n;
    std::vector<Complex> unit(static_cast<std::size_t>(Q));
    for (int q = 0; q < Q; ++q) {
        const double th = 2.0 * M_PI * static_cast<double>(q) / static_cast<double>(Q);
        unit[static_cast<std::size_t>(q)] = Complex(std::cos(th), std::sin(th));
    }
    // Tensor trapezoid: sum over q in {0..Q-1}^n of f(x + R e^{i theta}) e^{-i <alpha, theta>}.
    std::vector<Complex> contrib;
    contrib.reserve(static_cast<std::size_t>(std::pow(Q, n)));
    std::vector<int> q(static_cast<std::size_t>(n), 0);
    std::vector<Complex> z(static_cast<std::size_t>(n));
    while (true) {
        Complex phase = 1.0;
        for (int j = 0; j < n; ++j) {
            const std::size_t ju = static_cast<std::size_t>(j);
            z[ju] = Complex(x[ju], 0.0) + R * unit[static_cast<std::size_t>(q[ju])];
            // e^{-i alpha_j theta_j} = conj(unit^alpha_j)
            Complex w = 1.0;
            int e = alpha[ju] % Q;
            const Complex u = std::conj(unit[static_cast<std::size_t>(q[ju])]);
            for (int r = 0; r < e; ++r) w *= u;
            phase *= w;
        }
        contrib.push_back(eval(f, z) * phase);
        int j = n - 1;
        while (j >= 0 && ++q[static_cast<std::size_t>(j)] == Q) {
            q[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
    const Complex total = pairwise_sum(contrib);
    const double norm = std::exp(log_factorial(alpha) - order(alpha) * std::log(R) -
                                 static_cast<double>(n) * std::log(static_cast<double>(Q)));
    return total * norm;
}

}  // namespace detail

/// D^alpha f(x) by tensor-product trapezoid quadrature of the Cauchy integral
/// over the polycircle. The result is the doubled-Q estimate; a Q vs 2Q
/// disagreement beyond 10x the target tolerance signals quadrature-unconverged.
inline Complex cauchy_derivative(const HermiteGaussian& f, const ContourSpec& spec,
                                 const MultiIndex& alpha, double tol = 1e-10) {
    f.validate();
    spec.validate(f.n);
    int amax = 0;
    for (int a : alpha) amax = std::max(amax, a);
    if (spec.nodes < 4 * std::max(8, amax))
        fail("bad-params", "contour needs Q >= 4*max(8, |alpha|) nodes");
    const Complex coarse = detail::cauchy_estimate(f, spec.center, spec.radius, spec.nodes, alpha);
    const Complex fine = detail::cauchy_estimate(f, spec.center, spec.radius, 2 * spec.nodes, alpha);
    const double scale = std::fmax(1.0, std::abs(fine));
    if (std::abs(fine - coarse) > 10.0 * tol * scale)
        fail("quadrature-unconverged", "doubling Q moved the estimate by " +
                                           std::to_string(std::abs(fine - coarse)));
    return fine;
}

// ---------------------------------------------------------------------------
// Taylor extension R^n -> C^n

struct TaylorResult {
    Complex value{0.0, 0.0};
    int shells_used = 0;
    double last_shell_abs = 0.0;
    /// Geometric tail majorant from derivative bounds, when supplied.
    double tail_estimate = -1.0;
};

/// Partial sum over |alpha| <= alpha_max of D^alpha f(x) / alpha! * (iy)^alpha.
/// Shells are summed in graded-lex order. If psi_star and seminorm data are
/// supplied, reports the geometric-series tail majorant
/// sum_{k > alpha_max} R e^{-psi*(k)} ||y||_1^k.
inline TaylorResult taylor_extend(const DerivativeEvaluator& deriv, const std::vector<double>& x,
                                  const std::vector<double>& y, int alpha_max,
                                  const std::function<double(int)>& psi_star = nullptr,
                                  double seminorm_R = 0.0) {
    const HermiteGaussian& f = deriv.function();
    if (x.size() != static_cast<std::size_t>(f.n) || y.size() != static_cast<std::size_t>(f.n))
        fail("bad-params", "taylor_extend dimension mismatch");
    if (alpha_max > deriv.cap()) fail("bad-params", "alpha_max exceeds the evaluator cap");

    const auto st = deriv.prepare(x);
    std::vector<Complex> iy(static_cast<std::size_t>(f.n));
    for (int j = 0; j < f.n; ++j) iy[static_cast<std::size_t>(j)] = Complex(0.0, y[static_cast<std::size_t>(j)]);

    TaylorResult res;
    Complex sum = 0.0;
    double last_shell = 0.0;
    for (int k = 0; k <= alpha_max; ++k) {
        Complex shell = 0.0;
        for_each_in_shell(f.n, k, [&](const MultiIndex& alpha) {
            Complex t = deriv.value(st, alpha) / std::exp(log_factorial(alpha));
            for (int j = 0; j < f.n; ++j) {
                const std::size_t ju = static_cast<std::size_t>(j);
                for (int r = 0; r < alpha[ju]; ++r) t *= iy[ju];
            }
            shell += t;
        });
        sum += shell;
        last_shell = std::abs(shell);
        res.shells_used = k;
    }
    res.value = sum;
    res.last_shell_abs = last_shell;
    const double scale = std::abs(sum);
    bool zero_shift = true;
    for (double v : y) zero_shift = zero_shift && v == 0.0;
    // With y = 0 every shell beyond the polynomial degree vanishes and the
    // partial sum is already exact.
    if (!zero_shift && last_shell > 1e-8 * scale && scale > 0.0)
        fail("not-converged", "taylor shell " + std::to_string(alpha_max) +
                                  " still contributes " + std::to_string(last_shell));
    if (psi_star && seminorm_R > 0.0) {
        double y1 = 0.0;
        for (double v : y) y1 += std::fabs(v);
        const double b0 = seminorm_R * std::exp(-psi_star(alpha_max + 1)) * std::pow(y1, alpha_max + 1);
        const double b1 = seminorm_R * std::exp(-psi_star(alpha_max + 2)) * std::pow(y1, alpha_max + 2);
        if (b0 > 0.0 && b1 < b0) {
            const double r = b1 / b0;
            res.tail_estimate = b0 / (1.0 - r);
        }
    }
    return res;
}

inline Complex taylor_extend(const HermiteGaussian& f, const std::vector<double>& x,
                             const std::vector<double>& y, int alpha_max) {
    DerivativeEvaluator deriv(f, std::max(60, alpha_max));
    return taylor_extend(deriv, x, y, alpha_max).value;
}

}  // namespace gskit
