#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gskit/common.hpp"
#include "gskit/conjugate.hpp"
#include "gskit/fourier.hpp"
#include "gskit/functions.hpp"
#include "gskit/seminorms.hpp"
#include "gskit/weights.hpp"

namespace gskit {

/// Per-theorem verification record: both sides of the bound, the minimal
/// grid-feasible constant, and the convergence state of every sup involved.
struct VerificationReport {
    std::string theorem_id;
    std::string function_id;
    std::string family_id;
    std::map<std::string, double> indices;
    double left = 0.0;
    double right = 0.0;
    double minimal_constant = 0.0;
    double margin = 0.0;
    bool all_converged = false;
    bool pass = false;
    std::string note;
    std::map<std::string, double> extra;
};

struct VerifyOptions {
    SupSearchConfig sup;
    int alpha_budget = 40;
    int beta_budget = 40;
    int k_budget = 40;
    int taylor_budget = 80;
    double budget_scale = 1.0;
    unsigned long seed = 0x5EED;

    int scaled(int b) const {
        return std::max(2, static_cast<int>(std::lround(b * budget_scale)));
    }
};

namespace detail {

inline double ratio_constant(double left, double right) {
    if (left == 0.0) return 0.0;  // zero function: any constant works
    if (right == 0.0) return kInf;
    return left / right;
}

inline void fill_common(VerificationReport& rep, const SeminormValue& lhs,
                        const SeminormValue& rhs) {
    rep.left = lhs.value;
    rep.right = rhs.value;
    // Ratio in log space: linear values can underflow (e^{-4096} scale weights).
    if (lhs.log_value == kNegInf) {
        rep.minimal_constant = 0.0;
    } else if (rhs.log_value == kNegInf) {
        rep.minimal_constant = kInf;
    } else {
        const double log_c = lhs.log_value - rhs.log_value;
        rep.minimal_constant = std::exp(log_c);
        rep.extra["log_constant"] = log_c;
    }
    rep.all_converged = lhs.converged && rhs.converged;
    rep.pass = rep.all_converged && std::isfinite(rep.minimal_constant);
}

inline void precheck(const WeightFamily& family, Condition c, int m_from, int m_to,
                     const std::vector<double>& params = {}) {
    for (int m = m_from; m < m_to && m + 1 <= family.m_max(); ++m)
        check_condition(family, c, m, default_verification_grid(), params);
}

inline std::vector<double> random_point(std::mt19937_64& rng, int n, double box) {
    std::uniform_real_distribution<double> u(-box, box);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto& v : p) v = u(rng);
    return p;
}

// Imaginary shift with ||y|| <= cap.
inline std::vector<double> random_shift(std::mt19937_64& rng, int n, double cap) {
    auto y = random_point(rng, n, cap);
    const double ny = norm2(y.data(), n);
    if (ny > cap)
        for (auto& v : y) v *= cap / ny * 0.999;
    return y;
}

}  // namespace detail

/// Restriction bound: R_{m, nu+2n+1}(f|R^n) <= a * p_{nu,m}(f), minimal a reported.
inline VerificationReport verify_theorem1(const HermiteGaussian& f, FamilyCalculus& calc, int m,
                                          int nu, const VerifyOptions& opt = {}) {
    const int n = f.n;
    const int shifted = nu + 2 * n + 1;
    detail::precheck(calc.family(), Condition::i2, nu, shifted, {1.0});
    detail::precheck(calc.family(), Condition::i3, nu, shifted);

    VerificationReport rep;
    rep.theorem_id = "theorem1";
    rep.function_id = f.label;
    rep.family_id = calc.family().label();
    rep.indices = {{"m", double(m)}, {"nu", double(nu)}, {"nu_shifted", double(shifted)}};
    const SeminormValue lhs = R_seminorm(f, calc, m, shifted, opt.scaled(opt.alpha_budget), opt.sup);
    const SeminormValue rhs = p_norm(f, calc, nu, m, opt.sup);
    detail::fill_common(rep, lhs, rhs);
    rep.margin = rep.right == 0.0 ? 0.0 : rep.right * rep.minimal_constant - rep.left;
    return rep;
}

/// Extension: (a) the Taylor extension agrees with direct evaluation at random
/// z with ||Im z|| <= 2; (b) growth bound p_{nu+3,m}(F_f) <= K * R_{m,nu}(f).
inline VerificationReport verify_theorem2(const HermiteGaussian& f, FamilyCalculus& calc, int m,
                                          int nu, const VerifyOptions& opt = {}) {
    detail::precheck(calc.family(), Condition::i2, nu, nu + 3, {1.0});
    detail::precheck(calc.family(), Condition::i4, nu, nu + 3, {2.0});

    VerificationReport rep;
    rep.theorem_id = "theorem2";
    rep.function_id = f.label;
    rep.family_id = calc.family().label();
    rep.indices = {{"m", double(m)}, {"nu", double(nu)}, {"nu_target", double(nu + 3)}};

    DerivativeEvaluator table(f, opt.scaled(opt.taylor_budget));
    std::mt19937_64 rng(opt.seed);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = detail::random_point(rng, f.n, 2.0);
        const auto y = detail::random_shift(rng, f.n, 2.0);
        const Complex direct = [&] {
            std::vector<Complex> z(x.size());
            for (std::size_t j = 0; j < x.size(); ++j) z[j] = Complex(x[j], y[j]);
            return eval(f, z);
        }();
        const Complex ext = taylor_extend(table, x, y, opt.scaled(opt.taylor_budget)).value;
        const double rel = std::abs(ext - direct) / std::fmax(std::abs(direct), 1e-300);
        worst = std::fmax(worst, rel);
    }
    rep.extra["extension_worst_rel_err"] = worst;
    if (worst > 1e-8)
        fail("extension-mismatch",
             "taylor extension misses direct evaluation by " + std::to_string(worst));

    const SeminormValue lhs = p_norm(f, calc, nu + 3, m, opt.sup);
    const SeminormValue rhs = R_seminorm(f, calc, m, nu, opt.scaled(opt.alpha_budget), opt.sup);
    detail::fill_common(rep, lhs, rhs);
    rep.margin = rep.right == 0.0 ? 0.0 : rep.right * rep.minimal_constant - rep.left;
    return rep;
}

/// Fourier isomorphism mechanics: (a) ||f_hat||_{m,psi_nu*} <= s_n(1) p_{nu,n+m+1}(f);
/// (b) the per-(alpha, beta, x) pointwise bounds behind it; (c) numeric round
/// trip plus Taylor extension reproduce f.
inline VerificationReport verify_theorem3(const HermiteGaussian& f, FamilyCalculus& calc, int m,
                                          int nu, const VerifyOptions& opt = {}) {
    const int n = f.n;
    detail::precheck(calc.family(), Condition::i3, nu, nu + n + 1);
    detail::precheck(calc.family(), Condition::i5, nu, nu + n + 1, {2.0});

    VerificationReport rep;
    rep.theorem_id = "theorem3";
    rep.function_id = f.label;
    rep.family_id = calc.family().label();
    rep.indices = {{"m", double(m)}, {"nu", double(nu)}, {"k_index", double(n + m + 1)}};

    const HermiteGaussian fhat = fourier_closed_form(f);

    // (a) forward bound with the sphere-area constant.
    const SeminormValue lhs = G_norm(fhat, calc, m, nu, opt.scaled(opt.beta_budget), opt.sup);
    const SeminormValue rhs = p_norm(f, calc, nu, n + m + 1, opt.sup);
    const double sn = sphere_area(n);
    detail::fill_common(rep, lhs, rhs);
    rep.margin = sn * rep.right - rep.left;
    const bool bound_a =
        rep.left <= sn * rep.right * (1.0 + eps_check(1.0)) && rep.all_converged;
    rep.extra["s_n"] = sn;

    // (b) pointwise mechanism: beta = 0 row uses the direct bound with
    // e^{phi_nu(0)}; |beta| >= 1 rows use the contour-shift bound
    // e^{|beta| ln|beta| - |beta|} e^{-psi_nu*(|beta|)}.
    std::vector<double> p_by_order(static_cast<std::size_t>(m) + 1);
    bool p_conv = true;
    for (int a = 0; a <= m; ++a) {
        const SeminormValue pv = p_norm(f, calc, nu, n + a + 1, opt.sup);
        p_by_order[static_cast<std::size_t>(a)] = pv.value;
        p_conv = p_conv && pv.converged;
    }
    DerivativeEvaluator dhat(fhat, m);
    const int beta_check = std::min(opt.scaled(opt.beta_budget), 16);
    const auto axis = detail::symmetric_axis(opt.sup.half_width * 0.6, 21);
    double min_log_margin = kInf;
    std::vector<int> jj(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    while (true) {
        for (int d = 0; d < n; ++d) x[static_cast<std::size_t>(d)] = axis[static_cast<std::size_t>(jj[static_cast<std::size_t>(d)])];
        const auto st = dhat.prepare(x);
        const double lxi = std::log(detail::norm_inf(x.data(), n));
        for_each_up_to(n, m, [&](const MultiIndex& alpha) {
            const double la = dhat.log_abs(st, alpha);
            const double logp = std::log(p_by_order[static_cast<std::size_t>(order(alpha))]);
            for (int k = 0; k <= beta_check; ++k) {
                const double lhs_log = la + (k == 0 ? 0.0 : static_cast<double>(k) * lxi);
                double rhs_log;
                if (k == 0) {
                    rhs_log = std::log(sn) + calc.phi(nu, 0.0) + logp;
                } else {
                    rhs_log = std::log(sn) + logp + xlogx(double(k)) - double(k) -
                              calc.psi_star(nu, k);
                }
                if (lhs_log > kNegInf)
                    min_log_margin = std::fmin(min_log_margin, rhs_log - lhs_log);
            }
        });
        int d = n - 1;
        while (d >= 0 && ++jj[static_cast<std::size_t>(d)] == axis.size()) {
            jj[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
    }
    rep.extra["pointwise_min_log_margin"] = min_log_margin;
    const bool bound_b = min_log_margin >= -eps_check(1.0);

    // (c) numeric round trip; then the Taylor leg extends the recovered
    // real-axis data off the axis.
    FourierSpec spec;
    spec.half_width = 12.0;
    spec.samples = n == 1 ? 256 : 128;
    const SampledGrid fwd = fourier_numeric(f, spec);
    const SampledGrid back = inverse_fourier(fwd);
    double max_err = 0.0, max_ref = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> xi(static_cast<std::size_t>(n));
    for (std::size_t flat = 0; flat < back.values.size(); ++flat) {
        bool inner = true;
        for (int d = 0; d < n; ++d) {
            xi[static_cast<std::size_t>(d)] = back.node(idx[static_cast<std::size_t>(d)]);
            if (std::fabs(xi[static_cast<std::size_t>(d)]) > 0.5 * spec.half_width) inner = false;
        }
        if (inner) {
            const Complex ref = eval_real(f, xi);
            max_err = std::fmax(max_err, std::abs(back.values[flat] - ref));
            max_ref = std::fmax(max_ref, std::abs(ref));
        }
        int d = n - 1;
        while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == static_cast<std::size_t>(back.samples)) {
            idx[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
    }
    const double roundtrip_err = max_err / max_ref;
    rep.extra["roundtrip_rel_err"] = roundtrip_err;

    std::mt19937_64 rng(opt.seed + 1);
    DerivativeEvaluator table(f, opt.scaled(opt.taylor_budget));
    double taylor_err = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto xr = detail::random_point(rng, n, 1.5);
        const auto yr = detail::random_shift(rng, n, 1.0);
        std::vector<Complex> z(xr.size());
        for (std::size_t j = 0; j < xr.size(); ++j) z[j] = Complex(xr[j], yr[j]);
        const Complex direct = eval(f, z);
        const Complex ext = taylor_extend(table, xr, yr, opt.scaled(opt.taylor_budget)).value;
        taylor_err = std::fmax(taylor_err, std::abs(ext - direct) / std::fmax(std::abs(direct), 1e-300));
    }
    rep.extra["extension_rel_err"] = taylor_err;
    const bool bound_c = roundtrip_err <= 1e-7 && taylor_err <= 1e-7;

    rep.all_converged = rep.all_converged && p_conv;
    rep.pass = bound_a && bound_b && bound_c && rep.all_converged;
    if (!rep.pass) {
        rep.note = std::string("bound-violated:") + (bound_a ? "" : " (a)") +
                   (bound_b ? "" : " (b)") + (bound_c ? "" : " (c)");
    }
    rep.minimal_constant = detail::ratio_constant(rep.left, rep.right);
    return rep;
}

/// G(Psi*) = GS(Phi*): (a) q_{m,nu'}(f) <= C * N_{nu+n,m}(f) at the first
/// stable shift nu' (the paper's s is existential; searched and recorded);
/// (b) ||f||_{m,psi_{nu+1}*} <= M * q_{m,nu}(f).
inline VerificationReport verify_theorem4(const HermiteGaussian& f, FamilyCalculus& calc, int m,
                                          int nu, const VerifyOptions& opt = {}) {
    const int n = f.n;
    for (int j = 1; j <= calc.family().m_max(); ++j)
        if (!calc.family().member(j).convex)
            fail("convexity-required", "theorem4 needs convex family members");
    detail::precheck(calc.family(), Condition::i3, nu, nu + n + 1);

    VerificationReport rep;
    rep.theorem_id = "theorem4";
    rep.function_id = f.label;
    rep.family_id = calc.family().label();
    rep.indices = {{"m", double(m)}, {"nu", double(nu)}, {"N_index", double(nu + n)}};

    const SeminormValue Nref = N_norm(f, calc, nu + n, m, opt.scaled(opt.k_budget), opt.sup);

    double prevC = -1.0;
    double foundC = kInf;
    int found_shift = -1;
    bool q_conv = false;
    for (int nup = nu + n + 3; nup <= nu + n + 8; ++nup) {
        if (nup > calc.family().m_max()) break;
        const SeminormValue qv = q_norm(f, calc, m, nup, opt.sup);
        const double C = detail::ratio_constant(qv.value, Nref.value);
        if (prevC > 0.0 && std::fabs(C - prevC) <= 0.05 * prevC) {
            foundC = C;
            found_shift = nup;
            q_conv = qv.converged;
            break;
        }
        if (qv.value == 0.0 && Nref.value == 0.0) {  // zero function
            foundC = 0.0;
            found_shift = nup;
            q_conv = qv.converged;
            break;
        }
        prevC = C;
    }
    if (found_shift < 0)
        fail("no-stable-shift", "theorem4(a): no stable index shift up to nu+n+8");
    rep.indices["nu_prime"] = double(found_shift);
    rep.indices["s"] = double(found_shift - nu - 1);
    rep.extra["C_G_to_GS"] = foundC;

    const SeminormValue lhs = G_norm(f, calc, m, nu + 1, opt.scaled(opt.beta_budget), opt.sup);
    const SeminormValue rhs = q_norm(f, calc, m, nu, opt.sup);
    detail::fill_common(rep, lhs, rhs);
    rep.extra["M_GS_to_G"] = rep.minimal_constant;
    rep.all_converged = rep.all_converged && Nref.converged && q_conv;
    rep.pass = rep.all_converged && std::isfinite(foundC) && std::isfinite(rep.minimal_constant);
    rep.margin = rep.right == 0.0 ? 0.0 : rep.right * rep.minimal_constant - rep.left;
    return rep;
}

/// E(Phi) = H(Phi): p_{nu+1,k}(f) <= K_nu * calN_{nu,k}(f) and
/// calN_{nu+2n+3,k}(f) <= A * p_{nu,k}(f).
inline VerificationReport verify_prop_H(const HermiteGaussian& f, FamilyCalculus& calc, int k,
                                        int nu, const VerifyOptions& opt = {}) {
    const int n = f.n;
    detail::precheck(calc.family(), Condition::i3, nu, nu + 2 * n + 3);

    VerificationReport rep;
    rep.theorem_id = "prop_H";
    rep.function_id = f.label;
    rep.family_id = calc.family().label();
    rep.indices = {{"k", double(k)}, {"nu", double(nu)}, {"nu_shifted", double(nu + 2 * n + 3)}};

    const SeminormValue p_up = p_norm(f, calc, nu + 1, k, opt.sup);
    const SeminormValue calN_base = calN_norm(f, calc, nu, k, opt.sup);
    const double K = detail::ratio_constant(p_up.value, calN_base.value);
    rep.extra["K_nu"] = K;

    const SeminormValue calN_shift = calN_norm(f, calc, nu + 2 * n + 3, k, opt.sup);
    const SeminormValue p_base = p_norm(f, calc, nu, k, opt.sup);
    detail::fill_common(rep, calN_shift, p_base);
    rep.extra["A_nu_m"] = rep.minimal_constant;
    rep.all_converged =
        rep.all_converged && p_up.converged && calN_base.converged;
    rep.pass = rep.all_converged && std::isfinite(K) && std::isfinite(rep.minimal_constant);
    rep.margin = rep.right == 0.0 ? 0.0 : rep.right * rep.minimal_constant - rep.left;
    return rep;
}

/// Q(Psi*) = G(Psi*): the trivial domination ||f||_{m,psi_nu*} <= N_{nu,m}(f)
/// and the converse N_{nu+n,m}(f) <= C * ||f||_{m,psi_nu*}.
inline VerificationReport verify_lemma4(const HermiteGaussian& f, FamilyCalculus& calc, int m,
                                        int nu, const VerifyOptions& opt = {}) {
    const int n = f.n;
    detail::precheck(calc.family(), Condition::i3, nu, nu + n + 1);

    VerificationReport rep;
    rep.theorem_id = "lemma4";
    rep.function_id = f.label;
    rep.family_id = calc.family().label();
    rep.indices = {{"m", double(m)}, {"nu", double(nu)}, {"nu_shifted", double(nu + n)}};

    const SeminormValue g_base = G_norm(f, calc, m, nu, opt.scaled(opt.beta_budget), opt.sup);
    const SeminormValue n_base = N_norm(f, calc, nu, m, opt.scaled(opt.k_budget), opt.sup);
    const bool trivial_ok = g_base.value <= n_base.value * (1.0 + eps_check(1.0));
    rep.extra["trivial_margin"] = n_base.value - g_base.value;

    const SeminormValue n_shift = N_norm(f, calc, nu + n, m, opt.scaled(opt.k_budget), opt.sup);
    detail::fill_common(rep, n_shift, g_base);
    rep.all_converged = rep.all_converged && n_base.converged;
    rep.pass = rep.all_converged && trivial_ok && std::isfinite(rep.minimal_constant);
    rep.margin = rep.right == 0.0 ? 0.0 : rep.right * rep.minimal_constant - rep.left;
    if (!trivial_ok) rep.note = "bound-violated: trivial direction";
    return rep;
}

/// The frozen six-function battery: Gaussians with a in {1/2, 1, 2}, one odd
/// polynomial factor, one n=2 product, one two-term sum.
inline std::vector<HermiteGaussian> standard_battery() {
    std::vector<HermiteGaussian> fs;
    auto gauss1 = [](double a, const std::string& label) {
        HermiteGaussian f;
        f.n = 1;
        f.decay = {a};
        f.terms[{0}] = 1.0;
        f.label = label;
        return f;
    };
    fs.push_back(gauss1(0.5, "gauss_half"));
    fs.push_back(gauss1(1.0, "gauss_one"));
    fs.push_back(gauss1(2.0, "gauss_two"));
    {
        HermiteGaussian f;
        f.n = 1;
        f.decay = {1.0};
        f.terms[{1}] = 1.0;
        f.label = "odd_poly";
        fs.push_back(f);
    }
    {
        HermiteGaussian f;
        f.n = 2;
        f.decay = {1.0, 1.0};
        f.terms[{0, 0}] = 1.0;
        f.label = "gauss_2d";
        fs.push_back(f);
    }
    {
        HermiteGaussian f;
        f.n = 1;
        f.decay = {1.0};
        f.terms[{0}] = 1.0;
        f.terms[{2}] = 1.0;
        f.label = "two_term";
        fs.push_back(f);
    }
    return fs;
}

}  // namespace gskit
