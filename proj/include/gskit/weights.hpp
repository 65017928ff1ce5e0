#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gskit/common.hpp"

namespace gskit {

/// A weight function on [0, inf). Flags are declared by the constructor,
/// not inferred; condition checks verify them on grids.
struct WeightFunction {
    std::function<double(double)> evaluator;
    bool convex = false;
    bool nondecreasing = false;
    std::string label;

    double operator()(double x) const { return evaluator(x); }
};

/// g[e](x) := g(e^x). Nondecreasing is preserved; convexity is not implied
/// for general g and the flag is dropped.
inline WeightFunction exp_substitute(const WeightFunction& g) {
    WeightFunction out;
    auto base = g.evaluator;
    out.evaluator = [base](double x) { return base(std::exp(x)); };
    out.convex = false;
    out.nondecreasing = g.nondecreasing;
    out.label = g.label + "[e]";
    return out;
}

enum class Condition { i1, i2, i3, i4, i5 };

inline const char* to_string(Condition c) {
    switch (c) {
        case Condition::i1: return "i1";
        case Condition::i2: return "i2";
        case Condition::i3: return "i3";
        case Condition::i4: return "i4";
        case Condition::i5: return "i5";
    }
    return "?";
}

/// Outcome of witnessing one family condition on one grid.
struct FamilyConditionReport {
    Condition condition{};
    int m = 0;
    double grid_lo = 0.0, grid_hi = 0.0;
    std::size_t grid_size = 0;
    /// i2: one (A, C(m,A)) pair per requested A. i3: {"a_m", value}.
    /// i4: {"sigma_m", candidate}, {"gamma_m", witness}. i5: {"h_m", candidate},
    /// {"l_m", witness}. i1: {"ratio", right-end ratio}, {"threshold", t}.
    std::vector<std::pair<std::string, double>> constants;
    double min_margin = 0.0;
    bool pass = false;
    /// i1 cannot be certified on a finite grid; its report is a proxy.
    bool proxy = false;
};

namespace detail {

struct GridStats {
    double max_value = kNegInf;
    std::size_t argmax = 0;
    bool tail_monotone = true;  // objective nondecreasing through last 10% of grid
};

/// Max of `obj` over `grid`, tracking whether the objective still climbs
/// through the last 10% of points (the unbounded-witness signal).
inline GridStats scan_max(const std::vector<double>& grid,
                          const std::function<double(double)>& obj) {
    GridStats st;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = obj(grid[i]);
        if (vals[i] > st.max_value) {
            st.max_value = vals[i];
            st.argmax = i;
        }
    }
    const std::size_t tail_start = grid.size() - std::max<std::size_t>(2, grid.size() / 10);
    for (std::size_t i = tail_start + 1; i < grid.size(); ++i)
        if (vals[i] < vals[i - 1]) { st.tail_monotone = false; break; }
    // A flat objective (e.g. identically zero margin) is not a divergence signal.
    if (st.tail_monotone && vals.back() <= vals[tail_start] + eps_check(vals.back()))
        st.tail_monotone = false;
    return st;
}

}  // namespace detail

/// Finite-grid proxy for lim g(x)/x = +inf: the right-end ratio must clear a
/// declared threshold. Reported as a proxy, never as a proof.
inline bool superlinear_proxy(const WeightFunction& g, const std::vector<double>& grid,
                              double threshold = 10.0, double* ratio_out = nullptr) {
    double x = 0.0;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it)
        if (*it > 0.0) { x = *it; break; }
    if (x == 0.0) fail("bad-grid", "superlinear proxy needs a positive grid point");
    const double ratio = g(x) / x;
    if (ratio_out) *ratio_out = ratio;
    return ratio >= threshold;
}

/// The family Phi = {phi_m}, immutable after construction. Witness constants
/// for i2/i3/i5 are cached on demand (thread-safe, deterministic values).
class WeightFamily {
public:
    WeightFamily() = default;
    WeightFamily(std::vector<WeightFunction> members, std::string label)
        : members_(std::make_shared<std::vector<WeightFunction>>(std::move(members))),
          label_(std::move(label)),
          witnesses_(std::make_shared<WitnessStore>()) {}

    int m_max() const { return static_cast<int>(members_->size()); }
    const std::string& label() const { return label_; }

    /// 1-based member access, matching the family indexing m = 1, 2, ...
    const WeightFunction& member(int m) const {
        if (m < 1 || m > m_max()) fail("bad-index", "family member " + std::to_string(m));
        return (*members_)[static_cast<std::size_t>(m - 1)];
    }

    const WeightFunction& operator[](int m) const { return member(m); }

    /// Grid witness C(m, A) for i2, a_m for i3, l_m for i5 (h fixed per call),
    /// computed on the default verification grid and cached.
    double witness_i2(int m, double A) const { return cached('2', m, A, [&] { return compute_i2(m, A); }); }
    double witness_i3(int m) const { return cached('3', m, 0.0, [&] { return compute_i3(m); }); }
    double witness_i5(int m, double h) const { return cached('5', m, h, [&] { return compute_i5(m, h); }); }

private:
    struct WitnessStore {
        std::mutex mu;
        std::map<std::tuple<char, int, double>, double> values;
    };

    template <typename F>
    double cached(char cond, int m, double p, F&& compute) const {
        const auto key = std::make_tuple(cond, m, p);
        {
            std::lock_guard<std::mutex> lk(witnesses_->mu);
            auto it = witnesses_->values.find(key);
            if (it != witnesses_->values.end()) return it->second;
        }
        const double v = compute();
        std::lock_guard<std::mutex> lk(witnesses_->mu);
        return witnesses_->values.emplace(key, v).first->second;
    }

    double compute_i2(int m, double A) const {
        const auto& g = default_verification_grid();
        const auto& lo = member(m);
        const auto& hi = member(m + 1);
        double mx = kNegInf;
        for (double x : g) mx = std::fmax(mx, lo(x) + A * std::log1p(x) - hi(x));
        return mx;
    }
    double compute_i3(int m) const {
        const auto& g = default_verification_grid();
        const auto& lo = member(m);
        const auto& hi = member(m + 1);
        double mx = kNegInf;
        for (double x : g) mx = std::fmax(mx, lo(2.0 * x) - hi(x));
        return mx;
    }
    double compute_i5(int m, double h) const {
        const auto& g = default_verification_grid();
        const auto& lo = member(m);
        const auto& hi = member(m + 1);
        double mx = kNegInf;
        for (double x : g) mx = std::fmax(mx, 2.0 * lo(x) - hi(h * x));
        return mx;
    }

    std::shared_ptr<const std::vector<WeightFunction>> members_;
    std::string label_;
    std::shared_ptr<WitnessStore> witnesses_;
};

/// phi_m(x) = (base^m * x)^p. Convex and nondecreasing for p > 1.
/// p <= 1 is rejected: i1 needs superlinear growth.
inline WeightFamily make_power_family(double p, double base, int m_max) {
    if (!(p > 1.0)) fail("bad-family", "power family needs p > 1 (i1 would fail)");
    if (!(base > 1.0)) fail("bad-family", "power family needs base > 1");
    if (m_max < 1) fail("bad-family", "power family needs m_max >= 1");
    std::vector<WeightFunction> members;
    members.reserve(static_cast<std::size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) {
        const double scale = std::pow(base, m);
        WeightFunction w;
        w.evaluator = [scale, p](double x) { return std::pow(scale * x, p); };
        w.convex = true;
        w.nondecreasing = true;
        w.label = "(" + std::to_string(base) + "^" + std::to_string(m) + " x)^" + std::to_string(p);
        members.push_back(std::move(w));
    }
    return WeightFamily(std::move(members), "power(p=" + std::to_string(p) +
                                                ",base=" + std::to_string(base) + ")");
}

/// Tabulated family: one value row per member, linear interpolation on the
/// shared grid, linear extrapolation beyond the last segment.
inline WeightFamily make_table_family(std::vector<double> grid,
                                      std::vector<std::vector<double>> values_per_m,
                                      bool convex = false, bool nondecreasing = true) {
    if (grid.size() < 2) fail("bad-family", "table family needs >= 2 grid points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) fail("bad-family", "table grid must be increasing");
    auto shared_grid = std::make_shared<std::vector<double>>(std::move(grid));
    std::vector<WeightFunction> members;
    for (std::size_t m = 0; m < values_per_m.size(); ++m) {
        if (values_per_m[m].size() != shared_grid->size())
            fail("bad-family", "table row size mismatch at member " + std::to_string(m + 1));
        auto vals = std::make_shared<std::vector<double>>(std::move(values_per_m[m]));
        WeightFunction w;
        w.evaluator = [shared_grid, vals](double x) {
            const auto& xs = *shared_grid;
            const auto& ys = *vals;
            if (x <= xs.front()) {
                const double t = (x - xs.front()) / (xs[1] - xs[0]);
                return ys[0] + t * (ys[1] - ys[0]);
            }
            if (x >= xs.back()) {
                const std::size_t n = xs.size();
                const double slope = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
                return ys[n - 1] + slope * (x - xs.back());
            }
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - xs.begin());
            const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return ys[i - 1] + t * (ys[i] - ys[i - 1]);
        };
        w.convex = convex;
        w.nondecreasing = nondecreasing;
        w.label = "table[" + std::to_string(m + 1) + "]";
        members.push_back(std::move(w));
    }
    return WeightFamily(std::move(members), "table");
}

/// Witness one family condition on a grid.
///   i1: right-end ratio proxy against params[0] (threshold, default 10).
///   i2: C(m,A) per A in params.
///   i3: a_m.  i4: gamma_m for candidate sigma_m = params[0] (default 2).
///   i5: l_m for candidate h_m = params[0] (default 2).
/// Signals unbounded-witness when the objective climbs monotonically through
/// the last 10% of the grid (the witness is likely infinite).
inline FamilyConditionReport check_condition(const WeightFamily& family, Condition which, int m,
                                             const std::vector<double>& grid,
                                             const std::vector<double>& params = {}) {
    if (grid.empty()) fail("bad-grid", "check_condition needs a nonempty grid");
    FamilyConditionReport rep;
    rep.condition = which;
    rep.m = m;
    rep.grid_lo = grid.front();
    rep.grid_hi = grid.back();
    rep.grid_size = grid.size();

    if (which == Condition::i1) {
        const double threshold = params.empty() ? 10.0 : params[0];
        double ratio = 0.0;
        rep.pass = superlinear_proxy(family.member(m), grid, threshold, &ratio);
        rep.proxy = true;
        rep.constants = {{"ratio", ratio}, {"threshold", threshold}};
        rep.min_margin = ratio - threshold;
        return rep;
    }

    if (m + 1 > family.m_max()) fail("bad-index", "condition needs member m+1 in range");
    const auto& lo = family.member(m);
    const auto& hi = family.member(m + 1);

    std::function<double(double)> objective;
    switch (which) {
        case Condition::i2: {
            if (params.empty()) fail("bad-params", "i2 needs at least one A");
            for (double A : params) {
                auto obj = [&, A](double x) { return lo(x) + A * std::log1p(x) - hi(x); };
                const auto st = detail::scan_max(grid, obj);
                if (st.tail_monotone)
                    fail("unbounded-witness", "i2 objective still climbing at grid end (m=" +
                                                  std::to_string(m) + ", A=" + std::to_string(A) + ")");
                rep.constants.emplace_back("C(" + std::to_string(m) + "," + std::to_string(A) + ")",
                                           st.max_value);
            }
            rep.min_margin = 0.0;  // witnessed constants close the gap by construction
            rep.pass = true;
            return rep;
        }
        case Condition::i3:
            objective = [&](double x) { return lo(2.0 * x) - hi(x); };
            break;
        case Condition::i4: {
            const double sigma = params.empty() ? 2.0 : params[0];
            if (!(sigma > 1.0)) fail("bad-params", "i4 needs sigma > 1");
            rep.constants.emplace_back("sigma_m", sigma);
            objective = [&, sigma](double x) { return lo(sigma * x) - hi(x); };
            break;
        }
        case Condition::i5: {
            const double h = params.empty() ? 2.0 : params[0];
            if (!(h > 1.0)) fail("bad-params", "i5 needs h > 1");
            rep.constants.emplace_back("h_m", h);
            objective = [&, h](double x) { return 2.0 * lo(x) - hi(h * x); };
            break;
        }
        default: fail("bad-params", "unknown condition");
    }

    const auto st = detail::scan_max(grid, objective);
    if (st.tail_monotone)
        fail("unbounded-witness", std::string("objective for ") + to_string(which) +
                                      " still climbing at grid end (m=" + std::to_string(m) + ")");
    const char* name = which == Condition::i3 ? "a_m" : (which == Condition::i4 ? "gamma_m" : "l_m");
    rep.constants.emplace_back(name, st.max_value);
    rep.min_margin = 0.0;
    rep.pass = true;
    return rep;
}

}  // namespace gskit
