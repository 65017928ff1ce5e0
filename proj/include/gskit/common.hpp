#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gskit {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Error with a machine-readable kind ("hypothesis-violated", "no-decay", ...).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(std::string_view kind, const std::string& what) {
    throw Error(std::string(kind), what);
}

/// Relative float-noise budget for inequality margins: 1e-9 * (1 + |scale|).
inline double eps_check(double scale = 0.0) {
    return 1e-9 * (1.0 + std::fabs(scale));
}

/// lhs >= rhs up to the shared noise budget.
inline bool ge_slack(double lhs, double rhs) {
    return lhs >= rhs - eps_check(std::fmax(std::fabs(lhs), std::fabs(rhs)));
}

/// x*ln(x) continuously extended by 0 at x=0.
inline double xlogx(double x) {
    return x > 0.0 ? x * std::log(x) : 0.0;
}

/// Geometric grid on [lo, hi] (count points), optionally prefixed with 0.
inline std::vector<double> geometric_grid(double lo, double hi, std::size_t count,
                                          bool include_zero = true) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) fail("bad-grid", "geometric_grid arguments");
    std::vector<double> xs;
    xs.reserve(count + (include_zero ? 1 : 0));
    if (include_zero) xs.push_back(0.0);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        xs.push_back(lo * std::exp(step * static_cast<double>(i)));
    xs.back() = hi;
    return xs;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (count < 2 || !(hi > lo)) fail("bad-grid", "linear_grid arguments");
    std::vector<double> xs(count);
    const double h = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) xs[i] = lo + h * static_cast<double>(i);
    xs.back() = hi;
    return xs;
}

/// Default verification grid: 2048 geometric points on [1e-3, 1e3] plus x = 0.
inline const std::vector<double>& default_verification_grid() {
    static const std::vector<double> grid = geometric_grid(1e-3, 1e3, 2048, true);
    return grid;
}

namespace detail {

/// Fixed-order pairwise reduction; deterministic regardless of caller threading.
template <typename T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    if (n == 0) return T{};
    if (n <= 8) {
        T s = v[lo];
        for (std::size_t i = lo + 1; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(v, 0, v.size());
}

}  // namespace detail

}  // namespace gskit
