#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "gskit/common.hpp"

namespace gskit {

using MultiIndex = std::vector<int>;

inline int order(const MultiIndex& a) {
    int s = 0;
    for (int v : a) s += v;
    return s;
}

/// log(a!) for scalar and multi-index arguments (alpha! = prod alpha_j!).
inline double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

inline double log_factorial(const MultiIndex& a) {
    double s = 0.0;
    for (int v : a) s += log_factorial(v);
    return s;
}

inline double factorial(int k) { return std::exp(log_factorial(k)); }

/// Number of alpha in Z_+^n with |alpha| = k: C(k+n-1, n-1).
inline double shell_multiplicity(int n, int k) {
    return std::exp(std::lgamma(double(k + n)) - std::lgamma(double(k + 1)) -
                    std::lgamma(double(n)));
}

/// Visit every multi-index of length n with |alpha| = k, lexicographically.
inline void for_each_in_shell(int n, int k, const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex a(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int pos, int rest) {
        if (pos == n - 1) {
            a[static_cast<std::size_t>(pos)] = rest;
            fn(a);
            return;
        }
        for (int v = rest; v >= 0; --v) {
            a[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, rest - v);
        }
    };
    if (n >= 1) rec(0, k);
}

/// Graded-lexicographic sweep over |alpha| <= k_max.
inline void for_each_up_to(int n, int k_max, const std::function<void(const MultiIndex&)>& fn) {
    for (int k = 0; k <= k_max; ++k) for_each_in_shell(n, k, fn);
}

}  // namespace gskit
