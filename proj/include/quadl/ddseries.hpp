// Truncated power series with double-double coefficients.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "quadl/ddreal.hpp"

namespace quadl {

using Series = std::vector<DD>;  // s[i] is the coefficient of x^i

inline Series series_mul(const Series& a, const Series& b, std::size_t n) {
    Series r(n, DD(0.0));
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        if (a[i].hi == 0.0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < n; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

inline Series series_add(Series a, const Series& b) {
    if (a.size() < b.size()) a.resize(b.size(), DD(0.0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

inline Series series_scale(Series a, const DD& c) {
    for (auto& x : a) x = x * c;
    return a;
}

// exp(a) to n terms, from n r_n = sum_j j a_j r_{n-j}
inline Series series_exp(const Series& a, std::size_t n) {
    Series r(n, DD(0.0));
    if (n == 0) return r;
    r[0] = exp(a.empty() ? DD(0.0) : a[0]);
    for (std::size_t m = 1; m < n; ++m) {
        DD s(0.0);
        for (std::size_t j = 1; j <= m && j < a.size(); ++j) s += DD(static_cast<double>(j)) * a[j] * r[m - j];
        r[m] = s / static_cast<double>(m);
    }
    return r;
}

// log(a) to n terms, a[0] > 0
inline Series series_log(const Series& a, std::size_t n) {
    if (a.empty() || !(a[0].hi > 0.0)) throw std::domain_error("series_log: constant term must be positive");
    Series r(n, DD(0.0));
    if (n == 0) return r;
    r[0] = log(a[0]);
    for (std::size_t m = 1; m < n; ++m) {
        DD s = m < a.size() ? DD(static_cast<double>(m)) * a[m] : DD(0.0);
        for (std::size_t j = 1; j < m; ++j)
            if (m - j < a.size()) s -= DD(static_cast<double>(j)) * r[j] * a[m - j];
        r[m] = s / (DD(static_cast<double>(m)) * a[0]);
    }
    return r;
}

// 1/a to n terms, a[0] != 0
inline Series series_inv(const Series& a, std::size_t n) {
    if (a.empty() || a[0].hi == 0.0) throw std::domain_error("series_inv: zero constant term");
    Series r(n, DD(0.0));
    if (n == 0) return r;
    const DD inv0 = 1.0 / a[0];
    r[0] = inv0;
    for (std::size_t m = 1; m < n; ++m) {
        DD s(0.0);
        for (std::size_t j = 1; j <= m && j < a.size(); ++j) s += a[j] * r[m - j];
        r[m] = -s * inv0;
    }
    return r;
}

// e^{c x} to n terms
inline Series series_exp_linear(const DD& c, std::size_t n) {
    Series r(n, DD(0.0));
    DD t(1.0);
    for (std::size_t m = 0; m < n; ++m) {
        r[m] = t;
        t = t * c / static_cast<double>(m + 1);
    }
    return r;
}

inline DD series_eval(const Series& a, const DD& x) {
    DD r(0.0);
    for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

inline CDD series_eval(const Series& a, const CDD& z) {
    CDD r(0.0);
    for (std::size_t i = a.size(); i-- > 0;) r = r * z + CDD(a[i]);
    return r;
}

}  // namespace quadl
