// Double-double arithmetic: an unevaluated sum hi + lo of two doubles,
// giving roughly 32 significant decimal digits.  Used for all reference
// oracles, table generation, moment sums and polynomial coefficients.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace quadl {

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}
    constexpr explicit DD(int v) : hi(static_cast<double>(v)), lo(0.0) {}
    explicit DD(std::int64_t v);

    explicit operator double() const { return hi + lo; }
};

namespace detail {

inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
#if defined(__FMA__) || defined(__aarch64__)
    return {p, std::fma(a, b, -p)};
#else
    constexpr double split = 134217729.0;
    double t = split * a;
    double ahi = t - (t - a), alo = a - ahi;
    t = split * b;
    double bhi = t - (t - b), blo = b - bhi;
    return {p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo};
#endif
}

}  // namespace detail

inline DD::DD(std::int64_t v) {
    double h = static_cast<double>(v);
    double l = static_cast<double>(v - static_cast<std::int64_t>(h));
    *this = detail::quick_two_sum(h, l);
}

inline DD operator-(const DD& a) { return {-a.hi, -a.lo}; }

inline DD operator+(const DD& a, const DD& b) {
    DD s = detail::two_sum(a.hi, b.hi);
    DD t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DD operator+(const DD& a, double b) {
    DD s = detail::two_sum(a.hi, b);
    s.lo += a.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}
inline DD operator+(double a, const DD& b) { return b + a; }
inline DD operator-(const DD& a, const DD& b) { return a + (-b); }
inline DD operator-(const DD& a, double b) { return a + (-b); }
inline DD operator-(double a, const DD& b) { return (-b) + a; }

inline DD operator*(const DD& a, const DD& b) {
    DD p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator*(const DD& a, double b) {
    DD p = detail::two_prod(a.hi, b);
    p.lo += a.lo * b;
    return detail::quick_two_sum(p.hi, p.lo);
}
inline DD operator*(double a, const DD& b) { return b * a; }

inline DD operator/(const DD& a, const DD& b) {
    double q1 = a.hi / b.hi;
    DD r = a - b * q1;
    double q2 = r.hi / b.hi;
    r = r - b * q2;
    double q3 = r.hi / b.hi;
    DD q = detail::quick_two_sum(q1, q2);
    return q + q3;
}
inline DD operator/(const DD& a, double b) { return a / DD(b); }
inline DD operator/(double a, const DD& b) { return DD(a) / b; }

inline DD& operator+=(DD& a, const DD& b) { return a = a + b; }
inline DD& operator-=(DD& a, const DD& b) { return a = a - b; }
inline DD& operator*=(DD& a, const DD& b) { return a = a * b; }
inline DD& operator/=(DD& a, const DD& b) { return a = a / b; }
inline DD& operator+=(DD& a, double b) { return a = a + b; }
inline DD& operator*=(DD& a, double b) { return a = a * b; }

inline bool operator<(const DD& a, const DD& b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(const DD& a, const DD& b) { return b < a; }
inline bool operator<=(const DD& a, const DD& b) { return !(b < a); }
inline bool operator>=(const DD& a, const DD& b) { return !(a < b); }
inline bool operator==(const DD& a, const DD& b) { return a.hi == b.hi && a.lo == b.lo; }

inline double to_double(const DD& a) { return a.hi + a.lo; }
inline DD abs(const DD& a) { return a.hi < 0 ? -a : a; }
inline DD sqr(const DD& a) { return a * a; }

inline DD ldexp(const DD& a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline DD floor(const DD& a) {
    double h = std::floor(a.hi);
    if (h != a.hi) return DD(h);
    return detail::quick_two_sum(h, std::floor(a.lo));
}

inline DD sqrt(const DD& a) {
    if (a.hi <= 0.0) return DD(0.0);
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    DD diff = a - detail::two_prod(ax, ax);
    return detail::two_sum(ax, diff.hi * (x * 0.5));
}

namespace ddc {
inline const DD pi{3.141592653589793, 1.2246467991473532e-16};
inline const DD two_pi{6.283185307179586, 2.4492935982947064e-16};
inline const DD pi_half{1.5707963267948966, 6.123233995736766e-17};
inline const DD ln2{0.6931471805599453, 2.3190468138462996e-17};
inline const DD ln10{2.302585092994046, -2.1707562233822494e-16};
inline const DD log_pi{1.1447298858494002, 1.0265951162707826e-17};
inline const DD euler_gamma{0.5772156649015329, -4.942915152430645e-18};
inline const DD zeta_half{-1.4603545088095868, 2.4724847979814998e-17};
inline const DD gamma_quarter{3.625609908221908, 1.0555907647086408e-16};
inline const DD gamma_three_quarter{1.2254167024651776, 2.151319998296141e-18};
inline const DD sqrt_pi{1.772453850905516, -7.666586499825799e-17};
inline const DD half_log_two_pi{0.9189385332046728, -3.8782941580672414e-17};
}  // namespace ddc

namespace detail {
// 1/n! for n = 0..15
inline const DD inv_fact[16] = {
    {1.0, 0.0}, {1.0, 0.0}, {0.5, 0.0},
    {0.16666666666666666, 9.25185853854297e-18},
    {0.041666666666666664, 2.3129646346357427e-18},
    {0.008333333333333333, 1.1564823173178714e-19},
    {0.001388888888888889, -5.300543954373577e-20},
    {0.0001984126984126984, 1.7209558293420705e-22},
    {2.48015873015873e-05, 2.1511947866775882e-23},
    {2.7557319223985893e-06, -1.858393274046472e-22},
    {2.755731922398589e-07, 2.3767714622250297e-23},
    {2.505210838544172e-08, -1.448814070935912e-24},
    {2.08767569878681e-09, -1.20734505911326e-25},
    {1.6059043836821613e-10, 1.2585294588752098e-26},
    {1.1470745597729725e-11, 2.0655512752830745e-28},
    {7.647163731819816e-13, 7.03872877733453e-30},
};
}  // namespace detail

// exp(x) by argument reduction x = k ln2 + r, then expm1 on r/512 and
// nine doublings of the expm1 value.
inline DD exp(const DD& a) {
    if (a.hi > 709.0) return DD(INFINITY);
    if (a.hi < -745.0) return DD(0.0);
    double k = std::nearbyint(a.hi / ddc::ln2.hi);
    DD r = a - ddc::ln2 * k;
    r = ldexp(r, -9);
    // Horner for expm1(r) = r(1 + r/2 + r^2/6 + ...), |r| < 7e-4
    DD p = detail::inv_fact[10];
    for (int i = 9; i >= 1; --i) p = p * r + detail::inv_fact[i];
    p = p * r;
    for (int i = 0; i < 9; ++i) p = ldexp(p, 1) + sqr(p);
    return ldexp(p + 1.0, static_cast<int>(k));
}

inline DD log(const DD& a) {
    if (a.hi <= 0.0) return DD(NAN);
    DD y(std::log(a.hi));
    y = y + a * exp(-y) - 1.0;
    return y;
}

inline DD pow(const DD& a, const DD& b) { return exp(b * log(a)); }

inline DD powi(DD a, long n) {
    bool inv = n < 0;
    unsigned long m = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    DD r(1.0);
    while (m) {
        if (m & 1UL) r *= a;
        a = sqr(a);
        m >>= 1;
    }
    return inv ? DD(1.0) / r : r;
}

// sin and cos together, reducing modulo pi/2.
inline void sincos(const DD& a, DD& s, DD& c) {
    DD q = floor(a / ddc::pi_half + 0.5);
    DD r = a - ddc::pi_half * q;
    long long qi = static_cast<long long>(q.hi) + static_cast<long long>(q.lo);
    int j = static_cast<int>(((qi % 4) + 4) % 4);
    DD r2 = sqr(r);
    DD ts = r, tc(1.0), ss = r, cc(1.0);
    for (int i = 1; i <= 20; ++i) {
        ts = -ts * r2 / static_cast<double>((2 * i) * (2 * i + 1));
        tc = -tc * r2 / static_cast<double>((2 * i - 1) * (2 * i));
        ss += ts;
        cc += tc;
        if (std::fabs(tc.hi) < 1e-35 && std::fabs(ts.hi) < 1e-35) break;
    }
    switch (j) {
        case 0: s = ss; c = cc; break;
        case 1: s = cc; c = -ss; break;
        case 2: s = -ss; c = -cc; break;
        default: s = -cc; c = ss; break;
    }
}

inline DD sin(const DD& a) { DD s, c; sincos(a, s, c); return s; }
inline DD cos(const DD& a) { DD s, c; sincos(a, s, c); return c; }

inline DD atan2(const DD& y, const DD& x) {
    DD t(std::atan2(y.hi, x.hi));
    DD s, c;
    sincos(t, s, c);
    // rotate (x, y) by -t; the residual angle is tiny
    DD re = x * c + y * s;
    DD im = y * c - x * s;
    return t + im / re;
}

std::string to_string(const DD& a, int digits = 32);
DD dd_from_string(const std::string& s);

// Complex numbers over DD.  std::complex is unspecified for user types.
struct CDD {
    DD re, im;
    CDD() = default;
    CDD(const DD& r) : re(r), im(0.0) {}
    CDD(double r) : re(r), im(0.0) {}
    CDD(const DD& r, const DD& i) : re(r), im(i) {}
};

inline CDD operator+(const CDD& a, const CDD& b) { return {a.re + b.re, a.im + b.im}; }
inline CDD operator-(const CDD& a, const CDD& b) { return {a.re - b.re, a.im - b.im}; }
inline CDD operator-(const CDD& a) { return {-a.re, -a.im}; }
inline CDD operator*(const CDD& a, const CDD& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CDD operator*(const CDD& a, const DD& b) { return {a.re * b, a.im * b}; }
inline CDD operator*(const CDD& a, double b) { return {a.re * b, a.im * b}; }
inline CDD operator/(const CDD& a, const CDD& b) {
    DD den = sqr(b.re) + sqr(b.im);
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline CDD operator/(const CDD& a, const DD& b) { return {a.re / b, a.im / b}; }
inline CDD& operator+=(CDD& a, const CDD& b) { return a = a + b; }
inline CDD& operator-=(CDD& a, const CDD& b) { return a = a - b; }
inline CDD& operator*=(CDD& a, const CDD& b) { return a = a * b; }

inline DD norm(const CDD& a) { return sqr(a.re) + sqr(a.im); }
inline DD abs(const CDD& a) { return sqrt(norm(a)); }

inline CDD exp(const CDD& a) {
    DD m = exp(a.re), s, c;
    sincos(a.im, s, c);
    return {m * c, m * s};
}

// principal branch
inline CDD log(const CDD& a) { return {log(norm(a)) * 0.5, atan2(a.im, a.re)}; }

inline CDD polar(const DD& r, const DD& theta) {
    DD s, c;
    sincos(theta, s, c);
    return {r * c, r * s};
}

}  // namespace quadl
