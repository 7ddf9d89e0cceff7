// K_0 on [5, 37] and the normalized incomplete gamma G(1/4, w) from Taylor
// tables, plus the double-double reference evaluations used to build and
// test them.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "quadl/ddreal.hpp"

namespace quadl {

// ---- reference evaluations (double-double, about 31 digits) -------------

// K_0(x), K_1(x) from the integrals of exp(-x cosh t) and cosh t exp(-x cosh t)
// over [0, inf), trapezoid rule with step halving until converged.
DD k0_reference(const DD& x, int digits = 30);
DD k1_reference(const DD& x, int digits = 30);

// G(1/4, w) = int_1^inf x^{-3/4} e^{-wx} dx by exp-sinh quadrature.
DD g_reference(double w);

// Upper incomplete gamma Gamma(a, x) for a > 0, x > 0; gamma_a = Gamma(a).
DD upper_gamma(const DD& a, const DD& x, const DD& gamma_a);

// G(z, w) = w^{-z} Gamma(z, w) = int_1^inf t^{z-1} e^{-wt} dt.
DD g_normalized(const DD& z, const DD& w, const DD& gamma_z);

// Gamma(m + 1/4) and Gamma(m + 3/4) in double-double.
DD gamma_quarter_shift(int m);
DD gamma_three_quarter_shift(int m);

// The w <= 1 route of g_fast: w^{-1/4} Gamma(1/4) - e^{-w} sum_j w^j / (1/4)_{j+1}.
long double g_series_route(long double w);

// ---- tables ---------------------------------------------------------------

enum class TableKind : std::uint32_t { bessel_k0 = 1, incgamma_quarter = 2 };

struct TaylorTable {
    TableKind kind = TableKind::bessel_k0;
    double x0 = 0.0;     // first center
    double step = 0.0;   // center spacing
    std::uint64_t count = 0;
    std::uint32_t degree = 0;
    std::vector<double> coeffs;  // row-major, count x (degree + 1)

    std::size_t index_of(double x) const {
        return static_cast<std::size_t>(std::lround((x - x0) / step));
    }
    double center(std::size_t j) const { return x0 + static_cast<double>(j) * step; }

    // nearest-center Horner evaluation; x must lie within half a step of the grid
    double eval(double x) const {
        std::size_t j = index_of(x);
        if (j >= count) j = x < x0 ? 0 : count - 1;
        const double h = x - center(j);
        const double* c = coeffs.data() + j * (degree + 1);
        double r = c[degree];
        for (int m = static_cast<int>(degree) - 1; m >= 0; --m) r = r * h + c[m];
        return r;
    }
};

inline constexpr double k0_min_x = 5.0;
inline constexpr double k0_cutoff = 37.0;
inline constexpr double g_cutoff = 37.0;
inline constexpr double g_table_min = 1.0;

TaylorTable build_k0_table();
TaylorTable build_g_table();

std::vector<unsigned char> serialize_table(const TaylorTable& t);
TaylorTable deserialize_table(const std::vector<unsigned char>& bytes);  // throws on bad checksum
void save_table(const TaylorTable& t, const std::string& path);
TaylorTable load_table(const std::string& path);

// Directory searched for cached tables: $QUADL_TABLE_DIR, else the build default.
std::string table_dir();
// Load from table_dir() when present and valid, else generate (and try to cache).
const TaylorTable& k0_table();
const TaylorTable& g_table();

inline constexpr int k0_degree = 4;
inline constexpr int g_degree = 7;
inline constexpr double k0_inv_step = 200.0;
inline constexpr double g_inv_step = 100.0;

// ---- fast evaluation ------------------------------------------------------

// Fixed-degree evaluation for hot loops; x must lie inside the grid or in the
// half cell past its last center, which is served by that center.
template <int Degree>
inline double eval_fixed(const TaylorTable& t, double x, double inv_step) {
    const auto j = std::min(static_cast<std::size_t>((x - t.x0) * inv_step + 0.5), t.count - 1);
    const double h = x - (t.x0 + static_cast<double>(j) * t.step);
    const double* c = t.coeffs.data() + j * (Degree + 1);
    double r = c[Degree];
    for (int m = Degree - 1; m >= 0; --m) r = r * h + c[m];
    return r;
}


// Throws std::domain_error for x < 5; 0 beyond 37.
double k0_fast(double x, const TaylorTable& t);
inline double k0_fast(double x) { return k0_fast(x, k0_table()); }

// Unchecked variant for hot loops whose callers guarantee x >= pi sqrt(3).
inline double k0_fast_unchecked(double x, const TaylorTable& t) {
    return x > k0_cutoff ? 0.0 : eval_fixed<k0_degree>(t, x, k0_inv_step);
}

// Throws std::domain_error for w <= 0; 0 beyond 37.
double g_fast(double w, const TaylorTable& t);
inline double g_fast(double w) { return g_fast(w, g_table()); }

namespace detail {
// (-1)^k / (k! (k + 1/4)), k = 0..21
inline constexpr auto g_small_coeffs = [] {
    std::array<double, 22> c{};
    double fact = 1.0;
    for (int k = 0; k < 22; ++k) {
        if (k > 0) fact *= k;
        c[k] = (k % 2 ? -1.0 : 1.0) / (fact * (k + 0.25));
    }
    return c;
}();
inline constexpr double gamma_quarter_d = 3.6256099082219083119;
}  // namespace detail

// G(1/4, w) on (0, 1]: Gamma(1/4) w^{-1/4} minus the lower incomplete part.
inline double g_small(double w) {
    const auto& c = detail::g_small_coeffs;
    double s = c[21];
    for (int k = 20; k >= 0; --k) s = s * w + c[k];
    return detail::gamma_quarter_d / std::sqrt(std::sqrt(w)) - s;
}

inline double g_fast_unchecked(double w, const TaylorTable& t) {
    if (w > g_cutoff) return 0.0;
    if (w > g_table_min) return eval_fixed<g_degree>(t, w, g_inv_step);
    return g_small(w);
}

}  // namespace quadl
