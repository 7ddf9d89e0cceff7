// Moment polynomials Q_pm(k, x) from the k-fold residue, the arithmetic
// factor A_k, and integrated predictions.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadl/ddreal.hpp"
#include "quadl/ddseries.hpp"
#include "quadl/discriminants.hpp"

namespace quadl {

struct ResidueConfig {
    double radius = 0.1;               // circle radius for every variable
    int points = 32;                   // trapezoid nodes per circle
    int digits = 30;                   // working precision (double-double)
    std::int64_t prime_cutoff = 1000;  // primes above this go through the tail model
    bool check_doubling = false;       // rerun with 2 * points and report the change

    void validate() const;
};

enum class ResidueMethod { automatic, contour, series };

struct MomentPolynomial {
    int k = 1;
    Sign sign = Sign::negative;
    std::vector<DD> coeffs;  // Q(x) = sum_m coeffs[m] x^m
    ResidueConfig cfg;
    std::string method;
    double max_imag = 0.0;          // contour only: largest discarded imaginary part
    double doubling_change = -1.0;  // contour only, when requested

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    DD eval(const DD& x) const;
};

inline int moment_degree(int k) { return k * (k + 1) / 2; }

// X(s, a) = pi^{s-1/2} Gamma((1-s+a)/2) / Gamma((s+a)/2)
CDD x_factor(const CDD& s, int a);
// log X(1/2 + z, a), analytic for |Re z| < 1/2 + a
CDD log_x_factor_centered(const CDD& z, int a);

// Euler product truncated at prime_cutoff, with the primes beyond handled by
// the p^{-2} and p^{-3} terms of the local factor expansion.  tail_rel gets
// the relative size of that correction.
DD a_k_factor(int k, std::int64_t prime_cutoff = 1000, double* tail_rel = nullptr);
// same model at a point; requires |Re z_j| < 1/2 and |z_j| <= 0.15
CDD A_k_eval(const std::vector<CDD>& z, std::int64_t prime_cutoff = 1000);

// Taylor coefficients of sum_{p > cutoff} p^{-n-w} in w
Series prime_tail_series(int n, std::int64_t prime_cutoff, std::size_t len);

MomentPolynomial q_polynomial(int k, Sign sign, const ResidueConfig& cfg = {},
                              ResidueMethod method = ResidueMethod::automatic);

// a_k prod_{j<=k} j!/(2j)!
DD ks_leading_coefficient(int k, std::int64_t prime_cutoff = 1000);

// int_1^X Q(log t) dt and int_1^X Q(log t)(1 - t/X) dt
DD q_integrated(const MomentPolynomial& poly, double X);
DD q_integrated_weighted(const MomentPolynomial& poly, double X);

std::string format_polynomial(const MomentPolynomial& poly);
MomentPolynomial parse_polynomial(const std::string& text);
void save_polynomial(const MomentPolynomial& poly, const std::string& path);
MomentPolynomial load_polynomial(const std::string& path);

}  // namespace quadl
