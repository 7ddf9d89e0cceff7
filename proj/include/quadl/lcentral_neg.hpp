// L(1/2, chi_d) for fundamental d < 0 from the class-group sum of Epstein
// zeta values at s = 1/2 (K-Bessel expansion), block by block.
#pragma once

#include <cstdint>
#include <vector>

#include "quadl/ddreal.hpp"
#include "quadl/discriminants.hpp"
#include "quadl/qforms.hpp"

namespace quadl {

// zeta(1/2) to 17 significant digits
inline constexpr double zeta_half = -1.46035450880958681;
inline constexpr double euler_gamma = 0.57721566490153286061;

struct LRecord {
    double L = 0.0;        // running Epstein sum, finally L(1/2, chi_d)
    double logAbsD = 0.0;  // log |d|
};

struct DL {
    std::int64_t d = 0;
    double L = 0.0;
};

struct NegStats {
    EnumStats forms;
    std::uint64_t k_terms = 0;  // K_0 evaluations
};

// weight * Z(1/2) for one primitive reduced form; logAbsD = log|f.d|.
double form_contribution(const ReducedForm& f, double logAbsD);

// L-values for every fundamental d < 0 with |d| in the block, ascending |d|.
// prefetch_distance: c-steps ahead for the cache hint (0 disables).
std::vector<DL> lvalues_neg_block(const Block& block, NegStats* stats = nullptr, int prefetch_distance = 8);

// Serial reference: L(1/2, chi_d) for a single d by summing over its own forms.
double lvalue_neg_single(std::int64_t d);

// 2 sum chi_d(n) n^{-1/2} Gamma(3/4, pi n^2/|d|)/Gamma(3/4), truncated for the
// requested digits (<= 31), in double-double.
DD oracle_afe_neg(std::int64_t d, int digits = 26, double n_factor = 1.0);

int units_omega(std::int64_t d);

}  // namespace quadl
