// Zeta-type functions in double-double, via Euler-Maclaurin summation.
#pragma once

#include <cstdint>
#include <vector>

#include "quadl/ddreal.hpp"
#include "quadl/ddseries.hpp"

namespace quadl {

// B_{2j}/(2j)! for j = 0..60, from the reciprocal of (e^x - 1)/x
const std::vector<DD>& bernoulli_scaled();

// Hurwitz zeta for real s > 1, c > 0
DD hurwitz_zeta(const DD& s, const DD& c);
inline DD riemann_zeta(const DD& s) { return hurwitz_zeta(s, DD(1.0)); }

DD digamma(const DD& c);
// psi^{(n)}(c)
DD polygamma(int n, const DD& c);

// Taylor coefficients of zeta(s0 + x), s0 > 1, n terms
Series zeta_taylor(double s0, std::size_t n);

// Taylor coefficients of x zeta(1 + x), an entire function with value 1 at 0
Series eta_taylor(std::size_t n);

// log Gamma(z) for Re z > 0, analytic continuation of the real log
CDD lgamma(const CDD& z);

std::vector<std::int64_t> primes_up_to(std::int64_t n);
int mobius(std::int64_t n);

}  // namespace quadl
