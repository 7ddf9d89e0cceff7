// L(1/2, chi_d) for fundamental d > 0 from the smoothed approximate
// functional equation, swept n-outer / d-inner over a block.
#pragma once

#include <cstdint>
#include <vector>

#include "quadl/ddreal.hpp"
#include "quadl/discriminants.hpp"
#include "quadl/lcentral_neg.hpp"

namespace quadl {

// chi_d(n) as a function of d mod period.  period = n when the power of two
// in n is even, 8n otherwise.
struct CharTable {
    std::int64_t n = 1;
    std::int64_t period = 1;
    std::vector<std::int8_t> values;

    int operator()(std::int64_t d) const {
        std::int64_t r = d % period;
        if (r < 0) r += period;
        return values[static_cast<std::size_t>(r)];
    }
};

std::int64_t char_period(std::int64_t n);
CharTable build_char_table(std::int64_t n);

struct PosOptions {
    int digits = 16;
    // digits used for d become digits + digits_bump * log10(d)
    double digits_bump = 0.0;
};

// Terms kept for d: N(d) = ceil(sqrt(d / pi * log(10) * digits)).
std::int64_t truncation_n(std::int64_t d, const PosOptions& opt = {});

struct PosStats {
    std::uint64_t trips = 0;        // inner-loop iterations, all d in range
    std::uint64_t tables = 0;       // character tables built
    std::uint64_t kron_calls = 0;   // direct kronecker evaluations
};

// n outer, d inner.  Every record in the block is accumulated (non-fundamental
// ones are dropped at the end), so trips ~ sum over d of N(d).
std::vector<DL> lvalues_pos_block(const Block& block, const PosOptions& opt = {}, PosStats* stats = nullptr);

// d outer, n inner, direct kronecker.  Same per-record summation order, so the
// results equal lvalues_pos_block bit for bit.
std::vector<DL> lvalues_pos_block_serial(const Block& block, const PosOptions& opt = {});

double lvalue_pos_single(std::int64_t d, const PosOptions& opt = {});

// 2 sum_n chi_d(n) n^{-1/2} Gamma(1/4, pi n^2/d) / Gamma(1/4) in double-double,
// with the truncation point scaled by n_factor.
DD oracle_afe_pos(std::int64_t d, int digits = 26, double n_factor = 2.0);

// Rough size of the dropped tail, C d^{3/4} N^{-3/2} exp(-pi N^2 / d).
double tail_estimate(double d, double N);

}  // namespace quadl
