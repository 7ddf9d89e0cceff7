// Shared pieces of the A_k model used by both residue routes.
#pragma once

#include <vector>

#include "quadl/cfkrs.hpp"
#include "quadl/psring.hpp"

namespace quadl::detail {

// One term coef * t^{2n} * prod_r p_{e_r}(y) of log L_p, with y_j = p^{-z_j},
// t = p^{-1/2} and p_e the power sums of y.  Summed over p > cutoff this
// becomes coef * sum over index tuples of T_n(sum_r e_r z_{i_r}).
struct TailTerm {
    int n;
    double num, den;
    std::vector<int> e;
};

const std::vector<TailTerm>& tail_terms();

// Taylor coefficients cached per (n, cutoff, len)
const Series& cached_prime_tail(int n, std::int64_t prime_cutoff, std::size_t len);

// log of the tail correction as a symmetric function truncated at weight D
RingElt tail_ring(const PartitionBasis& B, int k, std::int64_t prime_cutoff);

// log L_p(z) for one prime as a ring element
RingElt local_log_ring(const PartitionBasis& B, int k, std::int64_t p);

}  // namespace quadl::detail
