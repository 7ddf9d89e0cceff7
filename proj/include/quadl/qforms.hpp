// Primitive reduced positive-definite binary quadratic forms a x^2 + b xy + c y^2
// enumerated block by block in discriminant.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "quadl/discriminants.hpp"

namespace quadl {

struct ReducedForm {
    std::int32_t a = 0;
    std::int32_t b = 0;  // representative with b >= 0
    std::int32_t c = 0;
    std::int64_t d = 0;  // b^2 - 4ac
    int weight = 1;      // 2 when (a, -b, c) is a distinct reduced form
};

struct EnumStats {
    std::uint64_t visits = 0;     // primitive forms passed to the visitor
    std::uint64_t triples = 0;    // all (a, b >= 0, c) candidates scanned
    std::uint64_t gcd_calls = 0;  // Euclid runs (cached per residue of c)
};

struct TripleCounts {
    std::uint64_t total = 0;      // reduced triples, both signs of b
    std::uint64_t primitive = 0;  // primitive reduced triples, both signs of b
    std::uint64_t weighted = 0;   // primitive triples with (b, -b) paired
};

inline std::int64_t max_a_for(std::int64_t absd) {
    auto a = static_cast<std::int64_t>(std::sqrt(static_cast<double>(absd) / 3.0));
    while (3 * (a + 1) * (a + 1) <= absd) ++a;
    while (a > 0 && 3 * a * a > absd) --a;
    return a;
}

// Calls visit(const ReducedForm&) once per primitive reduced form with
// lo < |d| <= hi.  Loop order: a, then b in [0, a], then c.  The gcd of
// (a, b, c) is gcd(g, c mod g) with g = gcd(a, b); one Euclid run per
// residue class of c, cached with a generation stamp.
template <class Visitor>
void enumerate_forms(std::int64_t lo, std::int64_t hi, Visitor&& visit, EnumStats* stats = nullptr) {
    const std::int64_t amax = max_a_for(hi);
    std::vector<std::uint32_t> stamp(static_cast<std::size_t>(amax + 1), 0);
    std::vector<unsigned char> coprime(static_cast<std::size_t>(amax + 1), 0);
    std::uint32_t gen = 0;
    EnumStats st;
    ReducedForm f;
    for (std::int64_t a = 1; a <= amax; ++a) {
        const std::int64_t four_a = 4 * a;
        for (std::int64_t b = 0; b <= a; ++b) {
            const std::int64_t b2 = b * b;
            std::int64_t clo = (lo + b2) / four_a + 1;
            if (clo < a) clo = a;
            const std::int64_t chi = (hi + b2) / four_a;
            if (clo > chi) continue;
            const std::int64_t g = std::gcd(a, b);
            ++gen;
            const bool pair = b > 0 && b < a;
            f.a = static_cast<std::int32_t>(a);
            f.b = static_cast<std::int32_t>(b);
            for (std::int64_t c = clo; c <= chi; ++c) {
                ++st.triples;
                if (g > 1) {
                    const std::int64_t r = c % g;
                    if (stamp[r] != gen) {
                        stamp[r] = gen;
                        coprime[r] = std::gcd(g, r) == 1;
                        ++st.gcd_calls;
                    }
                    if (!coprime[r]) continue;
                }
                f.c = static_cast<std::int32_t>(c);
                f.d = b2 - four_a * c;
                f.weight = (pair && c > a) ? 2 : 1;
                ++st.visits;
                visit(f);
            }
        }
    }
    if (stats) {
        stats->visits += st.visits;
        stats->triples += st.triples;
        stats->gcd_calls += st.gcd_calls;
    }
}

// Block form: block.sign must be negative.
template <class Visitor>
void enumerate_block(const Block& block, Visitor&& visit, EnumStats* stats = nullptr) {
    enumerate_forms(block.lo, block.hi, visit, stats);
}

// h(d) for fundamental d < 0, by direct search over forms of discriminant d.
std::int64_t class_number(std::int64_t d);

// Exact A(X), A'(X) and paired counts by full enumeration.
TripleCounts count_triples(std::int64_t X);

}  // namespace quadl
