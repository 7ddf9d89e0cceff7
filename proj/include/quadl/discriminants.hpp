// Fundamental discriminants: block sieve and a pointwise reference test.
#pragma once

#include <cstdint>
#include <vector>

namespace quadl {

enum class Sign { positive, negative };

inline int sign_value(Sign s) { return s == Sign::positive ? 1 : -1; }
const char* sign_name(Sign s);
Sign parse_sign(const char* text);

// Integers |d| with lo < |d| <= hi.
struct Block {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    Sign sign = Sign::negative;

    std::int64_t length() const { return hi - lo; }
};

// Equal-length blocks tiling (0, xmax].  Throws unless block_length divides xmax.
std::vector<Block> tile_blocks(std::int64_t xmax, std::int64_t block_length, Sign sign);

struct FundamentalFlags {
    Block block;
    std::vector<std::uint64_t> bits;  // bit j <-> |d| = lo + 1 + j
    std::uint64_t sieve_ops = 0;      // cross-off count, a linear-cost proxy

    bool test(std::int64_t j) const { return (bits[j >> 6] >> (j & 63)) & 1U; }
    bool test_abs(std::int64_t absd) const { return test(absd - block.lo - 1); }
    std::int64_t count() const;
};

FundamentalFlags sieve_block(const Block& block);

// Reference test by trial division.  Throws std::invalid_argument for d = 0.
bool is_fundamental(std::int64_t d);

bool is_squarefree(std::int64_t m);

}  // namespace quadl
