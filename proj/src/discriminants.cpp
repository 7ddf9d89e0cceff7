#include "quadl/discriminants.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace quadl {

const char* sign_name(Sign s) { return s == Sign::positive ? "pos" : "neg"; }

Sign parse_sign(const char* text) {
    std::string t(text);
    if (t == "pos" || t == "+" || t == "positive") return Sign::positive;
    if (t == "neg" || t == "-" || t == "negative") return Sign::negative;
    throw std::invalid_argument("sign must be pos or neg: " + t);
}

std::vector<Block> tile_blocks(std::int64_t xmax, std::int64_t block_length, Sign sign) {
    if (xmax <= 0 || block_length <= 0 || xmax % block_length != 0)
        throw std::invalid_argument("block length must divide xmax");
    std::vector<Block> out;
    for (std::int64_t lo = 0; lo < xmax; lo += block_length) out.push_back({lo, lo + block_length, sign});
    return out;
}

std::int64_t FundamentalFlags::count() const {
    std::int64_t c = 0;
    for (auto w : bits) c += std::popcount(w);
    return c;
}

namespace {

std::int64_t isqrt(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// sqfree[i] for m = first + i, first >= 1.
std::vector<unsigned char> squarefree_range(std::int64_t first, std::int64_t last, std::uint64_t& ops) {
    std::vector<unsigned char> sq;
    if (last < first) return sq;
    sq.assign(static_cast<std::size_t>(last - first + 1), 1);
    std::int64_t qmax = isqrt(last);
    for (std::int64_t q = 2; q <= qmax; ++q) {
        std::int64_t q2 = q * q;
        std::int64_t start = ((first + q2 - 1) / q2) * q2;
        for (std::int64_t m = start; m <= last; m += q2) {
            sq[static_cast<std::size_t>(m - first)] = 0;
            ++ops;
        }
        ++ops;
    }
    return sq;
}

inline int mod4(std::int64_t v) { return static_cast<int>(((v % 4) + 4) % 4); }

}  // namespace

FundamentalFlags sieve_block(const Block& block) {
    FundamentalFlags f;
    f.block = block;
    const std::int64_t len = block.length();
    f.bits.assign(static_cast<std::size_t>((len + 63) / 64), 0);
    const int s = sign_value(block.sign);

    // odd family: d = s*n, d = 1 mod 4, n squarefree
    auto sq = squarefree_range(block.lo + 1, block.hi, f.sieve_ops);
    for (std::int64_t n = block.lo + 1; n <= block.hi; ++n) {
        if (mod4(s * n) == 1 && sq[static_cast<std::size_t>(n - block.lo - 1)] && !(s == 1 && n == 1)) {
            std::int64_t j = n - block.lo - 1;
            f.bits[j >> 6] |= std::uint64_t{1} << (j & 63);
        }
    }
    // even family: n = 4m, s*m = 2,3 mod 4, m squarefree
    std::int64_t mfirst = (block.lo + 1 + 3) / 4, mlast = block.hi / 4;
    auto sq4 = squarefree_range(mfirst, mlast, f.sieve_ops);
    for (std::int64_t m = mfirst; m <= mlast; ++m) {
        int r = mod4(s * m);
        if ((r == 2 || r == 3) && sq4[static_cast<std::size_t>(m - mfirst)]) {
            std::int64_t j = 4 * m - block.lo - 1;
            f.bits[j >> 6] |= std::uint64_t{1} << (j & 63);
        }
    }
    return f;
}

bool is_squarefree(std::int64_t m) {
    if (m < 0) m = -m;
    if (m == 0) return false;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            if (m % p == 0) return false;
        }
    }
    return true;
}

bool is_fundamental(std::int64_t d) {
    if (d == 0) throw std::invalid_argument("is_fundamental: d = 0");
    if (d == 1) return false;
    if (mod4(d) == 1) return is_squarefree(d);
    if (mod4(d) == 0) {
        std::int64_t m = d / 4;
        int r = mod4(m);
        return (r == 2 || r == 3) && is_squarefree(m);
    }
    return false;
}

}  // namespace quadl
