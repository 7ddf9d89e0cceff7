#include "quadl/lcentral_pos.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quadl/kronecker.hpp"
#include "quadl/specfun.hpp"

namespace quadl {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double gamma_quarter = 3.6256099082219083119;

// shared by both loop orders so the per-record arithmetic is identical
inline double term(int chi, double pn2, double inv_d, const TaylorTable& gt) {
    return chi * g_fast_unchecked(pn2 * inv_d, gt);
}

inline double finish(double acc, double inv_d) {
    return acc * (2.0 * std::sqrt(std::sqrt(pi * inv_d)) / gamma_quarter);
}

void check_block(const Block& block) {
    if (block.sign != Sign::positive) throw std::invalid_argument("positive block required");
}

}  // namespace

std::int64_t char_period(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("char_period: n >= 1");
    int v = 0;
    for (std::int64_t m = n; (m & 1) == 0; m >>= 1) ++v;
    return (v % 2 == 0) ? n : 8 * n;
}

CharTable build_char_table(std::int64_t n) {
    CharTable t;
    t.n = n;
    t.period = char_period(n);
    t.values.resize(static_cast<std::size_t>(t.period));
    for (std::int64_t r = 0; r < t.period; ++r) t.values[r] = static_cast<std::int8_t>(kronecker(r, n));
    return t;
}

std::int64_t truncation_n(std::int64_t d, const PosOptions& opt) {
    const double dd = static_cast<double>(d);
    double digits = opt.digits;
    if (opt.digits_bump != 0.0) digits += opt.digits_bump * std::log10(dd);
    return static_cast<std::int64_t>(std::ceil(std::sqrt(dd / pi * std::log(10.0) * digits)));
}

std::vector<DL> lvalues_pos_block(const Block& block, const PosOptions& opt, PosStats* stats) {
    check_block(block);
    const FundamentalFlags flags = sieve_block(block);
    const std::int64_t lo = block.lo, len = block.length();
    const TaylorTable& gt = g_table();

    std::vector<double> acc(static_cast<std::size_t>(len), 0.0), inv_d(static_cast<std::size_t>(len));
    std::vector<std::int64_t> ncut(static_cast<std::size_t>(len));
    for (std::int64_t j = 0; j < len; ++j) {
        inv_d[j] = 1.0 / static_cast<double>(lo + 1 + j);
        ncut[j] = truncation_n(lo + 1 + j, opt);
    }
    const std::int64_t nmax = ncut[len - 1];

    PosStats st;
    CharTable table;
    std::int64_t start = 0;
    for (std::int64_t n = 1; n <= nmax; ++n) {
        while (ncut[start] < n) ++start;  // N(d) is nondecreasing in d
        const double pn2 = pi * static_cast<double>(n) * static_cast<double>(n);
        st.trips += static_cast<std::uint64_t>(len - start);
        if (char_period(n) < len) {
            table = build_char_table(n);
            ++st.tables;
            const std::int64_t period = table.period;
            std::int64_t r = (lo + 1 + start) % period;
            const std::int8_t* vals = table.values.data();
            for (std::int64_t j = start; j < len; ++j) {
                acc[j] += term(vals[r], pn2, inv_d[j], gt);
                if (++r == period) r = 0;
            }
        } else {
            for (std::int64_t j = start; j < len; ++j) acc[j] += term(kronecker(lo + 1 + j, n), pn2, inv_d[j], gt);
            st.kron_calls += static_cast<std::uint64_t>(len - start);
        }
    }

    std::vector<DL> out;
    out.reserve(static_cast<std::size_t>(flags.count()));
    for (std::int64_t j = 0; j < len; ++j)
        if (flags.test(j)) out.push_back({lo + 1 + j, finish(acc[j], inv_d[j])});
    if (stats) {
        stats->trips += st.trips;
        stats->tables += st.tables;
        stats->kron_calls += st.kron_calls;
    }
    return out;
}

double lvalue_pos_single(std::int64_t d, const PosOptions& opt) {
    if (d <= 0 || !is_fundamental(d)) throw std::invalid_argument("lvalue_pos_single: fundamental d > 0 required");
    const TaylorTable& gt = g_table();
    const double inv_d = 1.0 / static_cast<double>(d);
    const std::int64_t N = truncation_n(d, opt);
    double acc = 0.0;
    for (std::int64_t n = 1; n <= N; ++n)
        acc += term(kronecker(d, n), pi * static_cast<double>(n) * static_cast<double>(n), inv_d, gt);
    return finish(acc, inv_d);
}

std::vector<DL> lvalues_pos_block_serial(const Block& block, const PosOptions& opt) {
    check_block(block);
    const FundamentalFlags flags = sieve_block(block);
    std::vector<DL> out;
    for (std::int64_t j = 0; j < block.length(); ++j)
        if (flags.test(j)) out.push_back({block.lo + 1 + j, lvalue_pos_single(block.lo + 1 + j, opt)});
    return out;
}

DD oracle_afe_pos(std::int64_t d, int digits, double n_factor) {
    if (d <= 0 || !is_fundamental(d)) throw std::invalid_argument("oracle_afe_pos: fundamental d > 0 required");
    if (digits < 1 || digits > 31) throw std::invalid_argument("oracle_afe_pos: digits in [1, 31]");
    const double D = static_cast<double>(d);
    const auto N = static_cast<std::int64_t>(std::ceil(n_factor * std::sqrt(D / pi * std::log(10.0) * digits)));
    const DD scale = ddc::pi / DD(D);
    DD sum(0.0);
    for (std::int64_t n = 1; n <= N; ++n) {
        const int chi = kronecker(d, n);
        if (chi == 0) continue;
        const DD dn(static_cast<double>(n));
        DD t = upper_gamma(DD(0.25), scale * sqr(dn), ddc::gamma_quarter) / sqrt(dn);
        sum += chi > 0 ? t : -t;
    }
    return ldexp(sum, 1) / ddc::gamma_quarter;
}

double tail_estimate(double d, double N) {
    // first dropped term 2 n^{-1/2} w^{-3/4} e^{-w} / Gamma(1/4), with square-root
    // cancellation in the character sum beyond it
    const double c = 2.0 / (std::pow(pi, 0.75) * gamma_quarter);
    return c * std::pow(d, 0.75) * std::pow(N, -1.5) * std::exp(-pi * N * N / d);
}

}  // namespace quadl
