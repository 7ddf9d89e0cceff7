#include <doctest.h>

#include <cmath>
#include <random>

#include "quadl/lcentral_neg.hpp"
#include "quadl/lcentral_pos.hpp"

using namespace quadl;

namespace {

struct Known {
    std::int64_t d;
    double L;
};

// L(1/2, chi_d) from an independent 30-digit Hurwitz zeta evaluation
const Known known[] = {
    {-3, 0.4808675576968286261812},    {-4, 0.6676914571896091766587},   {-7, 1.146585666903708333677},
    {-8, 1.100421409525548377567},     {-23, 2.45536251397425862208},    {-163, 0.06853175829607509930827},
    {-1507, 0.1830040232060781642993}, {-9991, 0.5031778842048536329217}, {5, 0.2317509475040157558834},
    {8, 0.3736917129125473073816},     {12, 0.4985570024578154361568},   {13, 0.4395929735090052252451},
    {21, 0.4972623804881116652483},    {1009, 5.020770485004570128292},  {9997, 1.840150331147953537759},
};

double block_value(std::int64_t d) {
    const std::int64_t a = std::llabs(d);
    const Block b{a - 1, a, d < 0 ? Sign::negative : Sign::positive};
    auto r = d < 0 ? lvalues_neg_block(b) : lvalues_pos_block(b);
    REQUIRE(r.size() == 1);
    return r[0].L;
}

}  // namespace

TEST_CASE("oracles against frozen values") {
    for (const auto& k : known) {
        const DD v = k.d < 0 ? oracle_afe_neg(k.d) : oracle_afe_pos(k.d);
        CHECK(std::fabs(to_double(v) - k.L) < 1e-15 * std::max(1.0, k.L));
    }
}

TEST_CASE("production pipelines against frozen values") {
    for (const auto& k : known) {
        CAPTURE(k.d);
        CHECK(std::fabs(block_value(k.d) - k.L) < 1e-12);
        const double single = k.d < 0 ? lvalue_neg_single(k.d) : lvalue_pos_single(k.d);
        CHECK(std::fabs(single - k.L) < 1e-12);
    }
}

TEST_CASE("oracle truncation stability") {
    const DD a = oracle_afe_neg(-3, 26, 1.0), b = oracle_afe_neg(-3, 26, 2.0);
    CHECK(to_double(a) > 0.0);
    CHECK(std::fabs(to_double(a - b)) < 1e-20);
    const DD c = oracle_afe_pos(5, 26, 2.0), e = oracle_afe_pos(5, 26, 4.0);
    CHECK(std::fabs(to_double(c - e)) < 1e-20);
}

TEST_CASE("leading term only when every K0 argument is past the cutoff") {
    // a = 1, |d| = 10^4: x1 = 100 pi > 37
    ReducedForm f{1, 0, 2500, -10000, 1};
    const double logd = std::log(1e4);
    const double closed = 2.0 * (euler_gamma - std::log(8.0 * std::acos(-1.0))) + logd;
    CHECK(std::fabs(form_contribution(f, logd) - closed) < 1e-15 * std::fabs(closed));
}

TEST_CASE("negative block against the oracle on a random sample") {
    const Block b{200000, 300000, Sign::negative};
    auto r = lvalues_neg_block(b);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> u(0, r.size() - 1);
    for (int i = 0; i < 200; ++i) {
        const auto& x = r[u(rng)];
        REQUIRE(std::fabs(x.L - to_double(oracle_afe_neg(x.d))) < 1e-12);
    }
}

TEST_CASE("prefetch distance does not change results") {
    const Block b{900000, 910000, Sign::negative};
    auto r0 = lvalues_neg_block(b, nullptr, 0), r8 = lvalues_neg_block(b, nullptr, 8),
         r16 = lvalues_neg_block(b, nullptr, 16);
    REQUIRE(r0.size() == r8.size());
    bool same = true;
    for (std::size_t i = 0; i < r0.size(); ++i) same = same && r0[i].L == r8[i].L && r0[i].L == r16[i].L;
    CHECK(same);
}

TEST_CASE("positive block equals the serial reference bit for bit") {
    const Block b{40000, 50000, Sign::positive};
    PosStats st;
    auto fast = lvalues_pos_block(b, {}, &st);
    auto slow = lvalues_pos_block_serial(b);
    REQUIRE(fast.size() == slow.size());
    bool same = true;
    for (std::size_t i = 0; i < fast.size(); ++i) same = same && fast[i].d == slow[i].d && fast[i].L == slow[i].L;
    CHECK(same);
    CHECK(st.trips > 0);
    CHECK(st.tables + st.kron_calls > 0);
}

TEST_CASE("positive truncation and its tail estimate") {
    const std::int64_t d = 1000000;
    const auto N = truncation_n(d);
    CHECK(tail_estimate(d, static_cast<double>(N)) < 1e-15);
    CHECK(tail_estimate(d, 2.0 * N) < 1e-40);
    CHECK(tail_estimate(d, std::sqrt(1e6)) > 1e-3);
    PosOptions opt;
    opt.digits = 16;
    CHECK(truncation_n(5, opt) == static_cast<std::int64_t>(std::ceil(std::sqrt(5.0 / std::acos(-1.0) * std::log(10.0) * 16))));
}

TEST_CASE("truncation doubling moves values by less than 1e-12") {
    for (std::int64_t d : {5LL, 13LL, 1009LL, 999997LL, 999961LL}) {
        if (!is_fundamental(d)) continue;
        const double a = to_double(oracle_afe_pos(d, 16, 1.0)), b = to_double(oracle_afe_pos(d, 16, 2.0));
        CHECK(std::fabs(a - b) < 1e-12);
    }
}

TEST_CASE("units") {
    CHECK(units_omega(-3) == 6);
    CHECK(units_omega(-4) == 4);
    CHECK(units_omega(-7) == 2);
}

TEST_CASE("domain errors") {
    CHECK_THROWS(lvalue_neg_single(-5));
    CHECK_THROWS(lvalue_pos_single(9));
    CHECK_THROWS(lvalues_neg_block({0, 10, Sign::positive}));
    CHECK_THROWS(oracle_afe_pos(-3));
}
