#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quadl/psring.hpp"
#include "quadl/zeta.hpp"

using namespace quadl;

namespace {
double rel(const DD& a, double b) { return std::fabs(to_double(a) - b) / std::fabs(b); }

std::int64_t z_mu(const std::vector<std::uint8_t>& parts) {
    std::int64_t z = 1;
    std::vector<int> mult(64, 0);
    for (auto p : parts) {
        z *= p;
        z *= ++mult[p];
    }
    return z;
}
}  // namespace

TEST_CASE("zeta and polygamma values") {
    CHECK(rel(riemann_zeta(DD(3.0)), 1.2020569031595942854) < 1e-16);
    CHECK(rel(riemann_zeta(DD(2.0)), std::numbers::pi * std::numbers::pi / 6) < 1e-16);
    CHECK_THROWS(riemann_zeta(DD(0.5)));
    CHECK(rel(digamma(DD(1.0)), -0.57721566490153286061) < 1e-16);
    // psi'(1/4) = pi^2 + 8 G with Catalan's constant G
    CHECK(rel(polygamma(1, DD(0.25)), 17.197329154507110739) < 1e-16);
    const CDD lg = lgamma(CDD(DD(5.0), DD(0.0)));
    CHECK(rel(lg.re, std::log(24.0)) < 1e-16);
    CHECK(std::fabs(to_double(lg.im)) < 1e-30);
}

TEST_CASE("eta is x zeta(1 + x)") {
    const Series e = eta_taylor(30);
    CHECK(rel(e[0], 1.0) < 1e-30);
    CHECK(rel(e[1], 0.57721566490153286061) < 1e-16);
    const DD x(0.3);
    CHECK(rel(series_eval(e, x), to_double(x * riemann_zeta(1.0 + x))) < 1e-15);
}

TEST_CASE("primes and mobius") {
    CHECK(primes_up_to(100).size() == 25);
    CHECK(primes_up_to(1000000).size() == 78498);
    CHECK(mobius(1) == 1);
    CHECK(mobius(6) == 1);
    CHECK(mobius(12) == 0);
    CHECK(mobius(30) == -1);
}

TEST_CASE("characters of the staircase shapes") {
    CHECK(character({2, 1}, {1, 1, 1}) == 2);
    CHECK(character({2, 1}, {2, 1}) == 0);
    CHECK(character({2, 1}, {3}) == -1);
    CHECK(character({3, 2, 1}, {1, 1, 1, 1, 1, 1}) == 16);
    for (int k : {2, 3, 4, 5}) {
        const int D = k * (k + 1) / 2;
        PartitionBasis B(D);
        auto chi = staircase_characters(B, k);
        // sum over mu of chi(mu)^2 / z_mu = 1
        DD s(0.0);
        for (std::size_t i = B.begin(D); i < B.begin(D + 1); ++i)
            s += sqr(chi[i - B.begin(D)]) / static_cast<double>(z_mu(B.parts(i)));
        CHECK(std::fabs(to_double(s) - 1.0) < 1e-25);
    }
}

TEST_CASE("ring operations") {
    const int D = 10, k = 3;
    PartitionBasis B(D);
    Series f(D + 1);
    for (int l = 0; l <= D; ++l) f[l] = DD(1.0 / (l + 2.0));
    const RingElt lin = ring_linear(B, f, k);
    const RingElt e1 = ring_exp(B, lin), e2 = ring_exp_linear(B, f, k);
    double err = 0;
    for (std::size_t i = 0; i < B.size(); ++i) err = std::max(err, std::fabs(to_double(e1[i] - e2[i])));
    CHECK(err < 1e-28);
    const RingElt back = ring_log(B, e1);
    err = 0;
    for (std::size_t i = 0; i < B.size(); ++i) err = std::max(err, std::fabs(to_double(back[i] - lin[i])));
    CHECK(err < 1e-28);

    // a polynomial of degree <= D is represented exactly
    const std::vector<double> z = {0.3, -0.2, 0.45};
    std::vector<CDD> p(D + 1, CDD(0.0));
    for (int l = 1; l <= D; ++l)
        for (double zj : z) p[l] += CDD(std::pow(zj, l));
    auto fval = [&](double x) {
        double s = 0;
        for (int l = D; l >= 0; --l) s = s * x + to_double(f[l]);
        return s;
    };
    double direct = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) direct += fval(z[i] + z[j]);
    CHECK(std::fabs(to_double(ring_eval(B, ring_pair(B, f, k), p).re) - direct) < 1e-14);
    double dl = 0;
    for (double zj : z) dl += fval(zj);
    CHECK(std::fabs(to_double(ring_eval(B, lin, p).re) - dl) < 1e-14);
}

TEST_CASE("partition basis sizes and products") {
    PartitionBasis B(12);
    CHECK(B.size() == 1 + 1 + 2 + 3 + 5 + 7 + 11 + 15 + 22 + 30 + 42 + 56 + 77);
    const auto i = B.find({3, 1}), j = B.find({2, 2, 1});
    REQUIRE(i >= 0);
    REQUIRE(j >= 0);
    CHECK(B.product(i, j) == B.find({3, 2, 2, 1, 1}));
    CHECK(B.find({13}) == -1);
}
