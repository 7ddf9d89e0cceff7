#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quadl/cfkrs.hpp"
#include "quadl/zeta.hpp"

using namespace quadl;

namespace {
double rel(const DD& a, const DD& b) { return std::fabs(to_double((a - b) / b)); }
}  // namespace

TEST_CASE("x_factor is 1 at the centre") {
    for (int a : {0, 1}) {
        const CDD v = x_factor(CDD(0.5), a);
        CHECK(std::fabs(to_double(v.re) - 1.0) < 1e-30);
        CHECK(std::fabs(to_double(v.im)) < 1e-30);
        const CDD z(DD(0.05), DD(0.02));
        const CDD w = log_x_factor_centered(z, a);
        const CDD u = x_factor(CDD(0.5) + z, a);
        CHECK(std::fabs(to_double(abs(exp(w) - u))) < 1e-28);
    }
    // functional equation: X(s) X(1 - s) = 1
    const CDD s(DD(0.3), DD(1.7));
    const CDD prod = x_factor(s, 1) * x_factor(CDD(1.0) - s, 1);
    CHECK(std::fabs(to_double(prod.re) - 1.0) < 1e-28);
}

TEST_CASE("arithmetic factor") {
    double tail = 0;
    const DD a1 = a_k_factor(1, 1000, &tail);
    CHECK(tail < 1e-3);
    CHECK(rel(a_k_factor(1, 10000), a1) < 1e-9);
    for (int k : {1, 2, 3}) {
        const CDD v = A_k_eval(std::vector<CDD>(k, CDD(0.0)));
        CHECK(rel(v.re, a_k_factor(k)) < 1e-10);
    }
    CHECK(rel(ks_leading_coefficient(1), a1 / 2.0) < 1e-30);
    CHECK(rel(ks_leading_coefficient(2), a_k_factor(2) / 24.0) < 1e-30);
    CHECK_THROWS(A_k_eval({CDD(0.3)}));
}

TEST_CASE("prime tail series against a direct sum") {
    // sum_{1000 < p <= 10^7} p^-2 plus the tail integral of 1/(t^2 log t)
    DD direct(0.0);
    for (auto p : primes_up_to(10000000))
        if (p > 1000) direct += 1.0 / (static_cast<double>(p) * static_cast<double>(p));
    const double X = 1e7;
    direct += 1.0 / (X * std::log(X));
    CHECK(rel(prime_tail_series(2, 1000, 1)[0], direct) < 1e-5);
}

TEST_CASE("moment polynomials for small k") {
    for (int k = 1; k <= 4; ++k)
        for (Sign s : {Sign::negative, Sign::positive}) {
            CAPTURE(k);
            const auto c = q_polynomial(k, s, {}, ResidueMethod::contour);
            const auto r = q_polynomial(k, s, {}, ResidueMethod::series);
            CHECK(c.degree() == moment_degree(k));
            CHECK(r.degree() == moment_degree(k));
            CHECK(rel(c.coeffs.back(), ks_leading_coefficient(k)) < 1e-19);
            for (int m = 0; m <= c.degree(); ++m) CHECK(std::fabs(to_double(c.coeffs[m] - r.coeffs[m])) < 1e-15);
            CHECK(c.max_imag < 1e-20);
        }
}

TEST_CASE("residues do not depend on the contour") {
    ResidueConfig wide;
    wide.radius = 0.15;
    ResidueConfig fine;
    fine.points = 64;
    for (int k : {2, 3}) {
        const auto base = q_polynomial(k, Sign::negative, {}, ResidueMethod::contour);
        for (const auto& cfg : {wide, fine}) {
            const auto other = q_polynomial(k, Sign::negative, cfg, ResidueMethod::contour);
            for (int m = 0; m <= base.degree(); ++m)
                CHECK(std::fabs(to_double(base.coeffs[m] - other.coeffs[m])) < 1e-8 * std::fabs(to_double(base.coeffs[m])));
        }
    }
}

TEST_CASE("series route for k = 5, 6") {
    for (int k : {5, 6}) {
        const auto p = q_polynomial(k, Sign::negative);
        CHECK(p.method == "series");
        CHECK(p.degree() == moment_degree(k));
        CHECK(rel(p.coeffs.back(), ks_leading_coefficient(k)) < 1e-20);
    }
    CHECK_THROWS(q_polynomial(5, Sign::negative, {}, ResidueMethod::contour));
}

TEST_CASE("config validation") {
    ResidueConfig c;
    c.digits = 50;
    CHECK_THROWS(q_polynomial(1, Sign::negative, c));
    c = {};
    c.points = 24;
    CHECK_THROWS(c.validate());
    c = {};
    c.radius = 0.6;
    CHECK_THROWS(c.validate());
    CHECK_THROWS(q_polynomial(9, Sign::negative));
}

TEST_CASE("integrals of Q(log t)") {
    MomentPolynomial p;
    p.coeffs = {DD(1.0)};
    const double X = 12345.0;
    CHECK(rel(q_integrated(p, X), DD(X - 1.0)) < 1e-30);
    CHECK(rel(q_integrated_weighted(p, X), DD(X - 1.0) - (DD(X) * X - 1.0) / (2.0 * X)) < 1e-28);
    p.coeffs = {DD(0.0), DD(1.0)};
    const DD L = log(DD(X));
    CHECK(rel(q_integrated(p, X), DD(X) * L - X + 1.0) < 1e-30);

    // degree 6 against Gauss-Legendre in u = log t
    p.coeffs = {DD(0.3), DD(-1.1), DD(0.7), DD(0.05), DD(-0.013), DD(0.002), DD(1e-4)};
    const double Y = 1e5, U = std::log(Y);
    const double xg[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
    const double wg[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                          0.2369268850561891};
    long double quad = 0;
    const int panels = 400;
    for (int i = 0; i < panels; ++i) {
        const double a = U * i / panels, b = U * (i + 1) / panels;
        for (int g = 0; g < 5; ++g) {
            const double u = 0.5 * (a + b) + 0.5 * (b - a) * xg[g];
            quad += 0.5L * (b - a) * wg[g] * to_double(p.eval(DD(u))) * std::exp(static_cast<long double>(u));
        }
    }
    CHECK(std::fabs(to_double(q_integrated(p, Y)) / static_cast<double>(quad) - 1.0) < 1e-12);
}

// integrated predictions at 1e10 and 2e9 against reference values
TEST_CASE("integrated predictions at large X") {
    const DD f = DD(3.0) / sqr(ddc::pi);
    const auto q1n = q_polynomial(1, Sign::negative), q1p = q_polynomial(1, Sign::positive);
    const auto q3n = q_polynomial(3, Sign::negative);
    CHECK(rel(f * q_integrated(q1n, 1e10), DD(25458526443.085)) < 1e-8);
    CHECK(rel(f * q_integrated(q1p, 2e9), DD(4074392042.9388)) < 1e-8);
    CHECK(rel(f * q_integrated(q3n, 1e10), DD(35923434720074.0)) < 1e-6);
}

TEST_CASE("polynomial text round trip") {
    const auto p = q_polynomial(2, Sign::positive);
    const auto q = parse_polynomial(format_polynomial(p));
    CHECK(q.k == 2);
    CHECK(q.sign == Sign::positive);
    for (int m = 0; m <= p.degree(); ++m) CHECK(rel(q.coeffs[m], p.coeffs[m]) < 1e-24);
    CHECK_THROWS(parse_polynomial("k 2\nsign pos\nc 0 1\n"));
    CHECK_THROWS(parse_polynomial("bogus 1\n"));
}
