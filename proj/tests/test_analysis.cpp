#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "quadl/analysis.hpp"
#include "quadl/binio.hpp"
#include "quadl/discriminants.hpp"

using namespace quadl;

namespace {

const MomentPolynomial& q1_neg() {
    static const MomentPolynomial p = q_polynomial(1, Sign::negative);
    return p;
}

const MomentPolynomial& q3_neg() {
    static const MomentPolynomial p = q_polynomial(3, Sign::negative);
    return p;
}

// a series whose sums are the predictions themselves
MomentSeries synthetic(const std::vector<MomentPolynomial>& polys, std::int64_t stride, int n) {
    MomentSeries s;
    s.sign = Sign::negative;
    s.kmax = static_cast<int>(polys.size());
    s.stride = stride;
    s.sums.assign(s.kmax + 1, {});
    s.wsums.assign(s.kmax + 1, {});
    for (int i = 1; i <= n; ++i) {
        const std::int64_t X = stride * i;
        s.checkpoints.push_back(X);
        s.sums[0].push_back(DD(0.0));
        s.wsums[0].push_back(DD(0.0));
        for (int k = 1; k <= s.kmax; ++k) {
            s.sums[k].push_back(prediction(polys[k - 1], static_cast<double>(X)));
            // sum |d| L^k = X S(X) - int_0^X S
            s.wsums[k].push_back(DD(static_cast<double>(X)) *
                                 (s.sums[k].back() - smoothed_prediction(polys[k - 1], static_cast<double>(X))));
        }
    }
    return s;
}

}  // namespace

TEST_CASE("empty and single-record streams") {
    auto s = accumulate(Sign::negative, {}, 100, 10);
    CHECK(s.checkpoints.size() == 10);
    for (int k = 0; k <= 8; ++k) CHECK(s.sums[k].back() == DD(0.0));
    const double L = 0.48;
    auto t = accumulate(Sign::negative, {{-3, L}}, 100, 10);
    for (int k = 1; k <= 8; ++k)
        for (std::size_t i = 0; i < t.checkpoints.size(); ++i)
            CHECK(std::fabs(to_double(t.sums[k][i]) - std::pow(L, k)) < 1e-16);
    CHECK(t.sums[0].front() == DD(1.0));
}

TEST_CASE("L = 1 counts fundamental discriminants") {
    auto flags = sieve_block({0, 1000000, Sign::negative});
    std::vector<DL> stream;
    for (std::int64_t a = 1; a <= 1000000; ++a)
        if (flags.test_abs(a)) stream.push_back({-a, 1.0});
    auto s = accumulate(Sign::negative, stream, 1000000, 100000);
    for (int k = 0; k <= 8; ++k) CHECK(to_double(s.sums[k].back()) == static_cast<double>(flags.count()));
}

TEST_CASE("rejects bad streams") {
    CHECK_THROWS(accumulate(Sign::negative, {{-7, 1.0}, {-4, 1.0}}, 100, 10));
    CHECK_THROWS(accumulate(Sign::negative, {{5, 1.0}}, 100, 10));
    CHECK_THROWS(accumulate(Sign::negative, {{-200, 1.0}}, 100, 10));
    CHECK_THROWS(accumulate(Sign::negative, {}, 100, 30));
}

TEST_CASE("negative inputs are counted") {
    auto s = accumulate(Sign::positive, {{5, -0.5}, {8, 0.3}}, 10, 10);
    CHECK(s.negative_count == 1);
}

TEST_CASE("block order does not matter") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::vector<std::vector<DL>> blocks(5);
    std::vector<DL> all;
    for (int b = 0; b < 5; ++b)
        for (std::int64_t a = b * 1000 + 1; a <= (b + 1) * 1000; a += 7) {
            blocks[b].push_back({-a, u(rng)});
            all.push_back(blocks[b].back());
        }
    std::vector<MomentSegment> fwd, rev;
    for (int b = 0; b < 5; ++b) {
        auto s = segment_moments({b * 1000, (b + 1) * 1000, Sign::negative}, blocks[b], 500);
        fwd.insert(fwd.end(), s.begin(), s.end());
    }
    for (int b = 4; b >= 0; --b) {
        auto s = segment_moments({b * 1000, (b + 1) * 1000, Sign::negative}, blocks[b], 500);
        rev.insert(rev.end(), s.begin(), s.end());
    }
    auto a = assemble_series(Sign::negative, 500, fwd), b = assemble_series(Sign::negative, 500, rev);
    auto c = accumulate(Sign::negative, all, 5000, 500);
    for (int k = 0; k <= 8; ++k) {
        CHECK(a.sums[k] == b.sums[k]);
        CHECK(a.sums[k] == c.sums[k]);
        CHECK(a.wsums[k] == c.wsums[k]);
    }
    for (int k = 0; k <= 8; ++k)
        for (std::size_t i = 1; i < a.checkpoints.size(); ++i) REQUIRE(a.sums[k][i - 1] <= a.sums[k][i]);
    fwd.pop_back();
    fwd.erase(fwd.begin() + 3);
    CHECK_THROWS(assemble_series(Sign::negative, 500, fwd));
}

TEST_CASE("self-consistency: R = 1 and delta = 0") {
    const auto s = synthetic({q1_neg(), q_polynomial(2, Sign::negative), q3_neg()}, 1000000, 20);
    for (int k = 1; k <= 3; ++k)
        for (auto X : s.checkpoints) {
            const MomentPolynomial& p = k == 1 ? q1_neg() : k == 3 ? q3_neg() : q_polynomial(2, Sign::negative);
            CHECK(std::fabs(ratio_R(s, p, k, X) - 1.0) < 1e-15);
            CHECK(difference_delta(s, p, k, X) == 0.0);
            CHECK(std::fabs(smoothed_delta(s, p, k, X)) < 1e-20 * to_double(s.sums[k][s.index_of(X)]) + 1e-9);
        }
    CHECK_THROWS(ratio_R(s, q1_neg(), 1, 1500000));
    CHECK_THROWS(ratio_R(s, q1_neg(), 2, 1000000));
}

TEST_CASE("running averages") {
    std::vector<std::int64_t> xs;
    std::vector<double> c, lin;
    for (int i = 1; i <= 100; ++i) {
        xs.push_back(i * 1000000LL);
        c.push_back(2.5);
        lin.push_back(i);
    }
    auto a = running_average(xs, c, 10000000);
    CHECK(a.size() == 10);
    for (const auto& p : a) CHECK(p.value == 2.5);
    auto b = running_average(xs, lin, 10000000);
    for (const auto& p : b) CHECK(p.value == doctest::Approx((p.X / 1000000 + 1) / 2.0));
}

TEST_CASE("running average approximates the smoothed difference") {
    // L-values with a slowly varying bias, so delta(X) is smooth
    const std::int64_t xmax = 2000000, fine = 1000;
    auto flags = sieve_block({0, xmax, Sign::negative});
    std::vector<DL> stream;
    for (std::int64_t a = 1; a <= xmax; ++a)
        if (flags.test_abs(a)) stream.push_back({-a, 1.0 + 0.2 * std::sin(a * 1e-6)});
    auto s = accumulate(Sign::negative, stream, xmax, fine, 1);
    std::vector<double> deltas;
    for (auto X : s.checkpoints) deltas.push_back(difference_delta(s, q1_neg(), 1, X));
    auto avg = running_average(s.checkpoints, deltas, 500000);
    for (const auto& p : avg) {
        const double direct = smoothed_delta(s, q1_neg(), 1, p.X);
        const double scale = std::fabs(to_double(s.sums[1][s.index_of(p.X)]));
        CHECK(std::fabs(p.value - direct) < 3.0 * scale * fine / p.X);
    }
}

TEST_CASE("Zhang curve") {
    CHECK(zhang_curve(Sign::positive, 0.0) == 0.0);
    CHECK(zhang_curve(Sign::positive, 1e10) == doctest::Approx(-0.08 * std::pow(10.0, 7.5)).epsilon(1e-14));
    CHECK(zhang_curve(Sign::negative, 1e10) == doctest::Approx(-0.04 * std::pow(10.0, 7.5)).epsilon(1e-14));
    const double slope = (std::log10(std::fabs(zhang_curve(Sign::negative, 1e10))) -
                          std::log10(std::fabs(zhang_curve(Sign::negative, 1e8)))) / 2.0;
    CHECK(std::fabs(slope - 0.75) < 1e-14);
    CHECK(ZhangConstants::b_total == doctest::Approx(-0.21));
    CHECK_THROWS(zhang_curve(Sign::negative, -1.0));
}

TEST_CASE("CSV format and round trip") {
    const auto s = synthetic({q1_neg(), q_polynomial(2, Sign::negative), q3_neg()}, 1000000, 30);
    const std::string text = format_csv(s, q3_neg(), 3, 10000000);
    CHECK(text.rfind(std::string(csv_header) + "\n", 0) == 0);
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 3);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::int64_t X = (r + 1) * 10000000LL;
        const std::size_t i = s.index_of(X);
        CHECK(rows[r].X == static_cast<double>(X));
        CHECK(rows[r].sum == doctest::Approx(to_double(s.sums[3][i])).epsilon(1e-15));
        CHECK(rows[r].R == doctest::Approx(ratio_R(s, q3_neg(), 3, X)).epsilon(1e-15));
        CHECK(rows[r].zhang == zhang_curve(Sign::negative, static_cast<double>(X)));
        CHECK(rows[r].log10X == doctest::Approx(std::log10(static_cast<double>(X))));
        CHECK(std::isnan(rows[r].log10absavg));  // average difference is exactly 0
    }
    const auto rows1 = parse_csv(format_csv(s, q1_neg(), 1, 10000000));
    CHECK(std::isnan(rows1[0].zhang));
    CHECK_THROWS(parse_csv("X,sum\n1,2\n"));
}

TEST_CASE("series file round trip") {
    auto s = accumulate(Sign::positive, {{5, 0.23}, {8, 0.37}, {12, 0.5}}, 100, 10);
    const auto dir = std::filesystem::temp_directory_path() / "quadl_test_series";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "s.qmom").string();
    save_series(s, path);
    auto t = load_series(path);
    CHECK(t.sign == Sign::positive);
    CHECK(t.checkpoints == s.checkpoints);
    for (int k = 0; k <= 8; ++k) CHECK(t.sums[k] == s.sums[k]);
    auto bytes = read_file_bytes(path);
    bytes[60] ^= 4;
    write_file_atomic(path, bytes);
    CHECK_THROWS(load_series(path));
    std::filesystem::remove_all(dir);
}
