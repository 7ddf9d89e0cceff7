#include "quadl/lcentral_neg.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "quadl/kronecker.hpp"
#include "quadl/specfun.hpp"

namespace quadl {

namespace {

constexpr double pi = std::numbers::pi;
// K_0 arguments above this contribute below 1e-16 and are skipped
constexpr double k_cut = 37.0;
constexpr double sigma0[8] = {0, 1, 2, 2, 3, 2, 4, 2};

// 8 sum_n sigma_0(n) cos(n theta) K_0(n x1) over n x1 <= 37 (the table's range)
inline double bessel_tail(double x1, double cos_theta, const TaylorTable& kt, std::uint64_t& nk) {
    double c_prev = 1.0, c_cur = cos_theta, sum = 0.0;
    for (int n = 1; n <= 7; ++n) {
        const double x = n * x1;
        if (x > k_cut) break;
        sum += sigma0[n] * c_cur * k0_fast_unchecked(x, kt);
        ++nk;
        const double c_next = 2.0 * cos_theta * c_cur - c_prev;
        c_prev = c_cur;
        c_cur = c_next;
    }
    return 8.0 * sum;
}

}  // namespace

int units_omega(std::int64_t d) {
    if (d == -3) return 6;
    if (d == -4) return 4;
    return 2;
}

double form_contribution(const ReducedForm& f, double logAbsD) {
    const double a = f.a;
    const double inv_sqrt_a = 1.0 / std::sqrt(a);
    const double absd = static_cast<double>(-f.d);
    double z = 2.0 * inv_sqrt_a * (euler_gamma - std::log(8.0 * pi * a)) + inv_sqrt_a * logAbsD;
    const double x1 = pi * std::sqrt(absd) / a;
    if (x1 <= k_cut) {
        std::uint64_t nk = 0;
        z += inv_sqrt_a * bessel_tail(x1, std::cos(pi * f.b / a), k0_table(), nk);
    }
    return f.weight * z;
}

std::vector<DL> lvalues_neg_block(const Block& block, NegStats* stats, int prefetch_distance) {
    if (block.sign != Sign::negative) throw std::invalid_argument("lvalues_neg_block: negative block required");
    const FundamentalFlags flags = sieve_block(block);
    const std::int64_t lo = block.lo, len = block.length();
    std::vector<LRecord> recs(static_cast<std::size_t>(len));
    for (std::int64_t j = 0; j < len; ++j) recs[j].logAbsD = std::log(static_cast<double>(lo + 1 + j));

    const TaylorTable& kt = k0_table();
    std::int64_t cur_a = -1, cur_b = -1;
    double inv_sqrt_a = 0, lead = 0, thr = 0, pi_over_a = 0, cos_b = 1;
    std::int64_t step = 0;
    std::uint64_t nk = 0;
    NegStats st;

    auto visit = [&](const ReducedForm& f) {
        if (f.a != cur_a) {
            cur_a = f.a;
            const double a = static_cast<double>(cur_a);
            inv_sqrt_a = 1.0 / std::sqrt(a);
            lead = 2.0 * inv_sqrt_a * (euler_gamma - std::log(8.0 * pi * a));
            thr = k_cut * k_cut * a * a / (pi * pi);
            pi_over_a = pi / a;
            step = 4 * cur_a * prefetch_distance;
            cur_b = -1;
        }
        if (f.b != cur_b) {
            cur_b = f.b;
            cos_b = std::cos(pi_over_a * static_cast<double>(cur_b));
        }
        const std::int64_t absd = -f.d;
        const std::int64_t j = absd - lo - 1;
        if (prefetch_distance > 0 && j + step < len) __builtin_prefetch(&recs[j + step], 1, 1);
        LRecord& r = recs[j];
        double z = lead + inv_sqrt_a * r.logAbsD;
        const double dabs = static_cast<double>(absd);
        if (dabs <= thr) {
            const double x1 = pi_over_a * std::sqrt(dabs);
            z += inv_sqrt_a * bessel_tail(x1, cos_b, kt, nk);
        }
        r.L += f.weight * z;
    };
    enumerate_block(block, visit, &st.forms);

    std::vector<DL> out;
    out.reserve(static_cast<std::size_t>(flags.count()));
    for (std::int64_t j = 0; j < len; ++j) {
        if (!flags.test(j)) continue;
        const std::int64_t d = -(lo + 1 + j);
        out.push_back({d, recs[j].L / (units_omega(d) * zeta_half)});
    }
    st.k_terms = nk;
    if (stats) {
        stats->forms.visits += st.forms.visits;
        stats->forms.triples += st.forms.triples;
        stats->forms.gcd_calls += st.forms.gcd_calls;
        stats->k_terms += st.k_terms;
    }
    return out;
}

double lvalue_neg_single(std::int64_t d) {
    if (d >= 0 || !is_fundamental(d)) throw std::invalid_argument("lvalue_neg_single: fundamental d < 0 required");
    const std::int64_t D = -d;
    const double logd = std::log(static_cast<double>(D));
    double sum = 0.0;
    for (std::int64_t a = 1; 3 * a * a <= D; ++a) {
        for (std::int64_t b = (D & 1); b <= a; b += 2) {
            const std::int64_t num = b * b + D;
            if (num % (4 * a) != 0) continue;
            const std::int64_t c = num / (4 * a);
            if (c < a || std::gcd(std::gcd(a, b), c) != 1) continue;
            ReducedForm f{static_cast<std::int32_t>(a), static_cast<std::int32_t>(b), static_cast<std::int32_t>(c), d,
                          (b > 0 && b < a && c > a) ? 2 : 1};
            sum += form_contribution(f, logd);
        }
    }
    return sum / (units_omega(d) * zeta_half);
}

DD oracle_afe_neg(std::int64_t d, int digits, double n_factor) {
    if (d >= 0 || !is_fundamental(d)) throw std::invalid_argument("oracle_afe_neg: fundamental d < 0 required");
    if (digits < 1 || digits > 31) throw std::invalid_argument("oracle_afe_neg: digits in [1, 31]");
    const double D = static_cast<double>(-d);
    const auto N = static_cast<std::int64_t>(std::ceil(n_factor * std::sqrt(D / pi * std::log(10.0) * digits)));
    const DD scale = ddc::pi / DD(static_cast<double>(-d));
    DD sum(0.0);
    for (std::int64_t n = 1; n <= N; ++n) {
        const int chi = kronecker(d, n);
        if (chi == 0) continue;
        const DD dn(static_cast<double>(n));
        DD term = upper_gamma(DD(0.75), scale * sqr(dn), ddc::gamma_three_quarter) / sqrt(dn);
        sum += chi > 0 ? term : -term;
    }
    return ldexp(sum, 1) / ddc::gamma_three_quarter;
}

}  // namespace quadl
