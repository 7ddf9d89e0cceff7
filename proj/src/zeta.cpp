#include "quadl/zeta.hpp"

#include <cmath>
#include <stdexcept>

namespace quadl {

namespace {

constexpr int em_terms = 60;     // Bernoulli corrections available
constexpr int em_shift = 40;     // terms summed directly before the correction

DD dd_int(std::int64_t n) { return DD(static_cast<double>(n)); }

}  // namespace

const std::vector<DD>& bernoulli_scaled() {
    static const std::vector<DD> b = [] {
        const std::size_t n = 2 * em_terms + 2;
        Series f(n);
        DD fact(1.0);
        for (std::size_t m = 0; m < n; ++m) {
            fact = fact * dd_int(static_cast<std::int64_t>(m + 1));
            f[m] = 1.0 / fact;  // (e^x - 1)/x = sum x^m/(m+1)!
        }
        const Series g = series_inv(f, n);
        std::vector<DD> out(em_terms + 1);
        for (int j = 0; j <= em_terms; ++j) out[j] = g[2 * j];
        return out;
    }();
    return b;
}

DD hurwitz_zeta(const DD& s, const DD& c) {
    if (!(s.hi > 1.0) || !(c.hi > 0.0)) throw std::domain_error("hurwitz_zeta: need s > 1, c > 0");
    const auto& b = bernoulli_scaled();
    DD sum(0.0);
    for (int m = 0; m < em_shift; ++m) sum += exp(-s * log(c + dd_int(m)));
    const DD M = c + dd_int(em_shift);
    const DD logM = log(M);
    const DD Ms = exp(-s * logM);
    sum += M * Ms / (s - 1.0);
    sum += ldexp(Ms, -1);
    // B_{2j}/(2j)! s(s+1)...(s+2j-2) M^{-s-2j+1}
    DD rising = s, pw = Ms / M;
    const DD inv_M2 = 1.0 / sqr(M);
    for (int j = 1; j <= em_terms; ++j) {
        const DD term = b[j] * rising * pw;
        sum += term;
        if (std::fabs(term.hi) < 1e-34 * std::fabs(sum.hi)) break;
        rising = rising * (s + dd_int(2 * j - 1)) * (s + dd_int(2 * j));
        pw = pw * inv_M2;
    }
    return sum;
}

DD digamma(const DD& c) {
    if (!(c.hi > 0.0)) throw std::domain_error("digamma: need c > 0");
    const auto& b = bernoulli_scaled();
    DD sum(0.0);
    for (int m = 0; m < em_shift; ++m) sum -= 1.0 / (c + dd_int(m));
    const DD x = c + dd_int(em_shift);
    sum += log(x) - 0.5 / x;
    // - sum B_{2j} / (2j x^{2j});  B_{2j}/(2j) = b_j (2j-1)!
    const DD inv_x2 = 1.0 / sqr(x);
    DD pw = inv_x2, fact(1.0);
    for (int j = 1; j <= em_terms; ++j) {
        const DD term = b[j] * fact * pw;
        sum -= term;
        if (std::fabs(term.hi) < 1e-34 * std::fabs(sum.hi)) break;
        fact = fact * dd_int(2 * j) * dd_int(2 * j + 1);
        pw = pw * inv_x2;
    }
    return sum;
}

DD polygamma(int n, const DD& c) {
    if (n < 0) throw std::domain_error("polygamma: n >= 0");
    if (n == 0) return digamma(c);
    DD fact(1.0);
    for (int j = 2; j <= n; ++j) fact = fact * dd_int(j);
    const DD z = hurwitz_zeta(dd_int(n + 1), c) * fact;
    return (n % 2 == 1) ? z : -z;
}

Series zeta_taylor(double s0, std::size_t n) {
    if (!(s0 > 1.0)) throw std::domain_error("zeta_taylor: need s0 > 1");
    const auto& b = bernoulli_scaled();
    const DD S0(s0);
    Series sum(n, DD(0.0));
    for (int m = 1; m < em_shift; ++m) {
        const DD lm = log(dd_int(m));
        sum = series_add(sum, series_scale(series_exp_linear(-lm, n), exp(-S0 * lm)));
    }
    const DD M = dd_int(em_shift), logM = log(M);
    const Series Mx = series_exp_linear(-logM, n);  // M^{-x}
    const DD Ms = exp(-S0 * logM);
    // M^{1-s}/(s-1)
    sum = series_add(sum, series_scale(series_mul(Mx, series_inv(Series{S0 - 1.0, DD(1.0)}, n), n), M * Ms));
    sum = series_add(sum, series_scale(Mx, ldexp(Ms, -1)));
    // B_{2j}/(2j)! (s)_{2j-1} M^{-s-2j+1}
    Series rising{S0, DD(1.0)};
    DD pw = Ms / M;
    const DD inv_M2 = 1.0 / sqr(M);
    for (int j = 1; j <= em_terms; ++j) {
        const Series term = series_scale(series_mul(rising, Mx, n), b[j] * pw);
        sum = series_add(sum, term);
        if (std::fabs(term[0].hi) < 1e-36) break;
        rising = series_mul(rising, Series{S0 + dd_int(2 * j - 1), DD(1.0)}, n);
        rising = series_mul(rising, Series{S0 + dd_int(2 * j), DD(1.0)}, n);
        pw = pw * inv_M2;
    }
    return sum;
}

Series eta_taylor(std::size_t n) {
    const auto& b = bernoulli_scaled();
    Series body(n, DD(0.0));  // zeta(1+x) minus the M^{-x}/x part, later times x
    for (int m = 1; m < em_shift; ++m) {
        const DD lm = log(dd_int(m));
        body = series_add(body, series_scale(series_exp_linear(-lm, n), 1.0 / dd_int(m)));
    }
    const DD M = dd_int(em_shift), logM = log(M);
    const Series Mx = series_exp_linear(-logM, n);
    body = series_add(body, series_scale(Mx, 0.5 / M));
    Series rising{DD(1.0), DD(1.0)};
    DD pw = 1.0 / sqr(M);
    const DD inv_M2 = pw;
    for (int j = 1; j <= em_terms; ++j) {
        const Series term = series_scale(series_mul(rising, Mx, n), b[j] * pw);
        body = series_add(body, term);
        if (std::fabs(term[0].hi) < 1e-36) break;
        rising = series_mul(rising, Series{dd_int(2 * j), DD(1.0)}, n);
        rising = series_mul(rising, Series{dd_int(2 * j + 1), DD(1.0)}, n);
        pw = pw * inv_M2;
    }
    // x * body + M^{-x}
    Series r(n, DD(0.0));
    for (std::size_t i = 0; i + 1 < n; ++i) r[i + 1] = body[i];
    return series_add(r, Mx);
}

CDD lgamma(const CDD& z) {
    if (!(z.re.hi > 0.0)) throw std::domain_error("lgamma: need Re z > 0");
    const auto& b = bernoulli_scaled();
    CDD shift(0.0);
    CDD w = z;
    while (w.re.hi < 25.0) {
        shift += log(w);
        w = w + CDD(1.0);
    }
    CDD r = (w - CDD(0.5)) * log(w) - w + CDD(ddc::half_log_two_pi);
    // B_{2j} / (2j (2j-1) w^{2j-1}) = b_j (2j-2)! / w^{2j-1}
    const CDD inv_w = CDD(1.0) / w;
    const CDD inv_w2 = inv_w * inv_w;
    CDD pw = inv_w;
    DD fact(1.0);
    for (int j = 1; j <= em_terms; ++j) {
        const CDD term = pw * (b[j] * fact);
        r += term;
        if (std::fabs(to_double(abs(term))) < 1e-34) break;
        fact = fact * dd_int(2 * j - 1) * dd_int(2 * j);
        pw = pw * inv_w2;
    }
    return r - shift;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(n + 1), false);
    for (std::int64_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

int mobius(std::int64_t n) {
    if (n < 1) throw std::domain_error("mobius: n >= 1");
    int mu = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

}  // namespace quadl
