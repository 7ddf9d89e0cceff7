#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "cfkrs_internal.hpp"
#include "quadl/zeta.hpp"

namespace quadl {

namespace detail {

const std::vector<TailTerm>& tail_terms() {
    // t^4 and t^6 coefficients of log L_p in the power sums a, b, c, d, e of y
    static const std::vector<TailTerm> terms = {
        {2, -1, 12, {1, 1, 1, 1}}, {2, -1, 2, {1, 1}},       {2, 1, 3, {1, 3}},  {2, -1, 4, {2, 2}},
        {2, -1, 2, {2}},           {3, 1, 45, {1, 1, 1, 1, 1, 1}}, {3, 5, 24, {1, 1, 1, 1}},
        {3, -1, 9, {1, 1, 1, 3}},  {3, 1, 4, {1, 1, 2}},     {3, 1, 2, {1, 1}},  {3, -1, 3, {1, 3}},
        {3, 1, 5, {1, 5}},         {3, 1, 8, {2, 2}},        {3, 1, 2, {2}},     {3, -1, 9, {3, 3}},
        {3, -1, 4, {4}},
    };
    return terms;
}

const Series& cached_prime_tail(int n, std::int64_t prime_cutoff, std::size_t len) {
    static std::mutex m;
    static std::map<std::tuple<int, std::int64_t, std::size_t>, Series> cache;
    std::lock_guard<std::mutex> lock(m);
    auto key = std::make_tuple(n, prime_cutoff, len);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, prime_tail_series(n, prime_cutoff, len)).first;
    return it->second;
}

RingElt tail_ring(const PartitionBasis& B, int k, std::int64_t prime_cutoff) {
    const int D = B.max_weight();
    RingElt out = ring_zero(B);
    DD fact[64];
    fact[0] = DD(1.0);
    for (int w = 1; w < 64; ++w) fact[w] = fact[w - 1] * static_cast<double>(w);
    for (const auto& term : tail_terms()) {
        const Series& tau = cached_prime_tail(term.n, prime_cutoff, static_cast<std::size_t>(D + 1));
        // prod_r sum_l e_r^l P_l / l!; its weight-w part times w! is sum over tuples of (sum e z)^w
        RingElt prod;
        for (std::size_t r = 0; r < term.e.size(); ++r) {
            Series f(static_cast<std::size_t>(D + 1));
            DD pw(1.0);
            for (int l = 0; l <= D; ++l) {
                f[l] = pw / fact[l];
                pw = pw * static_cast<double>(term.e[r]);
            }
            RingElt lin = ring_linear(B, f, k);
            prod = r == 0 ? lin : ring_mul(B, prod, lin);
        }
        const DD coef = DD(term.num) / term.den;
        for (int w = 0; w <= D; ++w) {
            const DD s = coef * tau[w] * fact[w];
            for (std::size_t i = B.begin(w); i < B.begin(w + 1); ++i) out[i] += s * prod[i];
        }
    }
    return out;
}

RingElt local_log_ring(const PartitionBasis& B, int k, std::int64_t p) {
    const std::size_t len = static_cast<std::size_t>(B.max_weight() + 1);
    const DD P(static_cast<double>(p));
    const DD logp = log(P), invp = 1.0 / P, t = sqrt(invp);
    const Series e = series_exp_linear(-logp, len);  // p^{-s}
    // sum_{i<=j} log(1 - p^{-1 - z_i - z_j})
    Series one_minus(len);
    for (std::size_t l = 0; l < len; ++l) one_minus[l] = -(invp * e[l]);
    one_minus[0] += 1.0;
    RingElt out = ring_pair(B, series_log(one_minus, len), k);
    // log(1/2 (prod (1 - t y_j)^{-1} + prod (1 + t y_j)^{-1}) + 1/p) - log(1 + 1/p)
    Series hm(len), hp(len);
    for (std::size_t l = 0; l < len; ++l) {
        hm[l] = -(t * e[l]);
        hp[l] = t * e[l];
    }
    hm[0] += 1.0;
    hp[0] += 1.0;
    hm = series_scale(series_log(hm, len), DD(-1.0));
    hp = series_scale(series_log(hp, len), DD(-1.0));
    RingElt f = ring_exp_linear(B, hm, k);
    ring_axpy(f, DD(1.0), ring_exp_linear(B, hp, k));
    for (auto& c : f) c = ldexp(c, -1);
    f[0] += invp;
    RingElt lf = ring_log(B, f);
    lf[0] -= log(1.0 + invp);
    ring_axpy(out, DD(1.0), lf);
    return out;
}

}  // namespace detail

namespace {

// log Gamma on the whole plane minus the poles; reflection for Re z < 1/2
CDD lgamma_any(const CDD& z) {
    const double nearest = std::round(z.re.hi);
    if (nearest <= 0.0 && std::hypot(to_double(z.re - nearest), to_double(z.im)) < 1e-12)
        throw std::domain_error("x_factor: Gamma argument at a pole");
    if (z.re.hi >= 0.5) return lgamma(z);
    const CDD piz = z * ddc::pi;
    const CDD iw(-piz.im, piz.re);  // i pi z
    const CDD sinv = (exp(iw) - exp(-iw)) / CDD(DD(0.0), DD(2.0));
    return CDD(ddc::log_pi) - log(sinv) - lgamma(CDD(1.0) - z);
}

}  // namespace

CDD x_factor(const CDD& s, int a) {
    if (a != 0 && a != 1) throw std::invalid_argument("x_factor: a must be 0 or 1");
    const CDD half(0.5);
    const CDD l = (s - half) * ddc::log_pi + lgamma_any((CDD(1.0) - s + CDD(a)) * 0.5) - lgamma_any((s + CDD(a)) * 0.5);
    return exp(l);
}

CDD log_x_factor_centered(const CDD& z, int a) {
    if (a != 0 && a != 1) throw std::invalid_argument("log_x_factor_centered: a must be 0 or 1");
    const CDD c(DD(0.25 + 0.5 * a));
    return z * ddc::log_pi + lgamma(c - z * 0.5) - lgamma(c + z * 0.5);
}

Series prime_tail_series(int n, std::int64_t prime_cutoff, std::size_t len) {
    if (n < 2) throw std::invalid_argument("prime_tail_series: n >= 2");
    if (prime_cutoff < 2) throw std::invalid_argument("prime_tail_series: cutoff >= 2");
    const auto primes = primes_up_to(prime_cutoff);
    const double logc = std::log(static_cast<double>(prime_cutoff));
    Series out(len, DD(0.0));
    // sum_{p > c} p^{-s} = sum_j mu(j)/j log zeta_{>c}(j s)
    for (int j = 1; j <= 64; ++j) {
        const double s0 = static_cast<double>(j) * n;
        if ((1.0 - s0) * logc < -110.0) break;
        const int mu = mobius(j);
        if (mu == 0) continue;
        Series f = series_log(zeta_taylor(s0, len), len);
        for (auto p : primes) {
            const DD lp = log(DD(static_cast<double>(p)));
            if ((1.0 - s0) * lp.hi < -110.0) continue;
            const DD q = exp(-lp * s0);
            Series g = series_scale(series_exp_linear(-lp, len), -q);
            g[0] += 1.0;
            f = series_add(f, series_log(g, len));
        }
        // argument j (n + w): coefficient l picks up j^l
        DD jl(static_cast<double>(mu) / j);
        for (std::size_t l = 0; l < len; ++l) {
            out[l] += jl * f[l];
            jl = jl * static_cast<double>(j);
        }
    }
    return out;
}

DD a_k_factor(int k, std::int64_t prime_cutoff, double* tail_rel) {
    if (k < 1) throw std::invalid_argument("a_k_factor: k >= 1");
    if (prime_cutoff < 100) throw std::invalid_argument("a_k_factor: prime_cutoff >= 100");
    DD sum(0.0);
    const double pairs = k * (k + 1) / 2.0;
    for (auto p : primes_up_to(prime_cutoff)) {
        const DD P(static_cast<double>(p));
        const DD invp = 1.0 / P, t = sqrt(invp);
        const DD mid = ldexp(powi(1.0 / (1.0 - t), k) + powi(1.0 / (1.0 + t), k), -1) + invp;
        sum += log(1.0 - invp) * pairs + log(mid) - log(1.0 + invp);
    }
    DD tail(0.0);
    for (const auto& term : detail::tail_terms()) {
        const DD t0 = detail::cached_prime_tail(term.n, prime_cutoff, 1)[0];
        tail += DD(term.num) / term.den * powi(DD(static_cast<double>(k)), static_cast<long>(term.e.size())) * t0;
    }
    if (tail_rel) *tail_rel = std::fabs(to_double(tail));
    return exp(sum + tail);
}

CDD A_k_eval(const std::vector<CDD>& z, std::int64_t prime_cutoff) {
    const int k = static_cast<int>(z.size());
    if (k < 1) throw std::invalid_argument("A_k_eval: need at least one variable");
    if (prime_cutoff < 100) throw std::invalid_argument("A_k_eval: prime_cutoff >= 100");
    for (const auto& zj : z) {
        if (!(std::fabs(zj.re.hi) < 0.5)) throw std::domain_error("A_k_eval: |Re z_j| must be below 1/2");
        if (to_double(abs(zj)) > 0.15) throw std::domain_error("A_k_eval: tail model needs |z_j| <= 0.15");
    }
    CDD prod(1.0);
    std::vector<CDD> y(k);
    for (auto p : primes_up_to(prime_cutoff)) {
        const DD lp = log(DD(static_cast<double>(p))), invp = 1.0 / DD(static_cast<double>(p)), t = sqrt(invp);
        for (int j = 0; j < k; ++j) y[j] = exp(-(z[j] * lp));
        CDD pair(1.0), pm(1.0), pp(1.0);
        for (int i = 0; i < k; ++i) {
            for (int j = i; j < k; ++j) pair *= CDD(1.0) - y[i] * y[j] * invp;
            pm *= CDD(1.0) - y[i] * t;
            pp *= CDD(1.0) + y[i] * t;
        }
        const CDD mid = (CDD(1.0) / pm + CDD(1.0) / pp) * 0.5 + CDD(invp);
        prod *= pair * mid / (1.0 + invp);
    }
    // tail: sum over tuples of T_n(sum_r e_r z_{i_r}) = sum_l tau_l l! [u^l] prod_r E_{e_r}(u)
    const std::size_t len = 60;
    std::vector<CDD> psum(len, CDD(0.0));
    psum[0] = CDD(static_cast<double>(k));
    for (const auto& zj : z) {
        CDD pw = zj;
        for (std::size_t l = 1; l < len; ++l) {
            psum[l] += pw;
            pw *= zj;
        }
    }
    CDD tail(0.0);
    for (const auto& term : detail::tail_terms()) {
        const Series& tau = detail::cached_prime_tail(term.n, prime_cutoff, len);
        std::vector<CDD> g(len, CDD(0.0));
        g[0] = CDD(1.0);
        for (int e : term.e) {
            std::vector<CDD> f(len);
            DD c(1.0);
            for (std::size_t l = 0; l < len; ++l) {
                f[l] = psum[l] * c;
                c = c * static_cast<double>(e) / static_cast<double>(l + 1);
            }
            std::vector<CDD> h(len, CDD(0.0));
            for (std::size_t a = 0; a < len; ++a)
                for (std::size_t b = 0; a + b < len; ++b) h[a + b] += g[a] * f[b];
            g = std::move(h);
        }
        CDD s(0.0);
        DD fact(1.0);
        for (std::size_t l = 0; l < len; ++l) {
            s += g[l] * (tau[l] * fact);
            fact = fact * static_cast<double>(l + 1);
        }
        tail += s * (DD(term.num) / term.den);
    }
    return prod * exp(tail);
}

DD ks_leading_coefficient(int k, std::int64_t prime_cutoff) {
    DD r = a_k_factor(k, prime_cutoff);
    for (int j = 1; j <= k; ++j)
        for (int i = j + 1; i <= 2 * j; ++i) r = r / static_cast<double>(i);  // j!/(2j)!
    return r;
}

}  // namespace quadl
