#include <cmath>
#include <stdexcept>

#include "cfkrs_internal.hpp"
#include "quadl/zeta.hpp"

namespace quadl {

void ResidueConfig::validate() const {
    if (!(radius > 0.0 && radius < 0.5)) throw std::invalid_argument("ResidueConfig: radius must lie in (0, 1/2)");
    if (points < 8 || (points & (points - 1)) != 0) throw std::invalid_argument("ResidueConfig: points must be a power of 2, >= 8");
    if (digits < 30 || digits > 32) throw std::invalid_argument("ResidueConfig: digits must lie in [30, 32]");
    if (prime_cutoff < 100) throw std::invalid_argument("ResidueConfig: prime_cutoff >= 100");
}

DD MomentPolynomial::eval(const DD& x) const {
    DD r(0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) r = r * x + coeffs[i];
    return r;
}

namespace {

int sign_to_a(Sign s) { return s == Sign::positive ? 0 : 1; }

DD factorial(int n) {
    DD f(1.0);
    for (int i = 2; i <= n; ++i) f = f * static_cast<double>(i);
    return f;
}

// (-1)^{k(k-1)/2} / (2^m m!)
DD coefficient_scale(int k, int m) {
    DD s = ldexp(1.0 / factorial(m), -m);
    return (k * (k - 1) / 2) % 2 ? -s : s;
}

// sum_j log X(1/2 + z_j, a)^{-1/2} = sum_l U_l P_l
Series gamma_series(int a, std::size_t len) {
    const DD c(0.25 + 0.5 * a);
    Series u(len, DD(0.0));
    DD half_pow(0.5), fact(1.0);
    for (std::size_t l = 1; l < len; ++l) {
        fact = fact * static_cast<double>(l);
        if (l % 2 == 1) u[l] = polygamma(static_cast<int>(l) - 1, c) * half_pow / fact;
        half_pow = ldexp(half_pow, -1);
    }
    if (len > 1) u[1] -= ldexp(ddc::log_pi, -1);
    return u;
}

struct ContourResult {
    std::vector<CDD> sums;  // scaled, before taking real parts
};

ContourResult contour_sums(int k, int a, const ResidueConfig& cfg, int points) {
    const int D = moment_degree(k);
    const int P = points;
    const DD r(cfg.radius);
    std::vector<CDD> z(P), xf(P), zinv(P);
    for (int q = 0; q < P; ++q) {
        z[q] = polar(r, ddc::two_pi * DD(static_cast<double>(q)) / static_cast<double>(P));
        xf[q] = exp(log_x_factor_centered(z[q], a) * -0.5);
        CDD pw(1.0);
        for (int e = 0; e < 2 * k - 1; ++e) pw *= z[q];
        zinv[q] = CDD(1.0) / pw;  // z^{1-2k}
    }
    const Series eta = eta_taylor(80);
    std::vector<CDD> etab(static_cast<std::size_t>(P) * P);
    for (int q = 0; q < P; ++q)
        for (int q2 = q; q2 < P; ++q2) etab[q * P + q2] = etab[q2 * P + q] = series_eval(eta, z[q] + z[q2]);

    const auto primes = primes_up_to(cfg.prime_cutoff);
    const std::size_t np = primes.size();
    std::vector<CDD> s(np * P), im(np * P), ip(np * P);
    std::vector<DD> invp(np), invp1(np);
    for (std::size_t i = 0; i < np; ++i) {
        const DD Pp(static_cast<double>(primes[i]));
        const DD lp = log(Pp), t = sqrt(1.0 / Pp);
        invp[i] = 1.0 / Pp;
        invp1[i] = 1.0 / (1.0 + invp[i]);
        for (int q = 0; q < P; ++q) {
            const CDD sv = exp(-(z[q] * lp)) * t;
            s[i * P + q] = sv;
            im[i * P + q] = CDD(1.0) / (CDD(1.0) - sv);
            ip[i * P + q] = CDD(1.0) / (CDD(1.0) + sv);
        }
    }

    const PartitionBasis B(D);
    const RingElt tail = detail::tail_ring(B, k, cfg.prime_cutoff);

    // per-depth partial products; depth d holds the first d chosen nodes
    std::vector<std::vector<CDD>> pair(k + 1, std::vector<CDD>(np)), pm = pair, pp = pair;
    for (std::size_t i = 0; i < np; ++i) pair[0][i] = pm[0][i] = pp[0][i] = CDD(1.0);
    std::vector<CDD> etaprod(k + 1), vand(k + 1), xprod(k + 1), zprod(k + 1);
    etaprod[0] = vand[0] = xprod[0] = zprod[0] = CDD(1.0);
    std::vector<int> idx(k);
    std::vector<CDD> acc(D + 1, CDD(0.0)), psum(D + 1);

    auto leaf = [&]() {
        CDD A(1.0);
        for (std::size_t i = 0; i < np; ++i)
            A *= pair[k][i] * ((pm[k][i] + pp[k][i]) * 0.5 + CDD(invp[i])) * invp1[i];
        for (int l = 1; l <= D; ++l) psum[l] = CDD(0.0);
        for (int j = 0; j < k; ++j) {
            CDD pw = z[idx[j]];
            for (int l = 1; l <= D; ++l) {
                psum[l] += pw;
                pw *= z[idx[j]];
            }
        }
        const CDD F = A * exp(ring_eval(B, tail, psum)) * etaprod[k] * xprod[k] * vand[k] * zprod[k];
        CDD pw(1.0);
        for (int m = 0; m <= D; ++m) {
            acc[m] += F * pw;
            pw *= psum[1];
        }
    };

    auto rec = [&](auto&& self, int d, int qstart) -> void {
        for (int q = qstart; q <= P - (k - d); ++q) {
            idx[d] = q;
            for (std::size_t i = 0; i < np; ++i) {
                const CDD* srow = &s[i * P];
                CDD f = pair[d][i] * (CDD(1.0) - srow[q] * srow[q]);
                for (int j = 0; j < d; ++j) f *= CDD(1.0) - srow[idx[j]] * srow[q];
                pair[d + 1][i] = f;
                pm[d + 1][i] = pm[d][i] * im[i * P + q];
                pp[d + 1][i] = pp[d][i] * ip[i * P + q];
            }
            CDD e = etaprod[d] * etab[q * P + q], v = vand[d];
            for (int j = 0; j < d; ++j) {
                const int qj = idx[j];
                e *= etab[qj * P + q];
                const CDD diff = z[q] - z[qj];
                v *= diff * diff * (z[qj] + z[q]);
            }
            etaprod[d + 1] = e;
            vand[d + 1] = v;
            xprod[d + 1] = xprod[d] * xf[q];
            zprod[d + 1] = zprod[d] * zinv[q];
            if (d + 1 == k)
                leaf();
            else
                self(self, d + 1, q + 1);
        }
    };
    rec(rec, 0, 0);

    ContourResult res;
    DD norm(1.0);
    for (int j = 0; j < k; ++j) norm = norm / static_cast<double>(P);
    for (int m = 0; m <= D; ++m) res.sums.push_back(acc[m] * (coefficient_scale(k, m) * norm));
    return res;
}

MomentPolynomial contour_route(int k, Sign sign, const ResidueConfig& cfg) {
    MomentPolynomial poly;
    poly.k = k;
    poly.sign = sign;
    poly.cfg = cfg;
    poly.method = "contour";
    const auto res = contour_sums(k, sign_to_a(sign), cfg, cfg.points);
    for (const auto& c : res.sums) {
        poly.coeffs.push_back(c.re);
        poly.max_imag = std::max(poly.max_imag, std::fabs(to_double(c.im)));
    }
    if (cfg.check_doubling) {
        const auto fine = contour_sums(k, sign_to_a(sign), cfg, 2 * cfg.points);
        double change = 0.0;
        for (std::size_t m = 0; m < fine.sums.size(); ++m) {
            const double scale = std::max(1e-300, std::fabs(to_double(fine.sums[m].re)));
            change = std::max(change, std::fabs(to_double(fine.sums[m].re - res.sums[m].re)) / scale);
        }
        poly.doubling_change = change;
        if (change > std::pow(10.0, -cfg.digits / 2.0))
            throw std::runtime_error("q_polynomial: contour sum not converged under node doubling");
    }
    if (poly.max_imag > std::pow(10.0, -cfg.digits / 2.0) * std::max(1.0, std::fabs(to_double(poly.coeffs[0]))))
        throw std::runtime_error("q_polynomial: imaginary residue too large");
    return poly;
}

MomentPolynomial series_route(int k, Sign sign, const ResidueConfig& cfg) {
    const int D = moment_degree(k);
    const std::size_t len = static_cast<std::size_t>(D + 1);
    const PartitionBasis B(D);
    RingElt logs = ring_linear(B, gamma_series(sign_to_a(sign), len), k);
    ring_axpy(logs, DD(1.0), ring_pair(B, series_log(eta_taylor(len), len), k));
    for (auto p : primes_up_to(cfg.prime_cutoff)) ring_axpy(logs, DD(1.0), detail::local_log_ring(B, k, p));
    ring_axpy(logs, DD(1.0), detail::tail_ring(B, k, cfg.prime_cutoff));
    const RingElt S = ring_exp(B, logs);

    const auto chi = staircase_characters(B, k);
    MomentPolynomial poly;
    poly.k = k;
    poly.sign = sign;
    poly.cfg = cfg;
    poly.method = "series";
    poly.coeffs.assign(len, DD(0.0));
    const std::size_t base = B.begin(D);
    for (std::size_t i = base; i < B.begin(D + 1); ++i) {
        const int ones = B.multiplicity(i, 1);
        for (int m = 0; m <= ones; ++m) {
            const auto j = B.find_hash(B.hash(i) - static_cast<std::uint64_t>(m) * B.part_hash(1));
            poly.coeffs[m] += S[j] * chi[i - base];
        }
    }
    for (int m = 0; m <= D; ++m) poly.coeffs[m] = poly.coeffs[m] * coefficient_scale(0, m);
    return poly;
}

}  // namespace

MomentPolynomial q_polynomial(int k, Sign sign, const ResidueConfig& cfg, ResidueMethod method) {
    if (k < 1 || k > 8) throw std::invalid_argument("q_polynomial: k must lie in [1, 8]");
    cfg.validate();
    if (method == ResidueMethod::automatic) method = k <= 4 ? ResidueMethod::contour : ResidueMethod::series;
    if (method == ResidueMethod::contour && k > 4)
        throw std::invalid_argument("q_polynomial: contour route loses precision beyond k = 4");
    return method == ResidueMethod::contour ? contour_route(k, sign, cfg) : series_route(k, sign, cfg);
}

}  // namespace quadl
