#include "quadl/specfun.hpp"

#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <stdexcept>

#include "quadl/binio.hpp"

#ifndef QUADL_DEFAULT_TABLE_DIR
#define QUADL_DEFAULT_TABLE_DIR "tables"
#endif

namespace quadl {

namespace {

DD sinh_dd(const DD& u) {
    if (std::fabs(u.hi) < 0.5) {
        DD u2 = sqr(u), term = u, s = u;
        for (int i = 1; i < 20; ++i) {
            term = term * u2 / static_cast<double>((2 * i) * (2 * i + 1));
            s += term;
            if (std::fabs(term.hi) < 1e-34 * std::fabs(s.hi)) break;
        }
        return s;
    }
    DD e = exp(u);
    return (e - 1.0 / e) * 0.5;
}

// Nodes t = j h for the K-Bessel integrals: cosh t and cosh t - 1 = 2 sinh^2(t/2).
struct BesselNodes {
    static constexpr int levels = 8;  // finest step 2^-levels
    static constexpr double tmax = 7.0;
    std::vector<DD> cosh_t, coshm1;

    BesselNodes() {
        const int n = static_cast<int>(tmax * (1 << levels)) + 1;
        cosh_t.resize(n);
        coshm1.resize(n);
        for (int j = 0; j < n; ++j) {
            DD t = ldexp(DD(static_cast<double>(j)), -levels);
            DD s = sinh_dd(t * 0.5);
            coshm1[j] = ldexp(sqr(s), 1);
            cosh_t[j] = coshm1[j] + 1.0;
        }
    }
};

const BesselNodes& bessel_nodes() {
    static const BesselNodes nodes;
    return nodes;
}

// e^{x} K_nu(x) for nu in {0, 1}.
DD scaled_bessel_k(const DD& x, int nu, int digits) {
    if (!(x.hi > 0.0)) throw std::domain_error("K_nu reference: x must be positive");
    if (digits > 31) throw std::invalid_argument("K_nu reference: at most 31 digits available");
    const auto& nd = bessel_nodes();
    const double tol = std::pow(10.0, -digits - 1);
    const int finest = BesselNodes::levels;
    auto f = [&](int idx) {
        DD e = exp(-(x * nd.coshm1[idx]));
        return nu == 0 ? e : e * nd.cosh_t[idx];
    };
    // level 2 (h = 1/4) as a start, then refine
    int stride = 1 << (finest - 2);
    const int n = static_cast<int>(nd.coshm1.size());
    DD sum = f(0) * 0.5;
    for (int idx = stride; idx < n; idx += stride) {
        DD v = f(idx);
        sum += v;
        if (v.hi < 1e-36 * sum.hi) break;
    }
    DD prev = ldexp(sum, -2);
    for (int level = 3; level <= finest; ++level) {
        stride >>= 1;
        for (int idx = stride; idx < n; idx += 2 * stride) {
            DD v = f(idx);
            sum += v;
            if (v.hi < 1e-36 * sum.hi) break;
        }
        DD cur = ldexp(sum, -level);
        if (level >= 4 && std::fabs(to_double(cur - prev)) < tol * cur.hi) return cur;
        prev = cur;
    }
    return prev;
}

// Exp-sinh nodes for G(1/4, w): x = 1 + u, u = exp(pi/2 sinh t).
struct ExpSinhNodes {
    static constexpr double h = 1.0 / 64.0;
    static constexpr double tmin = -5.0, tmax = 6.0;
    std::vector<DD> u, weight, log1pu;

    ExpSinhNodes() {
        const int n = static_cast<int>((tmax - tmin) / h) + 1;
        for (int j = 0; j < n; ++j) {
            DD t = DD(tmin) + DD(static_cast<double>(j)) * h;
            DD e = exp(t);
            DD sh = (e - 1.0 / e) * 0.5, ch = (e + 1.0 / e) * 0.5;
            DD uu = exp(ddc::pi_half * sh);
            u.push_back(uu);
            weight.push_back(uu * ddc::pi_half * ch);
            log1pu.push_back(log(uu + 1.0));
        }
    }
};

const ExpSinhNodes& expsinh_nodes() {
    static const ExpSinhNodes nodes;
    return nodes;
}

}  // namespace

DD k0_reference(const DD& x, int digits) { return scaled_bessel_k(x, 0, digits) * exp(-x); }
DD k1_reference(const DD& x, int digits) { return scaled_bessel_k(x, 1, digits) * exp(-x); }

DD g_reference(double w) {
    if (!(w > 0.0)) throw std::domain_error("g_reference: w must be positive");
    // the integrand decays too slowly for the node window; use the series
    if (w < 0.5) return g_normalized(DD(0.25), DD(w), ddc::gamma_quarter);
    const auto& nd = expsinh_nodes();
    const DD W(w);
    // integrand e^{-w} (1+u)^{-3/4} e^{-wu} u (pi/2) cosh t; sums on steps h and 2h
    DD coarse(0.0), fine(0.0);
    const int n = static_cast<int>(nd.u.size());
    for (int j = 0; j < n; ++j) {
        if (w * nd.u[j].hi > 90.0) break;
        DD v = exp(nd.log1pu[j] * -0.75 - W * nd.u[j]) * nd.weight[j];
        fine += v;
        if ((j & 1) == 0) coarse += v;
    }
    DD f = fine * ExpSinhNodes::h, c = coarse * (2.0 * ExpSinhNodes::h);
    if (std::fabs(to_double(f - c)) > 1e-20 * f.hi)
        throw std::runtime_error("g_reference: quadrature did not converge");
    return f * exp(-W);
}

DD upper_gamma(const DD& a, const DD& x, const DD& gamma_a) {
    if (!(a.hi > 0.0) || !(x.hi > 0.0)) throw std::domain_error("upper_gamma: need a, x > 0");
    if (x < a + 1.0) {
        DD term = 1.0 / a, sum = term, ap = a;
        for (int n = 1; n < 1000; ++n) {
            ap += 1.0;
            term = term * x / ap;
            sum += term;
            if (std::fabs(term.hi) < 1e-34 * std::fabs(sum.hi)) break;
        }
        return gamma_a - sum * exp(a * log(x) - x);
    }
    // modified Lentz on the continued fraction
    const double tiny = 1e-300;
    DD b = x + 1.0 - a, c(1.0 / tiny), d = 1.0 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        DD an = -(DD(static_cast<double>(i)) * (DD(static_cast<double>(i)) - a));
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d.hi) < tiny) d = DD(tiny);
        c = b + an / c;
        if (std::fabs(c.hi) < tiny) c = DD(tiny);
        d = 1.0 / d;
        DD del = d * c;
        h *= del;
        if (std::fabs(to_double(del - 1.0)) < 1e-33) break;
    }
    return h * exp(a * log(x) - x);
}

DD g_normalized(const DD& z, const DD& w, const DD& gamma_z) {
    if (!(w.hi > 0.0)) throw std::domain_error("g_normalized: w must be positive");
    if (w < z + 1.0) return upper_gamma(z, w, gamma_z) * exp(-(z * log(w)));
    // same continued fraction without the w^z factor
    const double tiny = 1e-300;
    DD b = w + 1.0 - z, c(1.0 / tiny), d = 1.0 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        DD an = -(DD(static_cast<double>(i)) * (DD(static_cast<double>(i)) - z));
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d.hi) < tiny) d = DD(tiny);
        c = b + an / c;
        if (std::fabs(c.hi) < tiny) c = DD(tiny);
        d = 1.0 / d;
        DD del = d * c;
        h *= del;
        if (std::fabs(to_double(del - 1.0)) < 1e-33) break;
    }
    return h * exp(-w);
}

DD gamma_quarter_shift(int m) {
    DD g = ddc::gamma_quarter;
    for (int i = 0; i < m; ++i) g *= DD(0.25 + i);
    return g;
}

DD gamma_three_quarter_shift(int m) {
    DD g = ddc::gamma_three_quarter;
    for (int i = 0; i < m; ++i) g *= DD(0.75 + i);
    return g;
}

long double g_series_route(long double w) {
    constexpr long double gamma_quarter_ld = 3.62560990822190831193068515586767200L;
    long double term = 4.0L, sum = term, p = 0.25L;
    for (int j = 1; j < 200; ++j) {
        p += 1.0L;
        term *= w / p;
        sum += term;
        if (term < 1e-17L) break;
    }
    return std::pow(w, -0.25L) * gamma_quarter_ld - std::exp(-w) * sum;
}

// ---- tables ---------------------------------------------------------------

namespace {

constexpr char table_magic[4] = {'Q', 'L', 'T', 'T'};
constexpr std::uint32_t table_version = 1;

void validate_midpoints(const TaylorTable& t, double (*reference)(double), const char* what) {
    for (std::uint64_t j = 0; j + 1 < t.count; j += 16) {
        double x = t.center(j) + 0.5 * t.step - 1e-12;
        double err = std::fabs(t.eval(x) - reference(x));
        if (err > 1e-14) throw std::runtime_error(std::string(what) + " table fails accuracy check");
    }
}

double k0_ref_double(double x) { return to_double(k0_reference(DD(x))); }
double g_ref_double(double w) {
    return to_double(g_normalized(DD(0.25), DD(w), ddc::gamma_quarter));
}

}  // namespace

TaylorTable build_k0_table() {
    TaylorTable t;
    t.kind = TableKind::bessel_k0;
    t.degree = k0_degree;
    const int jfirst = 1001, jlast = 7399;  // 5 < j/200 < 37
    t.x0 = jfirst / 200.0;
    t.step = 1.0 / k0_inv_step;
    t.count = static_cast<std::uint64_t>(jlast - jfirst + 1);
    t.coeffs.resize(t.count * (t.degree + 1));
    for (int j = jfirst; j <= jlast; ++j) {
        const DD x0 = DD(static_cast<double>(j)) / 200.0;
        DD c[5];
        c[0] = k0_reference(x0);
        c[1] = -k1_reference(x0);
        // x y'' + y' - x y = 0 gives the Taylor recurrence about x0
        for (int m = 0; m + 2 <= 4; ++m) {
            DD cm1 = m >= 1 ? c[m - 1] : DD(0.0);
            DD num = x0 * c[m] + cm1 - DD(static_cast<double>((m + 1) * (m + 1))) * c[m + 1];
            c[m + 2] = num / (x0 * static_cast<double>((m + 2) * (m + 1)));
        }
        double* row = t.coeffs.data() + static_cast<std::size_t>(j - jfirst) * 5;
        for (int m = 0; m < 5; ++m) row[m] = to_double(c[m]);
    }
    validate_midpoints(t, k0_ref_double, "K0");
    return t;
}

TaylorTable build_g_table() {
    TaylorTable t;
    t.kind = TableKind::incgamma_quarter;
    t.degree = g_degree;
    const int jfirst = 100, jlast = 3700;  // w0 = j/100 on [1, 37]
    t.x0 = 1.0;
    t.step = 1.0 / g_inv_step;
    t.count = static_cast<std::uint64_t>(jlast - jfirst + 1);
    t.coeffs.resize(t.count * (t.degree + 1));
    DD gz[8];
    for (int m = 0; m < 8; ++m) gz[m] = gamma_quarter_shift(m);
    for (int j = jfirst; j <= jlast; ++j) {
        const DD w0 = DD(static_cast<double>(j)) / 100.0;
        double* row = t.coeffs.data() + static_cast<std::size_t>(j - jfirst) * 8;
        DD fact(1.0);
        for (int m = 0; m < 8; ++m) {
            if (m > 0) fact *= DD(static_cast<double>(m));
            // d^m/dw^m G(1/4, w) = (-1)^m G(1/4 + m, w)
            DD v = g_normalized(DD(0.25 + m), w0, gz[m]) / fact;
            row[m] = to_double((m & 1) ? -v : v);
        }
    }
    validate_midpoints(t, g_ref_double, "G(1/4,w)");
    return t;
}

std::vector<unsigned char> serialize_table(const TaylorTable& t) {
    ByteWriter w;
    w.put_bytes(table_magic, 4);
    w.put(table_version);
    w.put(static_cast<std::uint32_t>(t.kind));
    w.put(t.x0);
    w.put(t.step);
    w.put(t.count);
    w.put(t.degree);
    w.put_bytes(t.coeffs.data(), t.coeffs.size() * sizeof(double));
    std::uint64_t sum = w.checksum();
    w.put(sum);
    return std::move(w.bytes());
}

TaylorTable deserialize_table(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 8 + 8) throw std::runtime_error("table file too short");
    ByteReader r(bytes.data(), bytes.size());
    char magic[4];
    r.get_bytes(magic, 4);
    if (std::memcmp(magic, table_magic, 4) != 0) throw std::runtime_error("bad table magic");
    if (r.get<std::uint32_t>() != table_version) throw std::runtime_error("unsupported table version");
    TaylorTable t;
    t.kind = static_cast<TableKind>(r.get<std::uint32_t>());
    t.x0 = r.get<double>();
    t.step = r.get<double>();
    t.count = r.get<std::uint64_t>();
    t.degree = r.get<std::uint32_t>();
    if (t.degree > 16 || t.count > (1u << 24)) throw std::runtime_error("implausible table header");
    t.coeffs.resize(t.count * (t.degree + 1));
    r.get_bytes(t.coeffs.data(), t.coeffs.size() * sizeof(double));
    const std::size_t payload = r.pos();
    const auto stored = r.get<std::uint64_t>();
    if (fnv1a(bytes.data(), payload) != stored) throw std::runtime_error("table checksum mismatch");
    return t;
}

void save_table(const TaylorTable& t, const std::string& path) { write_file_atomic(path, serialize_table(t)); }

TaylorTable load_table(const std::string& path) { return deserialize_table(read_file_bytes(path)); }

std::string table_dir() {
    if (const char* env = std::getenv("QUADL_TABLE_DIR"); env && *env) return env;
    return QUADL_DEFAULT_TABLE_DIR;
}

namespace {

// hot loops rely on the fixed grid, so a cached file must match it exactly
bool has_expected_grid(const TaylorTable& t, TableKind kind) {
    if (t.kind != kind) return false;
    if (kind == TableKind::bessel_k0)
        return t.degree == k0_degree && t.step == 1.0 / k0_inv_step && t.x0 == 1001 / 200.0 && t.count == 6399;
    return t.degree == g_degree && t.step == 1.0 / g_inv_step && t.x0 == 1.0 && t.count == 3601;
}

TaylorTable load_or_build(const char* name, TableKind kind, TaylorTable (*build)()) {
    const std::string path = table_dir() + "/" + name;
    try {
        TaylorTable t = load_table(path);
        if (has_expected_grid(t, kind)) return t;
    } catch (const std::exception&) {
    }
    TaylorTable t = build();
    try {
        std::filesystem::create_directories(table_dir());
        save_table(t, path);
    } catch (const std::exception&) {
        // caching is best effort
    }
    return t;
}

}  // namespace

const TaylorTable& k0_table() {
    static const TaylorTable t = load_or_build("k0.qtt", TableKind::bessel_k0, build_k0_table);
    return t;
}

const TaylorTable& g_table() {
    static const TaylorTable t = load_or_build("g_quarter.qtt", TableKind::incgamma_quarter, build_g_table);
    return t;
}

double k0_fast(double x, const TaylorTable& t) {
    if (!(x >= k0_min_x)) throw std::domain_error("k0_fast: x must be >= 5");
    return k0_fast_unchecked(x, t);
}

double g_fast(double w, const TaylorTable& t) {
    if (!(w > 0.0)) throw std::domain_error("g_fast: w must be positive");
    return g_fast_unchecked(w, t);
}

}  // namespace quadl
