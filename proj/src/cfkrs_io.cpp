#include <fstream>
#include <sstream>
#include <stdexcept>

#include "quadl/binio.hpp"
#include "quadl/cfkrs.hpp"

namespace quadl {

namespace {

// int_1^X (log t)^m t^s dt for s = 0, 1:
// t^{s+1} sum_j (-1)^j m!/(m-j)! (log t)^{m-j} / (s+1)^{j+1}, evaluated between 1 and X
std::vector<DD> log_power_integrals(int M, double X, int s) {
    if (!(X >= 1.0)) throw std::domain_error("q_integrated: X >= 1 required");
    const DD L = log(DD(X));
    const DD Xs = s == 0 ? DD(X) : sqr(DD(X));
    const double base = s + 1.0;
    std::vector<DD> out(static_cast<std::size_t>(M + 1));
    for (int m = 0; m <= M; ++m) {
        DD sum(0.0), falling(1.0), div(1.0 / base);
        std::vector<DD> Lp(static_cast<std::size_t>(m + 1));
        Lp[0] = DD(1.0);
        for (int i = 1; i <= m; ++i) Lp[i] = Lp[i - 1] * L;
        DD at_one(0.0);
        for (int j = 0; j <= m; ++j) {
            const DD term = falling * div;
            sum += (j % 2 ? -term : term) * Lp[m - j];
            if (j == m) at_one = j % 2 ? -term : term;
            falling = falling * static_cast<double>(m - j);
            div = div / base;
        }
        out[m] = Xs * sum - at_one;
    }
    return out;
}

}  // namespace

DD q_integrated(const MomentPolynomial& poly, double X) {
    const auto I = log_power_integrals(poly.degree(), X, 0);
    DD r(0.0);
    for (int m = 0; m <= poly.degree(); ++m) r += poly.coeffs[m] * I[m];
    return r;
}

DD q_integrated_weighted(const MomentPolynomial& poly, double X) {
    if (!(X > 1.0)) throw std::domain_error("q_integrated_weighted: X > 1 required");
    const auto I0 = log_power_integrals(poly.degree(), X, 0);
    const auto I1 = log_power_integrals(poly.degree(), X, 1);
    DD r(0.0);
    for (int m = 0; m <= poly.degree(); ++m) r += poly.coeffs[m] * (I0[m] - I1[m] / X);
    return r;
}

std::string format_polynomial(const MomentPolynomial& poly) {
    std::ostringstream os;
    os << "# moment polynomial Q(k, x) = sum_m c_m x^m\n";
    os << "k " << poly.k << "\n";
    os << "sign " << sign_name(poly.sign) << "\n";
    os << "digits " << poly.cfg.digits << "\n";
    os << "prime_cutoff " << poly.cfg.prime_cutoff << "\n";
    os << "radius " << poly.cfg.radius << "\n";
    os << "points " << poly.cfg.points << "\n";
    os << "method " << poly.method << "\n";
    for (int m = 0; m <= poly.degree(); ++m) os << "c " << m << " " << to_string(poly.coeffs[m], 34) << "\n";
    return os.str();
}

MomentPolynomial parse_polynomial(const std::string& text) {
    MomentPolynomial poly;
    poly.coeffs.clear();
    std::istringstream is(text);
    std::string line;
    bool have_k = false, have_sign = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "k") {
            ls >> poly.k;
            have_k = true;
        } else if (key == "sign") {
            std::string s;
            ls >> s;
            poly.sign = parse_sign(s.c_str());
            have_sign = true;
        } else if (key == "digits") {
            ls >> poly.cfg.digits;
        } else if (key == "prime_cutoff") {
            ls >> poly.cfg.prime_cutoff;
        } else if (key == "radius") {
            ls >> poly.cfg.radius;
        } else if (key == "points") {
            ls >> poly.cfg.points;
        } else if (key == "method") {
            ls >> poly.method;
        } else if (key == "c") {
            int m;
            std::string v;
            ls >> m >> v;
            if (m != static_cast<int>(poly.coeffs.size())) throw std::runtime_error("polynomial file: coefficients out of order");
            poly.coeffs.push_back(dd_from_string(v));
        } else {
            throw std::runtime_error("polynomial file: unknown key '" + key + "'");
        }
        if (ls.fail()) throw std::runtime_error("polynomial file: malformed line '" + line + "'");
    }
    if (!have_k || !have_sign) throw std::runtime_error("polynomial file: missing header");
    if (poly.degree() != moment_degree(poly.k)) throw std::runtime_error("polynomial file: wrong degree");
    return poly;
}

void save_polynomial(const MomentPolynomial& poly, const std::string& path) {
    const std::string text = format_polynomial(poly);
    write_file_atomic(path, std::vector<unsigned char>(text.begin(), text.end()));
}

MomentPolynomial load_polynomial(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    return parse_polynomial(std::string(bytes.begin(), bytes.end()));
}

}  // namespace quadl
