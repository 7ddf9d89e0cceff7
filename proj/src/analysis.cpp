#include "quadl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "quadl/binio.hpp"

namespace quadl {

namespace {

void check_kmax(int kmax) {
    if (kmax < 1 || kmax > max_moment) throw std::invalid_argument("kmax must lie in [1, 8]");
}

void check_k(const MomentSeries& s, const MomentPolynomial& poly, int k) {
    if (k < 1 || k > s.kmax) throw std::invalid_argument("moment index out of range");
    if (poly.k != k) throw std::invalid_argument("polynomial is for a different k");
    if (poly.sign != s.sign) throw std::invalid_argument("polynomial is for the other sign");
}

MomentSegment empty_segment(std::int64_t lo, std::int64_t hi, int kmax) {
    MomentSegment seg;
    seg.lo = lo;
    seg.hi = hi;
    seg.s.assign(kmax + 1, DD(0.0));
    seg.w.assign(kmax + 1, DD(0.0));
    return seg;
}

void add_record(MomentSegment& seg, std::int64_t absd, double L) {
    if (L < 0.0) ++seg.negatives;
    const double ad = static_cast<double>(absd);
    DD p(1.0);
    const int kmax = static_cast<int>(seg.s.size()) - 1;
    for (int k = 0; k <= kmax; ++k) {
        seg.s[k] += p;
        seg.w[k] += p * ad;
        p = p * L;
    }
}

const char* sign_tag(Sign s) { return s == Sign::positive ? "pos" : "neg"; }

}  // namespace

std::size_t MomentSeries::index_of(std::int64_t X) const {
    auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), X);
    if (it == checkpoints.end() || *it != X) throw std::invalid_argument("X is not a checkpoint");
    return static_cast<std::size_t>(it - checkpoints.begin());
}

std::vector<MomentSegment> segment_moments(const Block& block, const std::vector<DL>& recs, std::int64_t stride,
                                           int kmax) {
    check_kmax(kmax);
    if (stride <= 0 || block.lo % stride != 0 || block.hi % stride != 0 || block.hi <= block.lo)
        throw std::invalid_argument("segment_moments: stride must divide the block ends");
    std::vector<MomentSegment> out;
    for (std::int64_t lo = block.lo; lo < block.hi; lo += stride) out.push_back(empty_segment(lo, lo + stride, kmax));
    const int sv = sign_value(block.sign);
    std::int64_t prev = block.lo;
    for (const auto& r : recs) {
        const std::int64_t a = r.d * sv;
        if (a <= prev) throw std::invalid_argument("segment_moments: records not sorted by |d| or wrong sign");
        if (a > block.hi) throw std::invalid_argument("segment_moments: record outside the block");
        prev = a;
        add_record(out[static_cast<std::size_t>((a - block.lo - 1) / stride)], a, r.L);
    }
    return out;
}

MomentSeries assemble_series(Sign sign, std::int64_t stride, std::vector<MomentSegment> segs, int kmax) {
    check_kmax(kmax);
    std::sort(segs.begin(), segs.end(), [](const MomentSegment& a, const MomentSegment& b) { return a.lo < b.lo; });
    MomentSeries s;
    s.sign = sign;
    s.kmax = kmax;
    s.stride = stride;
    s.sums.assign(kmax + 1, {});
    s.wsums.assign(kmax + 1, {});
    std::vector<DD> run(kmax + 1, DD(0.0)), wrun(kmax + 1, DD(0.0));
    std::int64_t at = 0;
    for (const auto& g : segs) {
        if (g.lo != at || g.hi - g.lo != stride) throw std::invalid_argument("assemble_series: segments do not tile");
        if (static_cast<int>(g.s.size()) < kmax + 1 || static_cast<int>(g.w.size()) < kmax + 1)
            throw std::invalid_argument("assemble_series: segment has too few moments");
        at = g.hi;
        s.checkpoints.push_back(g.hi);
        for (int k = 0; k <= kmax; ++k) {
            run[k] += g.s[k];
            wrun[k] += g.w[k];
            s.sums[k].push_back(run[k]);
            s.wsums[k].push_back(wrun[k]);
        }
        s.negative_count += g.negatives;
    }
    return s;
}

MomentSeries accumulate(Sign sign, const std::vector<DL>& stream, std::int64_t xmax, std::int64_t stride, int kmax) {
    if (stride <= 0 || xmax <= 0 || xmax % stride != 0)
        throw std::invalid_argument("accumulate: stride must divide xmax");
    return assemble_series(sign, stride, segment_moments(Block{0, xmax, sign}, stream, stride, kmax), kmax);
}

DD prediction(const MomentPolynomial& poly, double X) {
    return q_integrated(poly, X) * 3.0 / sqr(ddc::pi);
}

DD smoothed_prediction(const MomentPolynomial& poly, double X) {
    return q_integrated_weighted(poly, X) * 3.0 / sqr(ddc::pi);
}

double ratio_R(const MomentSeries& series, const MomentPolynomial& poly, int k, std::int64_t X) {
    check_k(series, poly, k);
    const std::size_t i = series.index_of(X);
    const DD den = prediction(poly, static_cast<double>(X));
    if (abs(den) < DD(1.0)) throw std::domain_error("ratio_R: prediction below 1");
    return to_double(series.sums[k][i] / den);
}

double difference_delta(const MomentSeries& series, const MomentPolynomial& poly, int k, std::int64_t X) {
    check_k(series, poly, k);
    const std::size_t i = series.index_of(X);
    return to_double(series.sums[k][i] - prediction(poly, static_cast<double>(X)));
}

double smoothed_delta(const MomentSeries& series, const MomentPolynomial& poly, int k, std::int64_t X) {
    check_k(series, poly, k);
    const std::size_t i = series.index_of(X);
    const double x = static_cast<double>(X);
    return to_double(series.sums[k][i] - series.wsums[k][i] / x - smoothed_prediction(poly, x));
}

std::vector<CurvePoint> running_average(const std::vector<std::int64_t>& xs, const std::vector<double>& deltas,
                                        std::int64_t display_stride) {
    if (xs.size() != deltas.size()) throw std::invalid_argument("running_average: size mismatch");
    if (display_stride <= 0) throw std::invalid_argument("running_average: display stride must be positive");
    std::vector<CurvePoint> out;
    DD sum(0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0 && xs[i] <= xs[i - 1]) throw std::invalid_argument("running_average: X not ascending");
        sum += deltas[i];
        if (xs[i] % display_stride == 0) out.push_back({xs[i], to_double(sum / static_cast<double>(i + 1))});
    }
    return out;
}

double zhang_curve(Sign sign, double X) {
    if (!(X >= 0.0)) throw std::domain_error("zhang_curve: X >= 0 required");
    const double b = sign == Sign::positive ? ZhangConstants::b_plus : ZhangConstants::b_minus;
    return 4.0 / 7.0 * b * std::pow(X, 0.75);
}

std::string format_csv(const MomentSeries& series, const MomentPolynomial& poly, int k, std::int64_t display_stride) {
    check_k(series, poly, k);
    if (display_stride <= 0 || display_stride % series.stride != 0)
        throw std::invalid_argument("format_csv: display stride must be a multiple of the fine stride");
    std::vector<double> deltas;
    deltas.reserve(series.checkpoints.size());
    for (auto X : series.checkpoints) deltas.push_back(difference_delta(series, poly, k, X));
    const auto avg = running_average(series.checkpoints, deltas, display_stride);

    std::ostringstream os;
    os << csv_header << "\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& pt : avg) {
        const std::size_t i = series.index_of(pt.X);
        const double x = static_cast<double>(pt.X);
        const DD pred = prediction(poly, x);
        os << pt.X << "," << to_string(series.sums[k][i], 25) << "," << to_string(pred, 25) << ",";
        os << (abs(pred) < DD(1.0) ? std::string() : num(to_double(series.sums[k][i] / pred))) << ",";
        os << num(deltas[i]) << "," << num(pt.value) << ",";
        if (k == 3) os << num(zhang_curve(series.sign, x));
        os << "," << num(std::log10(x)) << ",";
        if (pt.value != 0.0) os << num(std::log10(std::fabs(pt.value)));
        os << "\n";
    }
    return os.str();
}

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != csv_header) throw std::runtime_error("csv: unexpected header");
    std::vector<CsvRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double v[9];
        std::size_t pos = 0;
        for (int f = 0; f < 9; ++f) {
            const std::size_t end = std::min(line.find(',', pos), line.size());
            const std::string field = line.substr(pos, end - pos);
            if (field.empty()) {
                v[f] = std::nan("");
            } else {
                char* stop = nullptr;
                v[f] = std::strtod(field.c_str(), &stop);
                if (*stop != '\0') throw std::runtime_error("csv: bad number '" + field + "'");
            }
            if (f < 8 && end == line.size()) throw std::runtime_error("csv: short row");
            pos = end + 1;
        }
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
    }
    return rows;
}

std::vector<std::string> export_csv(const MomentSeries& series, const std::vector<MomentPolynomial>& polys,
                                    std::int64_t display_stride, const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    std::vector<std::string> paths;
    for (const auto& poly : polys) {
        if (poly.sign != series.sign || poly.k > series.kmax) continue;
        const std::string path =
            outdir + "/moments_" + sign_tag(series.sign) + "_k" + std::to_string(poly.k) + ".csv";
        const std::string text = format_csv(series, poly, poly.k, display_stride);
        try {
            write_file_atomic(path, std::vector<unsigned char>(text.begin(), text.end()));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ": " + e.what());
        }
        paths.push_back(path);
    }
    return paths;
}

namespace {
constexpr char series_magic[4] = {'Q', 'M', 'O', 'M'};
constexpr std::uint32_t series_version = 1;
}  // namespace

void save_series(const MomentSeries& s, const std::string& path) {
    ByteWriter w;
    w.put_bytes(series_magic, 4);
    w.put(series_version);
    w.put(static_cast<std::int32_t>(sign_value(s.sign)));
    w.put(static_cast<std::int32_t>(s.kmax));
    w.put(s.stride);
    w.put(static_cast<std::uint64_t>(s.checkpoints.size()));
    w.put(s.negative_count);
    for (auto X : s.checkpoints) w.put(X);
    for (const auto* table : {&s.sums, &s.wsums})
        for (int k = 0; k <= s.kmax; ++k)
            for (const auto& v : (*table)[k]) {
                w.put(v.hi);
                w.put(v.lo);
            }
    const std::uint64_t sum = w.checksum();
    w.put(sum);
    write_file_atomic(path, w.bytes());
}

MomentSeries load_series(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    try {
        ByteReader r(bytes.data(), bytes.size());
        char magic[4];
        r.get_bytes(magic, 4);
        if (std::memcmp(magic, series_magic, 4) != 0) throw std::runtime_error("bad magic");
        if (r.get<std::uint32_t>() != series_version) throw std::runtime_error("unsupported version");
        MomentSeries s;
        const auto sv = r.get<std::int32_t>();
        if (sv != 1 && sv != -1) throw std::runtime_error("bad sign");
        s.sign = sv == 1 ? Sign::positive : Sign::negative;
        s.kmax = r.get<std::int32_t>();
        check_kmax(s.kmax);
        s.stride = r.get<std::int64_t>();
        const auto n = r.get<std::uint64_t>();
        if (n > bytes.size()) throw std::runtime_error("implausible checkpoint count");
        s.negative_count = r.get<std::int64_t>();
        s.checkpoints.resize(n);
        for (auto& X : s.checkpoints) X = r.get<std::int64_t>();
        for (auto* table : {&s.sums, &s.wsums}) {
            table->assign(s.kmax + 1, std::vector<DD>(n));
            for (int k = 0; k <= s.kmax; ++k)
                for (auto& v : (*table)[k]) {
                    v.hi = r.get<double>();
                    v.lo = r.get<double>();
                }
        }
        const std::size_t payload = r.pos();
        if (fnv1a(bytes.data(), payload) != r.get<std::uint64_t>()) throw std::runtime_error("checksum mismatch");
        return s;
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace quadl
