// Moment sums at checkpoints, comparison with the CFKRS prediction, running
// averages of the differences, and CSV export.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadl/cfkrs.hpp"
#include "quadl/ddreal.hpp"
#include "quadl/discriminants.hpp"
#include "quadl/lcentral_neg.hpp"

namespace quadl {

inline constexpr int max_moment = 8;

struct ZhangConstants {
    static constexpr double b_plus = -0.14;
    static constexpr double b_minus = -0.07;
    static constexpr double b_total = b_plus + b_minus;
};

// Sums over one stride interval (lo, hi]; s[k] = sum L^k, w[k] = sum |d| L^k,
// k = 0..kmax (k = 0 counts the discriminants).
struct MomentSegment {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<DD> s, w;
    std::int64_t negatives = 0;
};

struct MomentSeries {
    Sign sign = Sign::negative;
    int kmax = max_moment;
    std::int64_t stride = 1000000;
    std::vector<std::int64_t> checkpoints;  // stride, 2 stride, ...
    std::vector<std::vector<DD>> sums;      // sums[k][i] over |d| <= checkpoints[i]
    std::vector<std::vector<DD>> wsums;     // same with weight |d|
    std::int64_t negative_count = 0;        // L < 0 inputs seen

    std::size_t index_of(std::int64_t X) const;  // throws unless X is a checkpoint
};

// Records of one block (sorted by |d|, all inside the block) cut at multiples
// of stride.  The stride must divide both block ends.
std::vector<MomentSegment> segment_moments(const Block& block, const std::vector<DL>& recs, std::int64_t stride,
                                           int kmax = max_moment);

// Sorts segments by position, requires them to tile (0, last hi] and forms
// the prefix sums.
MomentSeries assemble_series(Sign sign, std::int64_t stride, std::vector<MomentSegment> segs, int kmax = max_moment);

// One sorted stream over (0, xmax]; rejects unsorted input or a wrong sign.
MomentSeries accumulate(Sign sign, const std::vector<DL>& stream, std::int64_t xmax, std::int64_t stride,
                        int kmax = max_moment);

// (3/pi^2) int_1^X Q(log t) dt and the (1 - t/X) weighted version
DD prediction(const MomentPolynomial& poly, double X);
DD smoothed_prediction(const MomentPolynomial& poly, double X);

double ratio_R(const MomentSeries& series, const MomentPolynomial& poly, int k, std::int64_t X);
double difference_delta(const MomentSeries& series, const MomentPolynomial& poly, int k, std::int64_t X);
// sum L^k (1 - |d|/X) minus the smoothed prediction
double smoothed_delta(const MomentSeries& series, const MomentPolynomial& poly, int k, std::int64_t X);

struct CurvePoint {
    std::int64_t X = 0;
    double value = 0.0;
};

// Mean of all deltas up to each multiple of display_stride; xs ascending.
std::vector<CurvePoint> running_average(const std::vector<std::int64_t>& xs, const std::vector<double>& deltas,
                                        std::int64_t display_stride);

// (4/7) b_sign X^{3/4}
double zhang_curve(Sign sign, double X);

inline constexpr const char* csv_header = "X,sum,prediction,R,delta,avg_delta,zhang,log10X,log10absavg";

struct CsvRow {
    double X, sum, prediction, R, delta, avg_delta, zhang, log10X, log10absavg;  // NaN for empty fields
};

// One file per k: rows at the display checkpoints.
std::string format_csv(const MomentSeries& series, const MomentPolynomial& poly, int k, std::int64_t display_stride);
std::vector<CsvRow> parse_csv(const std::string& text);
// moments_<sign>_k<k>.csv for every polynomial of matching sign; returns paths
std::vector<std::string> export_csv(const MomentSeries& series, const std::vector<MomentPolynomial>& polys,
                                    std::int64_t display_stride, const std::string& outdir);

// binary "QMOM" file with checksum
void save_series(const MomentSeries& series, const std::string& path);
MomentSeries load_series(const std::string& path);

}  // namespace quadl
