// Block scheduling, block files, resume and verification.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadl/analysis.hpp"
#include "quadl/cfkrs.hpp"
#include "quadl/discriminants.hpp"
#include "quadl/lcentral_neg.hpp"

namespace quadl {

struct RunConfig {
    Sign sign = Sign::negative;
    std::int64_t xmax = 0;
    std::int64_t block = 1000000;
    int workers = 0;  // 0: OpenMP default
    int digits = 16;  // positive side truncation
    std::string outdir = "out";
    bool resume = false;
    int kmax = max_moment;
    std::int64_t stride_fine = 1000000;
    std::int64_t stride_display = 10000000;
    int prefetch = 8;
    std::string poly_dir;  // empty: <outdir>/polys
    bool export_csv = true;
    bool quiet = true;

    void validate() const;
    std::string polys() const { return poly_dir.empty() ? outdir + "/polys" : poly_dir; }
};

struct BlockHeader {
    Sign sign = Sign::negative;
    std::int64_t lo = 0, hi = 0;
    std::int32_t digits = 16;
    std::uint64_t count = 0;
    std::uint64_t trips = 0;  // inner-loop iterations spent on the block
    std::uint64_t checksum = 0;
};

struct BlockFile {
    BlockHeader header;
    std::vector<DL> records;  // fundamental d in (lo, hi], ascending |d|
};

std::vector<unsigned char> serialize_block(const BlockFile& b);
// Throws on bad magic, truncation or checksum mismatch.
BlockFile deserialize_block(const std::vector<unsigned char>& bytes);
void save_block(const BlockFile& b, const std::string& path);
BlockFile load_block(const std::string& path);
std::string block_path(const std::string& outdir, const Block& b);

// Computes one block with the pipeline of its sign.
BlockFile compute_block(const Block& b, int digits, int prefetch = 8);

struct RunReport {
    std::size_t blocks_computed = 0;
    std::size_t blocks_reused = 0;
    std::uint64_t records = 0;
    std::uint64_t trips = 0;
    std::vector<std::string> warnings;
    std::vector<std::string> files;  // series, manifest and CSVs written
    MomentSeries series;
};

// Computes (or reuses, with resume) every block, accumulates the moments and
// writes <outdir>/moments_<sign>.qmom, manifest.json and the CSVs.
RunReport run(const RunConfig& cfg);

// Re-accumulates moments from existing block files.
MomentSeries moments_from_blocks(const RunConfig& cfg);

// Loads Q(k) for k = 1..kmax from the polynomial directory, computing and
// saving whichever are missing.
std::vector<MomentPolynomial> ensure_polynomials(Sign sign, int kmax, const std::string& dir, bool quiet = true);
std::string polynomial_path(const std::string& dir, Sign sign, int k);

struct VerifyReport {
    std::size_t files = 0;
    std::vector<std::string> bad_files;  // unreadable or failed checksum
    std::size_t sampled = 0;
    double max_dev = 0.0;
    std::int64_t worst_d = 0;
    std::vector<std::string> warnings;
    bool passed = false;
};

// Recomputes sample_size random stored L-values with the 26-digit oracles.
VerifyReport verify(const std::string& outdir, Sign sign, std::size_t sample_size, std::uint64_t seed = 1,
                    double tolerance = 1e-9);

}  // namespace quadl
