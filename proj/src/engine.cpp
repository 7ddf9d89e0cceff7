#include "quadl/engine.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "quadl/binio.hpp"
#include "quadl/lcentral_pos.hpp"

namespace quadl {

namespace fs = std::filesystem;

namespace {

constexpr char block_magic[4] = {'Q', 'M', 'L', 'V'};
constexpr std::uint32_t block_version = 1;

static_assert(sizeof(DL) == 16, "record layout");

const char* sign_tag(Sign s) { return s == Sign::positive ? "pos" : "neg"; }

std::uint64_t records_checksum(const std::vector<DL>& recs) {
    return fnv1a(recs.data(), recs.size() * sizeof(DL));
}

// keep only checkpoints that are multiples of stride
MomentSeries coarsen(MomentSeries s, std::int64_t stride) {
    if (stride == s.stride) return s;
    MomentSeries out = s;
    out.stride = stride;
    out.checkpoints.clear();
    for (auto& row : out.sums) row.clear();
    for (auto& row : out.wsums) row.clear();
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
        if (s.checkpoints[i] % stride != 0) continue;
        out.checkpoints.push_back(s.checkpoints[i]);
        for (int k = 0; k <= s.kmax; ++k) {
            out.sums[k].push_back(s.sums[k][i]);
            out.wsums[k].push_back(s.wsums[k][i]);
        }
    }
    return out;
}

void say(const RunConfig& cfg, const std::string& msg) {
    if (!cfg.quiet) std::fprintf(stderr, "%s\n", msg.c_str());
}

bool header_matches(const BlockHeader& h, const Block& b, int digits) {
    return h.sign == b.sign && h.lo == b.lo && h.hi == b.hi && (b.sign == Sign::negative || h.digits == digits);
}

}  // namespace

void RunConfig::validate() const {
    if (xmax <= 0) throw std::invalid_argument("xmax must be positive");
    if (block <= 0 || xmax % block != 0) throw std::invalid_argument("block length must divide xmax");
    if (workers < 0) throw std::invalid_argument("workers must be >= 0");
    if (digits < 1 || digits > 16) throw std::invalid_argument("digits must lie in [1, 16]");
    if (kmax < 1 || kmax > max_moment) throw std::invalid_argument("kmax must lie in [1, 8]");
    if (stride_fine <= 0 || xmax % stride_fine != 0) throw std::invalid_argument("stride-fine must divide xmax");
    if (stride_display <= 0 || stride_display % stride_fine != 0)
        throw std::invalid_argument("stride-display must be a multiple of stride-fine");
    if (prefetch < 0) throw std::invalid_argument("prefetch distance must be >= 0");
    if (outdir.empty()) throw std::invalid_argument("output directory required");
}

std::vector<unsigned char> serialize_block(const BlockFile& b) {
    ByteWriter w;
    w.put_bytes(block_magic, 4);
    w.put(block_version);
    w.put(static_cast<std::int32_t>(sign_value(b.header.sign)));
    w.put(b.header.digits);
    w.put(b.header.lo);
    w.put(b.header.hi);
    w.put(static_cast<std::uint64_t>(b.records.size()));
    w.put(b.header.trips);
    w.put(records_checksum(b.records));
    w.put_bytes(b.records.data(), b.records.size() * sizeof(DL));
    return std::move(w.bytes());
}

BlockFile deserialize_block(const std::vector<unsigned char>& bytes) {
    ByteReader r(bytes.data(), bytes.size());
    char magic[4];
    r.get_bytes(magic, 4);
    if (std::memcmp(magic, block_magic, 4) != 0) throw std::runtime_error("bad block magic");
    if (r.get<std::uint32_t>() != block_version) throw std::runtime_error("unsupported block version");
    BlockFile b;
    const auto sv = r.get<std::int32_t>();
    if (sv != 1 && sv != -1) throw std::runtime_error("bad sign in block header");
    b.header.sign = sv == 1 ? Sign::positive : Sign::negative;
    b.header.digits = r.get<std::int32_t>();
    b.header.lo = r.get<std::int64_t>();
    b.header.hi = r.get<std::int64_t>();
    b.header.count = r.get<std::uint64_t>();
    b.header.trips = r.get<std::uint64_t>();
    b.header.checksum = r.get<std::uint64_t>();
    if (b.header.count > (bytes.size() - r.pos()) / sizeof(DL)) throw std::runtime_error("truncated block file");
    b.records.resize(b.header.count);
    r.get_bytes(b.records.data(), b.records.size() * sizeof(DL));
    if (r.pos() != bytes.size()) throw std::runtime_error("trailing bytes in block file");
    if (records_checksum(b.records) != b.header.checksum) throw std::runtime_error("block checksum mismatch");
    return b;
}

void save_block(const BlockFile& b, const std::string& path) { write_file_atomic(path, serialize_block(b)); }

BlockFile load_block(const std::string& path) {
    try {
        return deserialize_block(read_file_bytes(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string block_path(const std::string& outdir, const Block& b) {
    char name[80];
    std::snprintf(name, sizeof name, "%s_%013lld_%013lld.qmlv", sign_tag(b.sign), static_cast<long long>(b.lo),
                  static_cast<long long>(b.hi));
    return outdir + "/blocks/" + name;
}

BlockFile compute_block(const Block& b, int digits, int prefetch) {
    BlockFile f;
    f.header.sign = b.sign;
    f.header.lo = b.lo;
    f.header.hi = b.hi;
    f.header.digits = digits;
    if (b.sign == Sign::negative) {
        NegStats st;
        f.records = lvalues_neg_block(b, &st, prefetch);
        f.header.trips = st.forms.visits;
    } else {
        PosOptions opt;
        opt.digits = digits;
        PosStats st;
        f.records = lvalues_pos_block(b, opt, &st);
        f.header.trips = st.trips;
    }
    f.header.count = f.records.size();
    f.header.checksum = records_checksum(f.records);
    return f;
}

std::string polynomial_path(const std::string& dir, Sign sign, int k) {
    return dir + "/q_" + sign_tag(sign) + "_k" + std::to_string(k) + ".txt";
}

std::vector<MomentPolynomial> ensure_polynomials(Sign sign, int kmax, const std::string& dir, bool quiet) {
    fs::create_directories(dir);
    std::vector<MomentPolynomial> out;
    for (int k = 1; k <= kmax; ++k) {
        const std::string path = polynomial_path(dir, sign, k);
        if (fs::exists(path)) {
            auto p = load_polynomial(path);
            if (p.k != k || p.sign != sign) throw std::runtime_error(path + ": polynomial header does not match");
            out.push_back(std::move(p));
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        save_polynomial(q_polynomial(k, sign), path);
        // use the stored text so fresh and reused runs see the same coefficients
        out.push_back(load_polynomial(path));
        if (!quiet)
            std::fprintf(stderr, "Q(%d) %s: %.1f s\n", k, sign_tag(sign),
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return out;
}

namespace {

struct BlockOutcome {
    std::vector<MomentSegment> segs;
    std::uint64_t records = 0, trips = 0;
    bool reused = false;
    std::string error;
};

std::int64_t segment_stride(const RunConfig& cfg) { return std::gcd(cfg.block, cfg.stride_fine); }

// Blocks in parallel; results keyed by block index, merged in order.
std::vector<BlockOutcome> process_blocks(const RunConfig& cfg, bool compute_missing) {
    const auto blocks = tile_blocks(cfg.xmax, cfg.block, cfg.sign);
    const std::int64_t seg = segment_stride(cfg);
    std::vector<BlockOutcome> out(blocks.size());
    const int workers = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
    const auto nblocks = static_cast<std::int64_t>(blocks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::int64_t i = 0; i < nblocks; ++i) {
        const Block& b = blocks[i];
        BlockOutcome& o = out[i];
        try {
            const std::string path = block_path(cfg.outdir, b);
            BlockFile f;
            bool have = false;
            if ((cfg.resume || !compute_missing) && fs::exists(path)) {
                try {
                    f = load_block(path);
                    have = header_matches(f.header, b, cfg.digits);
                } catch (const std::exception&) {
                    have = false;  // corrupt: recompute below
                }
            }
            if (!have) {
                if (!compute_missing) throw std::runtime_error("missing or corrupt block file " + path);
                f = compute_block(b, cfg.digits, cfg.prefetch);
                save_block(f, path);
            }
            o.reused = have;
            o.records = f.records.size();
            o.trips = f.header.trips;
            o.segs = segment_moments(b, f.records, seg, cfg.kmax);
        } catch (const std::exception& e) {
            o.error = e.what();
        }
    }
    for (const auto& o : out)
        if (!o.error.empty()) throw std::runtime_error(o.error);
    return out;
}

MomentSeries merge_outcomes(const RunConfig& cfg, std::vector<BlockOutcome>& outs) {
    std::vector<MomentSegment> segs;
    for (auto& o : outs)
        for (auto& s : o.segs) segs.push_back(std::move(s));
    return coarsen(assemble_series(cfg.sign, segment_stride(cfg), std::move(segs), cfg.kmax), cfg.stride_fine);
}

std::string series_path(const RunConfig& cfg) { return cfg.outdir + "/moments_" + sign_tag(cfg.sign) + ".qmom"; }

}  // namespace

MomentSeries moments_from_blocks(const RunConfig& cfg) {
    cfg.validate();
    auto outs = process_blocks(cfg, false);
    return merge_outcomes(cfg, outs);
}

RunReport run(const RunConfig& cfg) {
    cfg.validate();
    RunReport rep;
    const double X = static_cast<double>(cfg.xmax);
    const double floor_len = std::sqrt(X) * std::log(X) * std::log(X);
    if (static_cast<double>(cfg.block) < floor_len) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "block length %lld is below sqrt(X) log(X)^2 = %.3g", static_cast<long long>(cfg.block),
                      floor_len);
        rep.warnings.push_back(buf);
    }
    fs::create_directories(cfg.outdir + "/blocks");

    const auto t0 = std::chrono::steady_clock::now();
    auto outs = process_blocks(cfg, true);
    for (const auto& o : outs) {
        (o.reused ? rep.blocks_reused : rep.blocks_computed)++;
        rep.records += o.records;
        rep.trips += o.trips;
    }
    say(cfg, "blocks: " + std::to_string(rep.blocks_computed) + " computed, " + std::to_string(rep.blocks_reused) +
                 " reused, " +
                 std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");
    rep.series = merge_outcomes(cfg, outs);
    if (rep.series.negative_count > 0)
        rep.warnings.push_back(std::to_string(rep.series.negative_count) + " negative L-values");

    const std::string sp = series_path(cfg);
    save_series(rep.series, sp);
    rep.files.push_back(sp);

    nlohmann::ordered_json m;
    m["sign"] = sign_tag(cfg.sign);
    m["xmax"] = cfg.xmax;
    m["block"] = cfg.block;
    m["digits"] = cfg.digits;
    m["kmax"] = cfg.kmax;
    m["stride_fine"] = cfg.stride_fine;
    m["stride_display"] = cfg.stride_display;
    m["blocks"] = outs.size();
    m["records"] = rep.records;
    m["trips"] = rep.trips;
    m["negative_L"] = rep.series.negative_count;
    const std::string mp = cfg.outdir + "/manifest_" + sign_tag(cfg.sign) + ".json";
    const std::string text = m.dump(2) + "\n";
    write_file_atomic(mp, std::vector<unsigned char>(text.begin(), text.end()));
    rep.files.push_back(mp);

    if (cfg.export_csv) {
        const auto polys = ensure_polynomials(cfg.sign, cfg.kmax, cfg.polys(), cfg.quiet);
        for (auto& p : export_csv(rep.series, polys, cfg.stride_display, cfg.outdir)) rep.files.push_back(p);
    }
    return rep;
}

VerifyReport verify(const std::string& outdir, Sign sign, std::size_t sample_size, std::uint64_t seed,
                    double tolerance) {
    VerifyReport rep;
    const fs::path dir = fs::path(outdir) / "blocks";
    if (!fs::is_directory(dir)) throw std::runtime_error("no block directory in " + outdir);
    std::vector<std::string> paths;
    const std::string prefix = std::string(sign_tag(sign)) + "_";
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (e.is_regular_file() && name.rfind(prefix, 0) == 0 && e.path().extension() == ".qmlv")
            paths.push_back(e.path().string());
    }
    std::sort(paths.begin(), paths.end());
    rep.files = paths.size();
    if (paths.empty()) throw std::runtime_error("no block files for sign " + std::string(sign_tag(sign)) + " in " + outdir);

    std::vector<DL> all;
    for (const auto& p : paths) {
        try {
            auto b = load_block(p);
            if (b.header.sign != sign) throw std::runtime_error("sign mismatch");
            all.insert(all.end(), b.records.begin(), b.records.end());
        } catch (const std::exception& e) {
            rep.bad_files.push_back(e.what());
        }
    }
    if (sample_size == 0 || all.empty()) {
        rep.warnings.push_back("empty sample: nothing recomputed");
    } else {
        std::mt19937_64 rng(seed);
        std::vector<std::size_t> pick;
        if (sample_size >= all.size()) {
            pick.resize(all.size());
            std::iota(pick.begin(), pick.end(), std::size_t{0});
        } else {
            std::uniform_int_distribution<std::size_t> u(0, all.size() - 1);
            for (std::size_t i = 0; i < sample_size; ++i) pick.push_back(u(rng));
        }
        for (auto i : pick) {
            const DL& r = all[i];
            const double ref = to_double(r.d < 0 ? oracle_afe_neg(r.d, 26) : oracle_afe_pos(r.d, 26));
            const double dev = std::fabs(r.L - ref);
            if (!(dev <= rep.max_dev)) {
                rep.max_dev = std::isnan(dev) ? INFINITY : dev;
                rep.worst_d = r.d;
            }
        }
        rep.sampled = pick.size();
    }
    rep.passed = rep.bad_files.empty() && rep.max_dev <= tolerance;
    return rep;
}

}  // namespace quadl
