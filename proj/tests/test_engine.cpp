#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "quadl/binio.hpp"
#include "quadl/engine.hpp"

using namespace quadl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& sub = "") const { return (path / sub).string(); }
};

std::vector<unsigned char> bytes_of(const std::string& p) { return read_file_bytes(p); }

RunConfig small_config(const std::string& out, Sign sign = Sign::negative) {
    RunConfig c;
    c.sign = sign;
    c.xmax = 200000;
    c.block = 50000;
    c.stride_fine = 10000;
    c.stride_display = 50000;
    c.kmax = 3;
    c.outdir = out;
    c.poly_dir = out + "/polys";
    return c;
}

}  // namespace

TEST_CASE("block file round trip and corruption") {
    auto f = compute_block({0, 20000, Sign::negative}, 16);
    CHECK(f.header.count == f.records.size());
    CHECK(f.header.trips > 0);
    auto bytes = serialize_block(f);
    auto g = deserialize_block(bytes);
    CHECK(g.records.size() == f.records.size());
    CHECK(g.header.lo == 0);
    CHECK(g.header.hi == 20000);
    CHECK(std::memcmp(g.records.data(), f.records.data(), f.records.size() * sizeof(DL)) == 0);
    auto bad = bytes;
    bad[bad.size() - 3] ^= 0x10;
    CHECK_THROWS(deserialize_block(bad));
    bad = bytes;
    bad.resize(bad.size() - 8);
    CHECK_THROWS(deserialize_block(bad));
    bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS(deserialize_block(bad));
}

TEST_CASE("config validation") {
    RunConfig c;
    c.xmax = 1000000;
    CHECK_NOTHROW(c.validate());
    c.block = 300000;
    CHECK_THROWS(c.validate());
    c.block = 1000000;
    c.stride_display = 1500000;
    CHECK_THROWS(c.validate());
    c.stride_display = 10000000;
    c.kmax = 9;
    CHECK_THROWS(c.validate());
}

TEST_CASE("worker count does not change any output byte") {
    TempDir a("quadl_eng_a"), b("quadl_eng_b");
    auto ca = small_config(a.str());
    ca.workers = 1;
    auto cb = small_config(b.str());
    cb.workers = 4;
    cb.poly_dir = ca.poly_dir;
    const auto ra = run(ca);
    const auto rb = run(cb);
    CHECK(ra.blocks_computed == 4);
    CHECK(ra.trips == rb.trips);
    REQUIRE(ra.files.size() == rb.files.size());
    for (std::size_t i = 0; i < ra.files.size(); ++i) {
        const auto rel = fs::relative(ra.files[i], a.path);
        CHECK(bytes_of(ra.files[i]) == bytes_of(b.str(rel.string())));
    }
    for (const auto& e : fs::directory_iterator(a.path / "blocks"))
        CHECK(bytes_of(e.path().string()) == bytes_of((b.path / "blocks" / e.path().filename()).string()));
}

TEST_CASE("resume after losing and corrupting blocks") {
    TempDir a("quadl_eng_resume");
    auto c = small_config(a.str());
    const auto first = run(c);
    const auto series = bytes_of(c.outdir + "/moments_neg.qmom");
    const auto blocks = tile_blocks(c.xmax, c.block, c.sign);
    fs::remove(block_path(c.outdir, blocks[1]));
    {
        std::fstream f(block_path(c.outdir, blocks[2]), std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(200);
        f.put('x');
    }
    c.resume = true;
    const auto second = run(c);
    CHECK(second.blocks_computed == 2);
    CHECK(second.blocks_reused == 2);
    CHECK(bytes_of(c.outdir + "/moments_neg.qmom") == series);
    CHECK(second.trips == first.trips);
}

TEST_CASE("positive blocks with other digits are recomputed") {
    TempDir a("quadl_eng_digits");
    auto c = small_config(a.str(), Sign::positive);
    c.xmax = 100000;
    c.export_csv = false;
    run(c);
    c.resume = true;
    CHECK(run(c).blocks_reused == 2);
    c.digits = 12;
    CHECK(run(c).blocks_computed == 2);
}

TEST_CASE("moments from stored blocks match the run") {
    TempDir a("quadl_eng_moments");
    auto c = small_config(a.str(), Sign::positive);
    c.export_csv = false;
    const auto rep = run(c);
    const auto s = moments_from_blocks(c);
    for (int k = 0; k <= c.kmax; ++k) CHECK(s.sums[k] == rep.series.sums[k]);
    fs::remove(block_path(c.outdir, {50000, 100000, Sign::positive}));
    CHECK_THROWS(moments_from_blocks(c));
}

TEST_CASE("verify catches a bad record") {
    TempDir a("quadl_eng_verify");
    auto c = small_config(a.str());
    c.xmax = 20000;
    c.block = 10000;
    c.stride_fine = 10000;
    c.stride_display = 10000;
    c.export_csv = false;
    run(c);
    auto ok = verify(c.outdir, Sign::negative, 100000);
    CHECK(ok.passed);
    CHECK(ok.max_dev < 1e-10);
    auto empty = verify(c.outdir, Sign::negative, 0);
    CHECK(empty.passed);
    CHECK_FALSE(empty.warnings.empty());

    // a wrong value behind a valid checksum is caught by recomputation
    const auto path = block_path(c.outdir, {10000, 20000, Sign::negative});
    auto f = load_block(path);
    f.records[17].L += 1e-6;
    save_block(f, path);
    auto caught = verify(c.outdir, Sign::negative, 100000);
    CHECK_FALSE(caught.passed);
    CHECK(caught.worst_d == f.records[17].d);

    // a flipped byte fails the checksum
    auto bytes = read_file_bytes(path);
    bytes[100] ^= 1;
    write_file_atomic(path, bytes);
    auto bad = verify(c.outdir, Sign::negative, 10);
    CHECK(bad.bad_files.size() == 1);
    CHECK_FALSE(bad.passed);
    CHECK_THROWS(verify(a.str("nowhere"), Sign::negative, 10));
}

TEST_CASE("CSV export from a run") {
    TempDir a("quadl_eng_csv");
    auto c = small_config(a.str());
    const auto rep = run(c);
    const auto polys = ensure_polynomials(c.sign, c.kmax, c.polys());
    for (int k = 1; k <= 3; ++k) {
        const auto rows = parse_csv(std::string(
            [&] {
                auto b = read_file_bytes(c.outdir + "/moments_neg_k" + std::to_string(k) + ".csv");
                return std::string(b.begin(), b.end());
            }()));
        CHECK(rows.size() == 4);
        CHECK(rows.back().X == 200000.0);
        CHECK(std::fabs(rows.back().R - 1.0) < 0.05);
    }
    CHECK(fs::exists(polynomial_path(c.polys(), Sign::negative, 3)));
}
