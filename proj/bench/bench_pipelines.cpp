// Times the block kernels against their serial references and the engine
// across worker counts.  Usage: bench_pipelines [xmax_neg] [xmax_pos]
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "quadl/engine.hpp"
#include "quadl/lcentral_neg.hpp"
#include "quadl/lcentral_pos.hpp"

using namespace quadl;
namespace fs = std::filesystem;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double secs, std::size_t n) {
    std::printf("%-34s %9.3f s  %10.1f ns/value\n", name, secs, 1e9 * secs / static_cast<double>(n));
}

}  // namespace

int main(int argc, char** argv) {
    const std::int64_t xn = argc > 1 ? std::atoll(argv[1]) : 2000000;
    const std::int64_t xp = argc > 2 ? std::atoll(argv[2]) : 200000;
    std::printf("threads available: %d\n", omp_get_max_threads());

    // d < 0: block sweep over all forms vs one d at a time
    const Block bn{xn - 100000, xn, Sign::negative};
    std::vector<DL> blk;
    double t = seconds([&] { blk = lvalues_neg_block(bn); });
    row("neg block kernel", t, blk.size());
    // every 10th record: the per-d path is slow
    double sink = 0;
    std::size_t n = 0;
    t = seconds([&] {
        for (std::size_t i = 0; i < blk.size(); i += 10, ++n) sink += lvalue_neg_single(blk[i].d);
    });
    row("neg serial, per d", t, n);

    // d > 0: n outer with character tables vs d outer with kronecker
    const Block bp{xp - 20000, xp, Sign::positive};
    std::vector<DL> pos;
    t = seconds([&] { pos = lvalues_pos_block(bp); });
    row("pos block kernel", t, pos.size());
    t = seconds([&] { sink += lvalues_pos_block_serial(bp).size(); });
    row("pos serial reference", t, pos.size());

    // engine over worker counts
    const auto dir = fs::temp_directory_path() / "quadl_bench";
    std::vector<int> counts{1, 2, 4};
    if (omp_get_max_threads() > 4) counts.push_back(omp_get_max_threads());
    for (int w : counts) {
        fs::remove_all(dir);
        RunConfig cfg;
        cfg.xmax = xn;
        cfg.block = xn / 20;
        cfg.stride_fine = cfg.block;
        cfg.stride_display = cfg.block;
        cfg.workers = w;
        cfg.outdir = dir.string();
        cfg.export_csv = false;
        RunReport rep;
        t = seconds([&] { rep = run(cfg); });
        row(("engine neg, " + std::to_string(w) + " workers").c_str(), t, rep.records);
    }
    fs::remove_all(dir);
    std::printf("(checksum %.6f)\n", sink);
    return 0;
}
