// quadl: compute central values of quadratic L-functions, their moments, and
// the comparison with the CFKRS moment polynomials.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "quadl/analysis.hpp"
#include "quadl/cfkrs.hpp"
#include "quadl/engine.hpp"

using namespace quadl;

namespace {

Sign to_sign(const std::string& s) { return parse_sign(s.c_str()); }

void print_run(const RunReport& rep) {
    std::printf("blocks computed %zu, reused %zu; records %llu; trips %llu\n", rep.blocks_computed, rep.blocks_reused,
                static_cast<unsigned long long>(rep.records), static_cast<unsigned long long>(rep.trips));
    for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
    for (const auto& f : rep.files) std::printf("wrote %s\n", f.c_str());
}

void print_ratios(const MomentSeries& s, const std::vector<MomentPolynomial>& polys) {
    if (s.checkpoints.empty()) return;
    const auto X = s.checkpoints.back();
    std::printf("X = %lld, %s discriminants: %s\n", static_cast<long long>(X), sign_name(s.sign),
                to_string(s.sums[0].back(), 17).c_str());
    for (const auto& p : polys) {
        if (p.k > s.kmax) continue;
        std::printf("  k=%d  sum %s  R %.12f  delta %.6g\n", p.k, to_string(s.sums[p.k].back(), 17).c_str(),
                    ratio_R(s, p, p.k, X), difference_delta(s, p, p.k, X));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Central values L(1/2, chi_d) and their moments"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string sign = "neg";
    std::string polys_dir;
    bool no_export = false;
    bool verbose = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--sign", sign, "pos or neg")->check(CLI::IsMember({"pos", "neg"}));
        sub->add_option("--out", cfg.outdir, "output directory");
    };
    auto add_range = [&](CLI::App* sub) {
        sub->add_option("--xmax", cfg.xmax, "largest |d|")->required();
        sub->add_option("--block", cfg.block, "block length")->capture_default_str();
        sub->add_option("--digits", cfg.digits, "digits for d > 0")->capture_default_str();
        sub->add_option("--workers", cfg.workers, "threads (0: all)");
        sub->add_option("--kmax", cfg.kmax, "highest moment")->capture_default_str();
        sub->add_option("--stride-fine", cfg.stride_fine, "checkpoint stride")->capture_default_str();
        sub->add_option("--stride-display", cfg.stride_display, "CSV row stride")->capture_default_str();
        sub->add_option("--polys", polys_dir, "polynomial directory (default <out>/polys)");
    };

    auto* compute = app.add_subcommand("compute", "compute L-values and moments, export CSVs");
    add_common(compute);
    add_range(compute);
    compute->add_flag("--resume", cfg.resume, "reuse valid block files");
    compute->add_option("--prefetch", cfg.prefetch, "cache hint distance for d < 0")->capture_default_str();
    compute->add_flag("--no-export", no_export, "skip polynomials and CSVs");
    compute->add_flag("-v,--verbose", verbose, "progress on stderr");

    auto* moments = app.add_subcommand("moments", "re-accumulate moments from block files");
    add_common(moments);
    add_range(moments);

    auto* polys = app.add_subcommand("polys", "compute the moment polynomials Q(k, x)");
    add_common(polys);
    polys->add_option("--kmax", cfg.kmax, "highest moment")->capture_default_str();
    polys->add_option("--polys", polys_dir, "polynomial directory (default <out>/polys)");

    std::size_t sample = 1000;
    std::uint64_t seed = 1;
    auto* verify_cmd = app.add_subcommand("verify", "recompute a random sample with the high-precision oracles");
    add_common(verify_cmd);
    verify_cmd->add_option("--sample", sample, "records to recompute")->capture_default_str();
    verify_cmd->add_option("--seed", seed, "sampling seed")->capture_default_str();

    auto* exp = app.add_subcommand("export", "write CSVs from a stored moment series");
    add_common(exp);
    exp->add_option("--kmax", cfg.kmax, "highest moment")->capture_default_str();
    exp->add_option("--stride-display", cfg.stride_display, "CSV row stride")->capture_default_str();
    exp->add_option("--polys", polys_dir, "polynomial directory (default <out>/polys)");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.sign = to_sign(sign);
        cfg.poly_dir = polys_dir;
        cfg.export_csv = !no_export;
        cfg.quiet = !verbose;
        if (compute->parsed()) {
            const auto rep = run(cfg);
            print_run(rep);
            if (cfg.export_csv) print_ratios(rep.series, ensure_polynomials(cfg.sign, cfg.kmax, cfg.polys()));
        } else if (moments->parsed()) {
            const auto s = moments_from_blocks(cfg);
            const std::string path = cfg.outdir + "/moments_" + (cfg.sign == Sign::positive ? "pos" : "neg") + ".qmom";
            save_series(s, path);
            std::printf("wrote %s\n", path.c_str());
            const auto p = ensure_polynomials(cfg.sign, cfg.kmax, cfg.polys());
            for (const auto& f : export_csv(s, p, cfg.stride_display, cfg.outdir)) std::printf("wrote %s\n", f.c_str());
            print_ratios(s, p);
        } else if (polys->parsed()) {
            for (const auto& p : ensure_polynomials(cfg.sign, cfg.kmax, cfg.polys(), false)) {
                std::printf("%s", format_polynomial(p).c_str());
                std::printf("leading coefficient vs closed form: %.3g relative\n",
                            to_double(abs(p.coeffs.back() / ks_leading_coefficient(p.k) - 1.0)));
            }
        } else if (verify_cmd->parsed()) {
            const auto rep = verify(cfg.outdir, cfg.sign, sample, seed);
            std::printf("files %zu, bad %zu, sampled %zu, max deviation %.3g (d = %lld)\n", rep.files,
                        rep.bad_files.size(), rep.sampled, rep.max_dev, static_cast<long long>(rep.worst_d));
            for (const auto& b : rep.bad_files) std::printf("bad: %s\n", b.c_str());
            for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
            std::printf("%s\n", rep.passed ? "PASS" : "FAIL");
            return rep.passed ? 0 : 1;
        } else if (exp->parsed()) {
            const std::string path = cfg.outdir + "/moments_" + (cfg.sign == Sign::positive ? "pos" : "neg") + ".qmom";
            const auto s = load_series(path);
            if (cfg.kmax > s.kmax) cfg.kmax = s.kmax;
            const auto p = ensure_polynomials(cfg.sign, cfg.kmax, cfg.polys());
            for (const auto& f : export_csv(s, p, cfg.stride_display, cfg.outdir)) std::printf("wrote %s\n", f.c_str());
            print_ratios(s, p);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
