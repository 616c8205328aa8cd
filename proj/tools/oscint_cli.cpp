#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "oscint/error.hpp"
#include "oscint/harness.hpp"
#include "oscint/kernels.hpp"

using namespace oscint;
namespace fs = std::filesystem;

namespace {

std::string file_stem(const ExperimentConfig& c) {
    std::string s = c.kind;
    if (!c.variant.empty()) {
        s += "_";
        for (char ch : c.variant) {
            if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.') s += ch;
            else if (ch == '+') s += 'p';
            else if (ch == '-') s += 'm';
            else if (s.back() != '_') s += '_';
        }
        while (s.back() == '_') s.pop_back();
    }
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_report(const ExperimentReport& r) {
    std::printf("%-6s %s%s%s  %s  [%s, %.1fs]\n", r.pass ? "PASS" : "FAIL", r.config.kind.c_str(),
                r.config.variant.empty() ? "" : " ", r.config.variant.c_str(), r.detail.c_str(),
                verdict_name(r.classification), r.wall_seconds);
    for (const auto& row : r.rows)
        std::printf("    N=%-8g value=%-14.6g normalizer=%-14.6g ratio=%.6g\n", row.N, row.value, row.normalizer,
                    row.ratio);
}

int run_configs(const std::vector<ExperimentConfig>& cfgs, const std::string& out_dir) {
    int failures = 0;
    for (const auto& c : cfgs) {
        ExperimentReport r = run_experiment(c);
        print_report(r);
        failures += r.pass ? 0 : 1;
        std::string path = c.output;
        if (path.empty() && !out_dir.empty()) {
            fs::create_directories(out_dir);
            path = (fs::path(out_dir) / (file_stem(c) + ".csv")).string();
        }
        if (!path.empty()) {
            std::ofstream os(path);
            write_csv(r, os);
        }
    }
    return failures;
}

std::vector<ExperimentConfig> configs_for(const std::string& kind, const std::string& config_path) {
    if (!config_path.empty()) return {config_from_json(read_file(config_path))};
    return default_configs(kind);
}

int verify() {
    int fail = 0;
    auto line = [&](bool ok, const char* name, const std::string& detail) {
        std::printf("%-6s %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
        fail += ok ? 0 : 1;
    };
    char buf[256];
    OracleStats o = measure_oracle_equivalence(100);
    std::snprintf(buf, sizeof buf, "max rel err %.3g over %zu cases (%.1fs)", o.max_rel_err, o.cases, o.seconds);
    line(o.max_rel_err <= 1e-9, "oracle_equivalence", buf);
    TilingStats t = measure_tiling(200, 64);
    std::snprintf(buf, sizeof buf, "%zu vectors, %zu tiling failures, %zu unresolved (%.1fs)", t.vectors, t.failures,
                  t.residual_nonempty, t.seconds);
    line(t.failures == 0 && t.residual_nonempty == 0, "partition_tiling", buf);
    DecompositionStats d = measure_decomposition(20, 16);
    std::snprintf(buf, sizeof buf, "max rel err %.3g over %zu seeds (%.1fs)", d.max_rel_err, d.seeds, d.seconds);
    line(d.max_rel_err <= 1e-9, "decomposition", buf);
    ClosedFormStats c = measure_closed_form({256, 1024, 4096});
    std::snprintf(buf, sizeof buf, "rel err %.3g / %.3g / %.3g at M = 256 / 1024 / 4096", c.max_rel_err[0],
                  c.max_rel_err[1], c.max_rel_err[2]);
    line(c.max_rel_err[1] <= 1e-3 && c.max_rel_err[2] < c.max_rel_err[1], "closed_form", buf);
    AknsStats a = measure_akns();
    std::snprintf(buf, sizeof buf, "closed forms %.2g / %.2g / %.2g, residual %.2g, saturation max %.4f (%.1fs)",
                  a.zero_potential_err, a.constant_potential_err, a.exponential_err, a.residual, a.max_saturation,
                  a.seconds);
    line(a.zero_potential_err <= 1e-6 && a.constant_potential_err <= 1e-6 && a.exponential_err <= 1e-6 &&
             a.residual <= 1e-6 && a.max_saturation <= 1.2,
         "akns", buf);
    return fail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ordered oscillatory integral experiments"};
    app.require_subcommand(1);
    std::string out_dir, config_path, kind;

    auto* v = app.add_subcommand("verify", "run the invariant suite");
    auto add_kind_cmd = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("kind", kind, "experiment kind")->check(CLI::IsMember(catalog_kinds()));
        s->add_option("--config", config_path, "JSON experiment config");
        s->add_option("--out", out_dir, "directory for CSV reports");
        return s;
    };
    auto* rates = add_kind_cmd("rates", "fit a growth rate");
    auto* blowup = add_kind_cmd("blowup", "detect blow-up");
    auto* bounded = add_kind_cmd("bounded", "bounded-ratio protocol");
    auto* akns = app.add_subcommand("akns", "AKNS quadrant solves");
    akns->add_option("--out", out_dir, "directory for CSV reports");
    std::size_t dec_M = 16, dec_seeds = 20;
    auto* dec = app.add_subcommand("decompose", "martingale decomposition check");
    dec->add_option("--M", dec_M, "atoms per input");
    dec->add_option("--seeds", dec_seeds, "number of seeds");
    auto* report = app.add_subcommand("report", "run every catalog kind");
    report->add_option("--out", out_dir, "directory for CSV reports")->default_val("reports");

    CLI11_PARSE(app, argc, argv);
    std::fprintf(stderr, "kernels: %s\n", kernels().name);
    try {
        if (v->parsed()) return verify() ? 1 : 0;
        for (auto* s : {rates, blowup, bounded})
            if (s->parsed()) {
                if (kind.empty() && config_path.empty()) throw InvalidArgument("need a kind or --config");
                return run_configs(configs_for(kind, config_path), out_dir) ? 1 : 0;
            }
        if (akns->parsed()) return run_configs(default_configs("akns_sup"), out_dir) ? 1 : 0;
        if (dec->parsed()) {
            DecompositionStats d = measure_decomposition(dec_seeds, dec_M);
            std::printf("max rel err %.3g over %zu seeds, residual pairs <= %zu (%.1fs)\n", d.max_rel_err, d.seeds,
                        d.max_residual_pairs, d.seconds);
            return d.max_rel_err <= 1e-9 ? 0 : 1;
        }
        if (report->parsed()) {
            int f = 0;
            for (const auto& k : catalog_kinds()) f += run_configs(default_configs(k), out_dir);
            return f ? 1 : 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
