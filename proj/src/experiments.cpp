#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_expint.h>

#include "oscint/akns.hpp"
#include "oscint/error.hpp"
#include "oscint/harness.hpp"
#include "oscint/osc.hpp"
#include "oscint/rng.hpp"
#include "oscint/tensor2d.hpp"

namespace oscint {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<cplx> gaussian_spectrum(std::mt19937_64& rng, std::size_t M) {
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    std::vector<cplx> v(M);
    for (auto& z : v) {
        double re = nd(rng);
        double im = nd(rng);
        z = {re, im};
    }
    return v;
}

// Lattice for the chirp witnesses at scale N: period 8N(1+eps), band 2N(1+eps)+4.
FreqGrid blowup_grid(double N, double eps = 0.25) {
    const double P = 4.0 * 2.0 * N * (1.0 + eps);
    const double xi_max = 2.0 * N * (1.0 + eps) + 4.0;
    auto M = static_cast<std::size_t>(std::ceil(2.0 * xi_max * P));
    M += M % 2;
    return make_periodic_grid(M, 0.5 * static_cast<double>(M) / P);
}

GridFunction banded_chirp(double N, int sign, const FreqGrid& g, double p) {
    BandChoice b = stabilized_band(N, sign, g, p);
    return g_pm(N, b.M_band, sign, g);
}

ReportRow row(const ExperimentConfig& c, double N, std::uint64_t seed, double value, double normalizer) {
    return {c.kind, N, seed, value, normalizer, value / normalizer};
}

double exponent(const ExperimentConfig& c, std::size_t i, double fallback) {
    return i < c.exponents.size() ? c.exponents[i] : fallback;
}

// ---- experiment kinds ----

void chirp_fourier_norm(const ExperimentConfig& c, ExperimentReport& r) {
    const double p = exponent(c, 0, 4.0);
    for (double N : c.N_schedule) {
        const double xi_max = 4.0 * N;
        auto M = static_cast<std::size_t>(std::ceil(20.0 * N * N));
        M += M % 2;
        FreqGrid g = make_periodic_grid(M, xi_max);
        GridFunction f = chirp(N, 1, g);
        const auto& v = f.freq();
        double val = std::pow(abs_pow_sum(v.data(), v.size(), p) * g.dxi, 1.0 / p);
        r.rows.push_back(row(c, N, c.seed, val, 1.0));
    }
}

void fefferman(const ExperimentConfig& c, ExperimentReport& r) {
    for (double N : c.N_schedule) r.rows.push_back(row(c, N, c.seed, fefferman_value(N), 1.0));
}

void degenerate_blowup(const ExperimentConfig& c, ExperimentReport& r) {
    const double q = exponent(c, 3, 1.0);
    const SignVector eps({1, -1, 1});
    for (double N : c.N_schedule) {
        FreqGrid g = blowup_grid(N);
        const double p = 3.0 * q;
        GridFunction gp = banded_chirp(N, 1, g, p), gm = banded_chirp(N, -1, g, p);
        GridFunction C = dp_ordered({gp, gm, gp}, eps);
        double val = lp_norm(C, q);
        r.rows.push_back(row(c, N, c.seed, val, std::pow(N, 1.0 / q)));
    }
}

void mixed_bounded(const ExperimentConfig& c, ExperimentReport& r) {
    const double p1 = exponent(c, 0, 4.0), p2 = exponent(c, 1, 4.0), p3 = exponent(c, 2, 4.0);
    const double q = 1.0 / (1.0 / p1 + 1.0 / p2 + 1.0 / p3);
    const SignVector eps({-1, 1, 1});
    for (double N : c.N_schedule) {
        FreqGrid g = blowup_grid(N);
        GridFunction gp = banded_chirp(N, 1, g, p2), gm = banded_chirp(N, -1, g, p2);
        GridFunction C = dp_ordered({gp, gm, gp}, eps);
        double val = lp_norm(C, q);
        double norm = wiener_norm(gp, p1) * lp_norm(gm, p2) * lp_norm(gp, p3);
        r.rows.push_back(row(c, N, c.seed, val, norm));
    }
}

void c2pm_closed_form(const ExperimentConfig& c, ExperimentReport& r) {
    std::vector<std::size_t> Ms;
    for (double N : c.N_schedule) Ms.push_back(static_cast<std::size_t>(N));
    ClosedFormStats s = measure_closed_form(Ms);
    for (std::size_t i = 0; i < Ms.size(); ++i) r.rows.push_back(row(c, c.N_schedule[i], c.seed, s.max_rel_err[i], 1.0));
}

// Both inputs are the inverse transform of the indicator of [-1, 1]; the output is
// normed over the window [-N, N] while the lattice period grows with N.
void c2_wiener_iff(const ExperimentConfig& c, ExperimentReport& r) {
    const double p1 = exponent(c, 0, 3.0), p2 = exponent(c, 1, 4.0);
    const double rr = 1.0 / (1.0 / p1 + 1.0 / p2);
    const SignVector eps({-1, 1});
    for (double N : c.N_schedule) {
        const auto M = static_cast<std::size_t>(16.0 * N);
        const double P = static_cast<double>(M) / 2.0;
        FreqGrid g = make_grid(M, 1.0, 4 * M, P / 2.0);
        GridFunction f(g, std::vector<cplx>(M, cplx(1.0)));
        OutputOptions opt;
        opt.x_max = N;
        opt.x_points = static_cast<std::size_t>(32.0 * N);
        GridFunction C = dp_ordered({f, f}, eps, opt);
        double val = lp_norm(C, rr);
        double norm = lp_norm(f, p1) * wiener_norm(f, p2);
        r.rows.push_back(row(c, N, c.seed, val, norm));
    }
}

void chirp2d_mixed_norm(const ExperimentConfig& c, ExperimentReport& r) {
    const double p = exponent(c, 0, 4.0), q = exponent(c, 1, 2.0);
    const bool lq_wp = c.variant.find("Wp[Lq]") == std::string::npos;
    for (double N : c.N_schedule) {
        const double d = 1.0 / (8.0 * N);
        const double xi1 = 2.0 * N + 3.0;
        auto M1 = static_cast<std::size_t>(std::ceil(2.0 * xi1 / d));
        M1 += M1 % 2;
        auto M2 = static_cast<std::size_t>(std::ceil(3.0 * N / d));
        M2 += M2 % 2;
        FreqGrid g1 = make_periodic_grid(M1, 0.5 * static_cast<double>(M1) * d);
        FreqGrid g2 = make_periodic_grid(M2, 0.5 / d);
        GridFunction2D F = chirp2d(N, g1, g2);
        MixedNormSpec spec;
        spec.exponent = {p, q};
        spec.wiener = {true, false};
        spec.axis_order = lq_wp ? std::vector<int>{0, 1} : std::vector<int>{1, 0};
        r.rows.push_back(row(c, N, c.seed, mixed_norm(F, spec), 1.0));
    }
}

void sup_tensor_bounded(const ExperimentConfig& c, ExperimentReport& r) {
    const double p = exponent(c, 0, 4.0);
    const std::size_t M = c.grid.M ? c.grid.M : 96;
    const double xi_max = c.grid.xi_max > 0 ? c.grid.xi_max : 4.0;
    FreqGrid g = make_periodic_grid(M, xi_max);
    for (double N : c.N_schedule) {
        GridFunction2D F = chirp2d(N, g, g);
        GridFunction2D S = sup_tensor_partial(F);
        double val = mixed_norm(S, {{1, 0}, {p, p}, {false, false}});
        double norm = mixed_norm(F, {{1, 0}, {p, p}, {true, true}});
        r.rows.push_back(row(c, N, c.seed, val, norm));
    }
}

void akns_sup(const ExperimentConfig& c, ExperimentReport& r) {
    const std::size_t nodes = c.grid.x_points ? c.grid.x_points : 1601;
    const double x_max = c.grid.x_max > 0 ? c.grid.x_max : 8.0;
    AknsStats s = measure_akns(c.N_schedule.size(), nodes, x_max, c.seed);
    for (std::size_t i = 0; i < s.saturation.size(); ++i)
        r.rows.push_back(row(c, c.N_schedule[i], c.seed, s.sup_full[i], s.sup_half[i]));
}

void vector_valued(const ExperimentConfig& c, ExperimentReport& r) {
    const double p = exponent(c, 0, 2.0), q = exponent(c, 1, p);
    const std::size_t M = c.grid.M ? c.grid.M : 64;
    FreqGrid g = make_periodic_grid(M, 0.5 * static_cast<double>(M));
    const IndexRange band{M * 3 / 8, M * 5 / 8};
    for (double Nf : c.N_schedule) {
        const auto size = static_cast<std::size_t>(Nf);
        double best = -1.0;
        std::uint64_t best_seed = 0;
        for (std::size_t s = 0; s < c.seeds; ++s) {
            const std::uint64_t fam = split_seed(c.seed, size, s);
            std::vector<GridFunction> fs;
            for (std::size_t j = 0; j < size; ++j) fs.push_back(random_bandlimited(split_seed(fam, j), {0, M}, g));
            double v = vector_valued_ratio(fs, band, p, q);
            if (v > best) {
                best = v;
                best_seed = fam;
            }
        }
        r.rows.push_back(row(c, Nf, best_seed, best, 1.0));
    }
}

// Adaptive-free composite Gauss-Legendre on [a, b] split into panels of width <= w.
template <class F>
double panel_gl(F&& f, double a, double b, double w, const gsl_integration_glfixed_table* t) {
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / w));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
        double hi = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(n);
        for (std::size_t k = 0; k < t->n; ++k) {
            double x, wk;
            gsl_integration_glfixed_point(lo, hi, k, &x, &wk, t);
            s += wk * f(x);
        }
    }
    return s;
}

ExperimentConfig base(const std::string& kind, Protocol proto, std::vector<double> sched) {
    ExperimentConfig c;
    c.kind = kind;
    c.protocol = proto;
    c.N_schedule = std::move(sched);
    return c;
}

std::vector<double> geometric(double a, double b) {
    std::vector<double> v;
    for (double x = a; x <= b * (1 + 1e-12); x *= 2) v.push_back(x);
    return v;
}

}  // namespace

double fefferman_value(double N) {
    if (!(N > 0.0)) throw InvalidArgument("fefferman_value: N must be positive");
    const double a = N / 10.0;
    const double U = 4.0 * kPi * a * a;
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(16);
    auto f = [](double u) { return u == 0.0 ? 1.0 : gsl_sf_Si(u) / u; };
    double s = panel_gl(f, 0.0, U, 1.0, t);
    gsl_integration_glfixed_table_free(t);
    return 4.0 * s;
}

double vector_valued_ratio(const std::vector<GridFunction>& fs, const IndexRange& band, double p, double q) {
    if (fs.empty()) throw InvalidArgument("vector_valued_ratio: empty family");
    const FreqGrid& g = fs[0].grid();
    std::vector<double> a(g.x_points, 0.0), b(g.x_points, 0.0);
    const bool identity = band.begin == 0 && band.end == g.M;
    for (const auto& f : fs) {
        auto s = f.space();
        auto t = identity ? s : band_project(f, band).space();
        for (std::size_t j = 0; j < g.x_points; ++j) {
            a[j] += std::norm(t[j]);
            b[j] += std::norm(s[j]);
        }
    }
    std::vector<cplx> A(g.x_points), B(g.x_points);
    for (std::size_t j = 0; j < g.x_points; ++j) {
        A[j] = std::sqrt(a[j]);
        B[j] = std::sqrt(b[j]);
    }
    return lp_norm_samples(A, g.dx(), q) / lp_norm_samples(B, g.dx(), p);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    auto t0 = Clock::now();
    ExperimentReport r;
    r.config = cfg;
    const std::string& k = cfg.kind;
    try {
        if (k == "chirp_fourier_norm") chirp_fourier_norm(cfg, r);
        else if (k == "fefferman_logN") fefferman(cfg, r);
        else if (k == "degenerate_blowup") degenerate_blowup(cfg, r);
        else if (k == "mixed_bounded") mixed_bounded(cfg, r);
        else if (k == "c2pm_closed_form") c2pm_closed_form(cfg, r);
        else if (k == "c2_wiener_iff") c2_wiener_iff(cfg, r);
        else if (k == "chirp2d_mixed_norm") chirp2d_mixed_norm(cfg, r);
        else if (k == "sup_tensor_bounded") sup_tensor_bounded(cfg, r);
        else if (k == "akns_sup") akns_sup(cfg, r);
        else if (k == "vector_valued") vector_valued(cfg, r);
        else throw InvalidArgument("run_experiment: unknown kind '" + k + "'");
    } catch (const Error& e) {
        std::ostringstream os;
        os << k << (cfg.variant.empty() ? "" : "/" + cfg.variant) << " at row " << r.rows.size() << ": " << e.what();
        if (dynamic_cast<const BudgetExceeded*>(&e)) throw BudgetExceeded(os.str());
        if (dynamic_cast<const AliasingError*>(&e)) throw AliasingError(os.str());
        throw Error(os.str());
    }
    finalize(r);
    r.wall_seconds = seconds_since(t0);
    return r;
}

std::vector<std::string> catalog_kinds() {
    return {"chirp_fourier_norm", "fefferman_logN",     "degenerate_blowup",  "mixed_bounded", "c2pm_closed_form",
            "c2_wiener_iff",      "chirp2d_mixed_norm", "sup_tensor_bounded", "akns_sup",      "vector_valued"};
}

std::vector<ExperimentConfig> default_configs(const std::string& kind) {
    std::vector<ExperimentConfig> out;
    if (kind == "chirp_fourier_norm") {
        for (double p : {1.5, 2.0, 4.0}) {
            auto c = base(kind, Protocol::Rate, geometric(16, 512));
            c.variant = "p=" + std::string(p == 1.5 ? "1.5" : p == 2.0 ? "2" : "4");
            c.exponents = {p};
            c.expected = 1.0 / p;
            c.tol = 0.05;
            out.push_back(c);
        }
    } else if (kind == "fefferman_logN") {
        auto c = base(kind, Protocol::Growth, geometric(16, 512));
        c.expected = 0.0;  // any positive trend
        out.push_back(c);
    } else if (kind == "degenerate_blowup") {
        auto c = base(kind, Protocol::Growth, geometric(1, 8));
        c.variant = "+-+";
        c.exponents = {3, 3, 3, 1};
        c.expected = c.thresholds.growth_slope;
        out.push_back(c);
    } else if (kind == "mixed_bounded") {
        auto c = base(kind, Protocol::Bounded, geometric(1, 8));
        c.variant = "-++";
        c.exponents = {4, 4, 4};
        out.push_back(c);
    } else if (kind == "c2pm_closed_form") {
        auto c = base(kind, Protocol::Convergence, {256, 1024, 4096});
        c.tol = 1e-3;
        out.push_back(c);
    } else if (kind == "c2_wiener_iff") {
        auto b = base(kind, Protocol::Bounded, geometric(8, 256));
        b.variant = "p=(3,4)";
        b.exponents = {3, 4};
        out.push_back(b);
        auto g = base(kind, Protocol::Growth, geometric(8, 256));
        g.variant = "p=(2,2) control";
        g.exponents = {2, 2};
        g.expected = g.thresholds.growth_slope;
        out.push_back(g);
    } else if (kind == "chirp2d_mixed_norm") {
        for (auto pq : {std::pair{4.0, 2.0}, std::pair{3.0, 3.0}}) {
            const double p = pq.first, q = pq.second;
            const double pp = p / (p - 1), qq = q / (q - 1);
            auto a = base(kind, Protocol::Rate, geometric(1, 8));
            const std::string tag = " (" + std::to_string(static_cast<int>(p)) + "," + std::to_string(static_cast<int>(q)) + ")";
            a.variant = "Lq[Wp]" + tag;
            a.exponents = {p, q};
            a.expected = (p + q) / (p * q);
            a.tol = 0.1;
            out.push_back(a);
            auto w = a;
            w.variant = "Wp[Lq]" + tag;
            w.expected = std::max((pp + qq) / (pp * qq), (p + q) / (p * q));
            out.push_back(w);
        }
    } else if (kind == "sup_tensor_bounded") {
        auto c = base(kind, Protocol::Bounded, {0.25, 0.5, 1.0, 2.0});
        c.exponents = {4};
        c.grid.M = 96;
        c.grid.xi_max = 4.0;
        out.push_back(c);
    } else if (kind == "akns_sup") {
        std::vector<double> idx;
        for (int i = 1; i <= 16; ++i) idx.push_back(i);
        auto c = base(kind, Protocol::Ceiling, idx);
        c.grid.x_points = 1601;
        c.grid.x_max = 8.0;
        c.tol = 1.2;
        out.push_back(c);
    } else if (kind == "vector_valued") {
        for (double p : {1.5, 2.0, 4.0}) {
            auto c = base(kind, Protocol::Stability, geometric(2, 32));
            c.variant = "p=q=" + std::string(p == 1.5 ? "1.5" : p == 2.0 ? "2" : "4");
            c.exponents = {p, p};
            c.grid.M = 64;
            c.seeds = 100;
            c.tol = 0.2;
            out.push_back(c);
        }
    } else {
        throw InvalidArgument("default_configs: unknown kind '" + kind + "'");
    }
    return out;
}

// ---- invariant measurements ----

OracleStats measure_oracle_equivalence(std::size_t seeds, std::uint64_t root) {
    auto t0 = Clock::now();
    OracleStats st;
    for (std::size_t s = 0; s < seeds; ++s)
        for (std::size_t n : {2u, 3u})
            for (std::size_t M : {8u, 12u, 16u}) {
                std::mt19937_64 rng(split_seed(root, n * 1000 + M, s));
                std::vector<int> e(n);
                for (std::size_t i = 0; i < n; ++i) e[i] = ((s >> i) & 1u) ? -1 : 1;
                SignVector eps(e);
                FreqGrid g = s % 2 == 0 ? make_periodic_grid(M, 2.0) : make_grid(M, 1.5, 2 * M + 3, 2.7);
                std::vector<GridFunction> fs;
                for (std::size_t i = 0; i < n; ++i) fs.emplace_back(g, gaussian_spectrum(rng, M));
                TieRule tie = (s / 8) % 2 == 0 ? TieRule::Strict : TieRule::Simplex;
                auto a = dp_ordered(fs, eps, {}, tie).space();
                auto b = brute_ordered(fs, eps, {}, tie).space();
                st.max_rel_err = std::max(st.max_rel_err, max_rel_diff(a, b));
                ++st.cases;
            }
    st.seconds = seconds_since(t0);
    return st;
}

TilingStats measure_tiling(std::size_t vectors, std::size_t max_M, std::uint64_t root) {
    auto t0 = Clock::now();
    TilingStats st;
    for (std::size_t v = 0; v < vectors; ++v) {
        std::mt19937_64 rng(split_seed(root, v));
        const std::size_t M = 2 + rng() % (max_M - 1);
        std::uniform_real_distribution<double> u(1e-3, 1.0);
        std::vector<double> w(M);
        for (auto& x : w) x = v % 3 == 0 ? std::pow(u(rng), 3.0) : u(rng);
        CdfMap cdf = cdf_from_weights(w);
        if (pair_partition(cdf, 52).residual_pairs() != 0) ++st.residual_nonempty;

        PairPartition part = pair_partition(cdf, cdf.m_max);
        std::vector<int> cover(M * M, 0);
        for (const auto& e : part.entries)
            for (std::size_t i = e.left.begin; i < e.left.end; ++i)
                for (std::size_t k = e.right.begin; k < e.right.end; ++k) ++cover[i * M + k];
        for (const auto& b : part.residual_blocks)
            for (std::size_t i = b.begin; i < b.end; ++i)
                for (std::size_t k = i + 1; k < b.end; ++k) ++cover[i * M + k];
        bool ok = true;
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t k = 0; k < M; ++k) ok = ok && cover[i * M + k] == (i < k ? 1 : 0);
        if (!ok) ++st.failures;
        ++st.vectors;
    }
    st.seconds = seconds_since(t0);
    return st;
}

DecompositionStats measure_decomposition(std::size_t seeds, std::size_t M, std::uint64_t root) {
    auto t0 = Clock::now();
    DecompositionStats st;
    const SignVector eps({-1, 1, 1});
    for (std::size_t s = 0; s < seeds; ++s) {
        std::mt19937_64 rng(split_seed(root, M, s));
        FreqGrid g = make_periodic_grid(M, 2.0);
        std::vector<GridFunction> fs;
        for (int i = 0; i < 3; ++i) fs.emplace_back(g, gaussian_spectrum(rng, M));
        ReconstructionReport rep = decompose_reconstruct(fs, eps, default_pivot({true, false, false}), 4.0 / 3.0);
        st.max_rel_err = std::max(st.max_rel_err, rep.max_rel_err);
        st.max_residual_pairs = std::max(st.max_residual_pairs, rep.residual_pairs);
        ++st.seeds;
    }
    st.seconds = seconds_since(t0);
    return st;
}

ClosedFormStats measure_closed_form(const std::vector<std::size_t>& Ms) {
    ClosedFormStats st;
    const SignVector eps({1, -1});
    for (std::size_t M : Ms) {
        FreqGrid g = make_grid(M, 1.0, 8, 4.0);
        std::vector<cplx> v(M);
        for (std::size_t k = 0; k < M; ++k) v[k] = std::abs(g.xi(k)) <= 1.0 ? 1.0 : 0.0;
        GridFunction f(g, v);
        OrderedSpectrum s = dp_spectrum({f, f}, eps, TieRule::Simplex);
        double worst = 0.0;
        for (int i = 0; i <= 150; ++i) {
            double x = 0.25 + 3.75 * i / 150.0;
            for (double sx : {x, -x}) {
                cplx ref = closed_form_c2pm(sx);
                worst = std::max(worst, std::abs(s.eval(sx) - ref) / std::abs(ref));
            }
        }
        st.M.push_back(M);
        st.max_rel_err.push_back(worst);
    }
    return st;
}

AknsStats measure_akns(std::size_t lambda_pairs, std::size_t nodes, double x_max, std::uint64_t root) {
    auto t0 = Clock::now();
    AknsStats st;
    {
        QuadrantGrid g{201, 1.0};
        AknsSystem z = build_system(g, {Field(g.n * g.n, 0.0), Field(g.n * g.n, 0.0)}, {{1, 1}, {0, 0}, {1, 1}}, {1.3, 0.7});
        QuadrantSolution s = solve(z);
        st.zero_potential_err = std::max(sup_quadrant(s, 1), sup_quadrant(s, 2));
        for (auto u : s.u_tilde[2]) st.zero_potential_err = std::max(st.zero_potential_err, std::abs(u - 1.0));

        AknsSystem one = build_system(g, {Field(g.n * g.n, 1.0)}, {{1, 1}, {0, 0}}, {0.0, 0.0});
        QuadrantSolution s1 = solve(one);
        for (std::size_t i1 = 0; i1 < g.n; ++i1)
            for (std::size_t i2 = 0; i2 < g.n; ++i2)
                st.constant_potential_err =
                    std::max(st.constant_potential_err, std::abs(s1.u_tilde[0][i1 * g.n + i2] - g.x(i1) * g.x(i2)));

        // The trapezoid rule on a phase is second order; the fine grid brings it under 1e-6.
        QuadrantGrid gf{2001, 1.0};
        const double l1 = 1.7, l2 = -0.9;
        AknsSystem ex = build_system(gf, {Field(gf.n * gf.n, 1.0)}, {{1, 1}, {0, 0}}, {l1, l2});
        QuadrantSolution s2 = solve(ex);
        auto F = [](double lam, double x) {
            return (std::exp(cplx(0.0, -lam * x)) - 1.0) / cplx(0.0, -lam);
        };
        for (std::size_t i1 = 0; i1 < gf.n; i1 += 10)
            for (std::size_t i2 = 0; i2 < gf.n; i2 += 10)
                st.exponential_err = std::max(
                    st.exponential_err, std::abs(s2.u_tilde[0][i1 * gf.n + i2] - F(l1, gf.x(i1)) * F(l2, gf.x(i2))));
    }

    QuadrantGrid g{nodes, x_max};
    Field V1 = sample(g, [](double a, double b) {
        return std::exp(cplx(0.0, 2 * kPi * a * b)) / ((1 + a) * (1 + a) * (1 + b) * (1 + b));
    });
    Field V2 = sample(g, [](double a, double b) {
        return std::exp(cplx(0.0, 2 * kPi * (a * a + b * b))) / ((1 + a) * (1 + b));
    });
    std::mt19937_64 rng(split_seed(root, 0x4C414D));
    std::uniform_real_distribution<double> mag(0.5, 4.0);
    for (std::size_t i = 0; i < lambda_pairs; ++i) {
        std::array<double, 2> lam;
        for (auto& l : lam) {
            double m = mag(rng);
            l = (rng() & 1u) ? -m : m;
        }
        AknsSystem sys = build_system(g, {V1, V2}, {{1, 1}, {0, 0}, {1, 1}}, lam);
        QuadrantSolution sol = solve(sys);
        for (std::size_t j = 1; j < sys.N_funcs; ++j) st.residual = std::max(st.residual, recursion_residual(sol, sys, j));
        const double full = sup_quadrant(sol, 1), half = sup_quadrant(sol, 1, x_max / 2);
        st.sup_full.push_back(full);
        st.sup_half.push_back(half);
        st.saturation.push_back(full / half);
        st.max_saturation = std::max(st.max_saturation, full / half);
    }
    st.seconds = seconds_since(t0);
    return st;
}

}  // namespace oscint
