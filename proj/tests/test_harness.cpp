#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oscint/error.hpp"
#include "oscint/harness.hpp"

using namespace oscint;

namespace {

constexpr double kPi = 3.14159265358979323846;

Samples series(std::initializer_list<double> Ns, double (*f)(double)) {
    Samples s;
    for (double N : Ns) s.emplace_back(N, f(N));
    return s;
}

// Gauss-Legendre nodes on [-1, 1] by Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = z;
        w[i] = 2 / ((1 - z * z) * dp * dp);
    }
}

// 4 * int_0^a int_0^a sin(4 pi s t) / (s t) ds dt by a tensor panel rule.
double fefferman_oracle(double a) {
    std::vector<double> gx, gw;
    gauss_legendre(12, gx, gw);
    const int panels = 60;
    std::vector<double> nodes, weights;
    for (int p = 0; p < panels; ++p) {
        double lo = a * p / panels, hi = a * (p + 1) / panels;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            nodes.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[i]);
            weights.push_back(0.5 * (hi - lo) * gw[i]);
        }
    }
    double s = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            double st = nodes[i] * nodes[j];
            s += weights[i] * weights[j] * std::sin(4 * kPi * st) / st;
        }
    return 4 * s;
}

ExperimentConfig quick_chirp() {
    ExperimentConfig c = default_configs("chirp_fourier_norm")[1];
    c.N_schedule = {8, 16, 32, 64};
    return c;
}

std::string csv_of(const ExperimentReport& r) {
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

}  // namespace

TEST_CASE("power-law and log fits") {
    FitResult a = fit_power_law(series({1, 2, 4, 8, 16}, [](double N) { return N * N; }));
    CHECK(a.slope == doctest::Approx(2.0));
    CHECK(a.r2 == doctest::Approx(1.0));
    CHECK(a.intercept == doctest::Approx(0.0).epsilon(1e-12));
    FitResult b = fit_power_law(series({1, 2, 3, 4}, [](double) { return 7.0; }));
    CHECK(b.slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.r2 == 1.0);
    FitResult c = fit_log_growth(series({2, 4, 8, 16, 32}, [](double N) { return 3 * std::log(N) + 1; }));
    CHECK(c.slope == doctest::Approx(3.0));
    CHECK(c.intercept == doctest::Approx(1.0));

    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-0.01, 0.01);
    Samples noisy;
    for (double N = 4; N <= 1024; N *= 2) noisy.emplace_back(N, std::pow(N, 1.5) * (1 + u(rng)));
    CHECK(std::abs(fit_power_law(noisy).slope - 1.5) < 0.05);

    CHECK_THROWS_AS(fit_power_law(series({1, 2, 3}, [](double N) { return N; })), InvalidArgument);
    CHECK_THROWS_AS(fit_power_law(series({1, 2, 3, 4}, [](double N) { return N - 2; })), InvalidArgument);
    CHECK_THROWS_AS(fit_log_growth({{1, 1}, {1, 2}, {1, 3}, {1, 4}}), InvalidArgument);
}

TEST_CASE("classification") {
    CHECK(classify(series({2, 4, 8, 16}, [](double N) { return 1 + 1 / N; })) == Verdict::Bounded);
    CHECK(classify(series({2, 4, 8, 16, 32}, [](double N) { return std::log(N); })) == Verdict::Growing);
    CHECK(classify(series({2, 4, 8, 16}, [](double N) { return std::sqrt(N); })) == Verdict::Growing);
    // flat slope but a wide band
    CHECK(classify({{1, 1}, {2, 100}, {3, 0.5}, {4, 1}}) == Verdict::Inconclusive);
    // rising too fast for bounded, too noisy for growing
    CHECK(classify({{2, 1.0}, {4, 1.3}, {8, 1.1}, {16, 1.4}}) == Verdict::Inconclusive);
    CHECK(band_ratio({{1, 2}, {2, 8}}) == 4.0);
    CHECK(std::string(verdict_name(Verdict::Growing)) == "GROWING");
}

TEST_CASE("protocols read only the ratio column") {
    ExperimentReport r;
    r.config.kind = "synthetic";
    for (double N : {2.0, 4.0, 8.0, 16.0}) r.rows.push_back({"synthetic", N, 0, 3 * N, 3.0, N});
    r.config.protocol = Protocol::Rate;
    r.config.expected = 1.0;
    finalize(r);
    CHECK(r.pass);
    CHECK(r.axes == "loglog");
    r.config.expected = 0.5;
    finalize(r);
    CHECK(!r.pass);

    r.config.protocol = Protocol::Convergence;
    r.config.tol = 1.0;
    r.rows = {{"synthetic", 1, 0, 1, 1, 3}, {"synthetic", 2, 0, 1, 1, 2}, {"synthetic", 3, 0, 1, 1, 0.5}};
    finalize(r);
    CHECK(r.pass);
    r.rows[1].ratio = 4;
    finalize(r);
    CHECK(!r.pass);

    r.config.protocol = Protocol::Ceiling;
    r.config.tol = 4.0;
    finalize(r);
    CHECK(r.pass);
    r.config.protocol = Protocol::Stability;
    r.config.tol = 0.2;
    r.rows = {{"s", 2, 0, 1, 1, 1.0}, {"s", 4, 0, 1, 1, 1.15}, {"s", 8, 0, 1, 1, 0.9}};
    finalize(r);
    CHECK(r.pass);
    r.rows.push_back({"s", 16, 0, 1, 1, 1.3});
    finalize(r);
    CHECK(!r.pass);
    CHECK(parse_protocol("bounded") == Protocol::Bounded);
    CHECK_THROWS_AS(parse_protocol("nope"), InvalidArgument);
}

TEST_CASE("config validation and JSON") {
    ExperimentConfig c = quick_chirp();
    CHECK_NOTHROW(validate(c));
    c.N_schedule = {8, 8, 16, 32};
    CHECK_THROWS_AS(validate(c), InvalidArgument);
    c.N_schedule = {8, 16, 32};
    CHECK_THROWS_AS(validate(c), InvalidArgument);
    c.protocol = Protocol::Ceiling;
    CHECK_NOTHROW(validate(c));

    for (const auto& kind : catalog_kinds())
        for (const auto& d : default_configs(kind)) {
            CHECK_NOTHROW(validate(d));
            ExperimentConfig back = config_from_json(config_to_json(d));
            CHECK(config_to_json(back) == config_to_json(d));
        }
    ExperimentConfig j = config_from_json(R"({"kind": "c2_wiener_iff", "variant": "p=(2,2) control",
                                            "N_schedule": [8, 16, 32, 64], "thresholds": {"band": null}})");
    CHECK(j.protocol == Protocol::Growth);
    CHECK(j.N_schedule.size() == 4);
    CHECK(std::isinf(j.thresholds.band));
    CHECK_THROWS_AS(config_from_json("{"), InvalidArgument);
    CHECK_THROWS_AS(config_from_json(R"({"kind": "chirp_fourier_norm", "N_schedule": [4, 2, 8, 16]})"), InvalidArgument);
    CHECK_THROWS_AS(default_configs("nope"), InvalidArgument);
}

TEST_CASE("CSV round trip and determinism") {
    ExperimentReport r = run_experiment(quick_chirp());
    REQUIRE(r.rows.size() == 4);
    CHECK(r.pass);
    const std::string text = csv_of(r);
    CHECK(text.rfind("kind,N,seed,value,normalizer,ratio\n", 0) == 0);
    CHECK(text == csv_of(run_experiment(quick_chirp())));

    std::istringstream is(text);
    ExperimentReport back = read_csv(is);
    finalize(back);
    CHECK(back.pass == r.pass);
    CHECK(back.fit.slope == r.fit.slope);
    CHECK(back.band == r.band);
    CHECK(back.classification == r.classification);
    CHECK(csv_of(back) == text);

    std::istringstream bad("N,kind\n1,2\n");
    CHECK_THROWS_AS(read_csv(bad), InvalidArgument);
}

TEST_CASE("vector-valued ratio") {
    FreqGrid g = make_periodic_grid(32, 16.0);
    std::vector<GridFunction> fs;
    for (std::uint64_t s = 0; s < 5; ++s) fs.push_back(random_bandlimited(s, {0, 32}, g));
    CHECK(vector_valued_ratio(fs, {0, 32}, 2.0, 2.0) == doctest::Approx(1.0));
    CHECK(vector_valued_ratio(fs, {0, 32}, 4.0, 4.0) == doctest::Approx(1.0));
    // one function: the scalar projection ratio
    IndexRange band{10, 20};
    double scalar = lp_norm(band_project(fs[0], band), 1.5) / lp_norm(fs[0], 1.5);
    CHECK(vector_valued_ratio({fs[0]}, band, 1.5, 1.5) == doctest::Approx(scalar));
    // p = 2: Plancherel bounds it by 1
    CHECK(vector_valued_ratio(fs, band, 2.0, 2.0) <= 1.0 + 1e-12);
    CHECK_THROWS_AS(vector_valued_ratio({}, band, 2.0, 2.0), InvalidArgument);
}

TEST_CASE("Fefferman integral against tensor Gauss-Legendre") {
    for (double N : {4.0, 16.0, 32.0}) {
        double ref = fefferman_oracle(N / 10);
        CHECK(fefferman_value(N) == doctest::Approx(ref).epsilon(1e-9));
    }
}
