#include <cmath>

#include "doctest.h"
#include "oscint/osc.hpp"
#include "oscint/witnesses.hpp"

using namespace oscint;

namespace {

constexpr double kPi = 3.14159265358979323846;

FreqGrid chirp_grid(double N) { return make_periodic_grid(static_cast<std::size_t>(20 * N * N), 4 * N); }

double freq_energy(const GridFunction& f) {
    double s = 0;
    for (auto v : f.freq()) s += std::norm(v);
    return s * f.grid().dxi;
}

}  // namespace

TEST_CASE("smooth_step") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    for (double t = 0.05; t < 1; t += 0.1) {
        CHECK(smooth_step(t) + smooth_step(1 - t) == doctest::Approx(1.0));
        CHECK(smooth_step(t) < smooth_step(t + 0.05));
    }
}

TEST_CASE("chirp") {
    for (double N : {2.0, 4.0, 8.0}) {
        FreqGrid g = chirp_grid(N);
        GridFunction f = chirp(N, 1, g);
        auto s = f.space();
        for (std::size_t j = 0; j < g.x_points; ++j) {
            double ax = std::abs(g.x(j));
            double expect = ax < N ? 1.0 : (ax == N ? 0.5 : 0.0);
            CHECK(std::abs(s[j]) == doctest::Approx(expect).epsilon(1e-9));
        }
        // interior nodes plus the two half-weight endpoints
        const double dx = 2 * g.x_max / g.x_points;
        for (double p : {1.5, 2.0, 4.0}) {
            double exact = std::pow((2 * N / dx - 1 + 2 * std::pow(0.5, p)) * dx, 1 / p);
            CHECK(lp_norm(f, p) == doctest::Approx(exact).epsilon(1e-9));
            CHECK(lp_norm(f, p) == doctest::Approx(std::pow(2 * N, 1 / p)).epsilon(dx));
        }
        // conjugate sign
        auto c = chirp(N, -1, g).space();
        for (std::size_t j = 0; j < s.size(); ++j) CHECK(std::abs(c[j] - std::conj(s[j])) < 1e-9);
    }
    // lattice far too small for the 2N-wide chirp spectrum
    CHECK_THROWS_AS(chirp(8.0, 1, make_periodic_grid(64, 2.0)), AliasingError);
    CHECK_THROWS_AS(chirp(8.0, 1, make_grid(64, 20.0, 64, 4.0)), InvalidArgument);
}

TEST_CASE("mollified indicator") {
    const double N = 3, eps = 0.25;
    FreqGrid g = make_periodic_grid(512, 16.0);
    GridFunction f = mollified_indicator(N, eps, g);
    for (auto v : f.space()) {
        CHECK(v.real() >= 0.0);
        CHECK(v.real() <= 1.0);
    }
    CHECK(mollified_indicator_value(N * (1 - eps), N, eps) == 1.0);
    CHECK(mollified_indicator_value(N * (1 + eps), N, eps) == 0.0);
    for (double p : {1.5, 2.0, 4.0}) {
        double n = lp_norm(f, p);
        CHECK(n >= std::pow(2 * N * (1 - eps), 1 / p));
        CHECK(n <= std::pow(2 * N * (1 + eps), 1 / p));
    }
    // smooth window: spectrum decays far faster than the sharp indicator's 1/xi
    const auto& v = f.freq();
    double peak = std::abs(v[atom_range(g, 0.0, 0.01).begin]);
    double tail = 0;
    for (std::size_t k = 0; k < g.M; ++k)
        if (std::abs(g.xi(k)) > 8) tail = std::max(tail, std::abs(v[k]));
    CHECK(tail < 1e-6 * peak);
}

TEST_CASE("g_pm") {
    const double N = 4;
    FreqGrid g = make_periodic_grid(1024, 32.0);
    GridFunction full = g_pm(N, g.xi_max, 1, g), raw = mollified_chirp(N, 1, 0.25, g);
    CHECK(max_rel_diff(full.freq(), raw.freq()) < 1e-14);

    GridFunction b = g_pm(N, 3 * N, -1, g);
    IndexRange band = atom_range(g, -3 * N, 3 * N);
    const auto& v = b.freq();
    for (std::size_t k = 0; k < g.M; ++k)
        if (k < band.begin || k >= band.end) CHECK(v[k] == cplx(0.0));
    for (double p : {1.5, 2.0, 4.0})
        CHECK(std::abs(lp_norm(b, p) / lp_norm(raw, p) - 1) < 0.05);
    CHECK_THROWS_AS(g_pm(N, 40.0, 1, g), InvalidArgument);

    BandChoice c = stabilized_band(N, 1, g, 4.0);
    CHECK(c.converged);
    CHECK(c.M_band >= 2 * N);
    CHECK(c.M_band <= g.xi_max);
}

TEST_CASE("modulate") {
    FreqGrid g = make_periodic_grid(64, 4.0);
    GridFunction f = random_bandlimited(7, {20, 30}, g);
    CHECK(max_rel_diff(modulate(f, 0.0).freq(), f.freq()) == 0.0);
    GridFunction m = modulate(f, 10 * g.dxi);
    for (double p : {1.5, 2.0, 4.0}) CHECK(lp_norm(m, p) == doctest::Approx(lp_norm(f, p)).epsilon(1e-10));
    const auto& a = f.freq();
    const auto& b = m.freq();
    for (std::size_t k = 0; k < g.M; ++k) CHECK((a[k] == cplx(0.0) || b[k] == cplx(0.0)));
    // space side picks up the plane wave
    auto sf = f.space(), sm = m.space();
    for (std::size_t j = 0; j < g.x_points; j += 7)
        CHECK(std::abs(sm[j] - sf[j] * std::polar(1.0, 2 * kPi * 10 * g.dxi * g.x(j))) < 1e-12);
    CHECK_THROWS_AS(modulate(f, 0.5 * g.dxi), InvalidArgument);
    CHECK_THROWS_AS(modulate(f, 40 * g.dxi), InvalidArgument);
}

TEST_CASE("chirp2d partial transform") {
    const double N = 1.5;
    for (double xi : {-2.0, 0.3, 1.1})
        for (double y : {-1.2, 0.0, 0.7}) {
            // midpoint rule for int_{-N}^{N} e^{2 pi i x (y - xi)} dx
            const int n = 20000;
            cplx s = 0;
            for (int i = 0; i < n; ++i) {
                double x = -N + (i + 0.5) * 2 * N / n;
                s += std::polar(1.0, 2 * kPi * x * (y - xi));
            }
            s *= 2 * N / n;
            CHECK(std::abs(s - chirp2d_partial(xi, y, N)) < 1e-6);
        }
    CHECK(chirp2d_partial(0.4, 0.4, N) == doctest::Approx(2 * N));
    CHECK(chirp2d_partial(0.4, 1.6, N) == 0.0);

    const double d = 1.0 / 8;
    FreqGrid g1 = make_periodic_grid(static_cast<std::size_t>(std::ceil(2 * (2 * N + 3) / d)), 2 * N + 3);
    FreqGrid g2 = make_periodic_grid(static_cast<std::size_t>(std::ceil(3 * N / d)), 0.5 / d);
    GridFunction2D F = chirp2d(N, g1, g2);
    auto a = F.represent(true, false);
    for (std::size_t k = 0; k < g1.M; k += 5)
        for (std::size_t j = 0; j < g2.x_points; j += 3)
            CHECK(std::abs(a[k * g2.x_points + j] - chirp2d_partial(g1.xi(k), g2.x(j), N)) < 1e-10);
    // the band-limited synthesis has mean |F|^2 close to 1 on the square
    auto s = F.space();
    double e = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < g1.x_points; ++i)
        for (std::size_t j = 0; j < g2.x_points; ++j)
            if (std::abs(g1.x(i)) < N - 0.2 && std::abs(g2.x(j)) < N - 0.2) {
                e += std::norm(s[i * g2.x_points + j]);
                ++cnt;
            }
    CHECK(e / cnt == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("random_bandlimited") {
    FreqGrid g = make_periodic_grid(128, 8.0);
    IndexRange band{40, 80};
    GridFunction a = random_bandlimited(3, band, g), b = random_bandlimited(3, band, g);
    CHECK(max_rel_diff(a.freq(), b.freq()) == 0.0);
    CHECK(max_rel_diff(a.freq(), random_bandlimited(4, band, g).freq()) > 0.1);
    for (std::size_t k = 0; k < g.M; ++k)
        if (k < band.begin || k >= band.end) CHECK(a.freq()[k] == cplx(0.0));
    double mean = 0;
    for (std::uint64_t s = 0; s < 200; ++s) mean += freq_energy(random_bandlimited(s, band, g));
    mean /= 200;
    CHECK(mean == doctest::Approx(40 * g.dxi).epsilon(0.1));
    CHECK_THROWS_AS(random_bandlimited(1, {5, 5}, g), InvalidArgument);
}

TEST_CASE("WitnessSpec") {
    WitnessSpec w;
    w.kind = "chirp";
    w.N = 2;
    CHECK_NOTHROW(validate(w));
    w.sign = 0;
    CHECK_THROWS_AS(validate(w), InvalidArgument);
    w.sign = 1;
    w.epsilon_mollify = 1.0;
    CHECK_THROWS_AS(validate(w), InvalidArgument);
    w.epsilon_mollify = 0.25;
    w.kind = "g_pm";
    CHECK_THROWS_AS(validate(w), InvalidArgument);
    w.M_band = 6.0;
    FreqGrid g = make_periodic_grid(256, 16.0);
    CHECK(max_rel_diff(make_witness(w, g).freq(), g_pm(2, 6, 1, g).freq()) == 0.0);
    w.kind = "nope";
    CHECK_THROWS_AS(make_witness(w, g), InvalidArgument);
}
