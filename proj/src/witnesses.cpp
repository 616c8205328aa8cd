#include "oscint/witnesses.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "oscint/rng.hpp"

namespace oscint {

namespace {
constexpr double kPi = std::numbers::pi;

double bump_core(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace

void validate(const WitnessSpec& w) {
    if (!(w.N > 0.0)) throw InvalidArgument("witness: N must be positive");
    if (w.sign != 1 && w.sign != -1) throw InvalidArgument("witness: sign must be +1 or -1");
    if (!(w.epsilon_mollify > 0.0 && w.epsilon_mollify < 1.0))
        throw InvalidArgument("witness: epsilon_mollify must lie in (0, 1)");
    if (w.kind == "g_pm" && !w.M_band) throw InvalidArgument("witness: g_pm needs M_band");
}

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = bump_core(t), b = bump_core(1.0 - t);
    return a / (a + b);
}

double mollified_indicator_value(double x, double N, double eps) {
    return smooth_step((N * (1.0 + eps) - std::abs(x)) / (2.0 * eps * N));
}

double edge_energy_fraction(const GridFunction& f, double frac) {
    const FreqGrid& g = f.grid();
    const auto& v = f.freq();
    double edge = 0.0, tot = 0.0;
    const double cut = (1.0 - frac) * g.xi_max;
    for (std::size_t k = 0; k < g.M; ++k) {
        double e = std::norm(v[k]);
        tot += e;
        if (std::abs(g.xi(k)) > cut) edge += e;
    }
    return tot > 0.0 ? edge / tot : 0.0;
}

void check_aliasing(const GridFunction& f, double frac, double tol) {
    double r = edge_energy_fraction(f, frac);
    if (r > tol)
        throw AliasingError("witness: " + std::to_string(r) + " of the spectral energy sits in the outer " +
                            std::to_string(frac) + " of the lattice");
}

GridFunction chirp(double N, int sign, const FreqGrid& g) {
    if (!(N > 0.0)) throw InvalidArgument("chirp: N must be positive");
    if (g.x_max < N) throw InvalidArgument("chirp: spatial grid narrower than the window");
    std::vector<cplx> s(g.x_points);
    for (std::size_t j = 0; j < g.x_points; ++j) {
        const double x = g.x(j), ax = std::abs(x);
        double w = ax < N ? 1.0 : (ax == N ? 0.5 : 0.0);
        if (w == 0.0) continue;
        double ph = x * x;
        ph -= std::round(ph);
        s[j] = w * cplx(std::cos(2 * kPi * ph), sign * std::sin(2 * kPi * ph));
    }
    GridFunction f = GridFunction::from_space(g, std::move(s));
    check_aliasing(f);
    return f;
}

GridFunction mollified_indicator(double N, double eps, const FreqGrid& g) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("mollified_indicator: eps must lie in (0, 1)");
    std::vector<cplx> s(g.x_points);
    for (std::size_t j = 0; j < g.x_points; ++j) s[j] = mollified_indicator_value(g.x(j), N, eps);
    return GridFunction::from_space(g, std::move(s));
}

GridFunction mollified_chirp(double N, int sign, double eps, const FreqGrid& g) {
    if (g.x_max < N * (1.0 + eps)) throw InvalidArgument("mollified_chirp: spatial grid narrower than the window");
    std::vector<cplx> s(g.x_points);
    for (std::size_t j = 0; j < g.x_points; ++j) {
        const double x = g.x(j);
        double w = mollified_indicator_value(x, N, eps);
        if (w == 0.0) continue;
        double ph = x * x;
        ph -= std::round(ph);
        s[j] = w * cplx(std::cos(2 * kPi * ph), sign * std::sin(2 * kPi * ph));
    }
    return GridFunction::from_space(g, std::move(s));
}

GridFunction g_pm(double N, double M_band, int sign, const FreqGrid& g, double eps) {
    if (!(M_band > 0.0) || M_band > g.xi_max) throw InvalidArgument("g_pm: band [-M, M] must lie inside the lattice");
    GridFunction f = mollified_chirp(N, sign, eps, g);
    return band_project(f, atom_range(g, -M_band, M_band));
}

BandChoice stabilized_band(double N, int sign, const FreqGrid& g, double p, double eps, double tol) {
    BandChoice c;
    GridFunction base = mollified_chirp(N, sign, eps, g);
    double Mb = std::min(2.0 * N, g.xi_max);
    double prev = lp_norm(band_project(base, atom_range(g, -Mb, Mb)), p);
    while (true) {
        double next_M = std::min(Mb * 1.25, g.xi_max);
        double cur = lp_norm(band_project(base, atom_range(g, -next_M, next_M)), p);
        ++c.steps;
        if (std::abs(cur - prev) < tol * prev) {
            c.M_band = next_M;
            c.converged = true;
            return c;
        }
        if (next_M >= g.xi_max) {
            c.M_band = g.xi_max;
            return c;
        }
        Mb = next_M;
        prev = cur;
    }
}

GridFunction modulate(const GridFunction& f, double b) {
    const FreqGrid& g = f.grid();
    const double s = b / g.dxi;
    const double r = std::round(s);
    if (std::abs(s - r) > 1e-6) throw InvalidArgument("modulate: shift is not a whole number of atoms");
    const long sh = static_cast<long>(r);
    const auto& v = f.freq();
    std::vector<cplx> w(g.M, cplx(0.0));
    for (std::size_t k = 0; k < g.M; ++k) {
        if (v[k] == cplx(0.0)) continue;
        long t = static_cast<long>(k) + sh;
        if (t < 0 || t >= static_cast<long>(g.M)) throw InvalidArgument("modulate: shifted band leaves the lattice");
        w[static_cast<std::size_t>(t)] = v[k];
    }
    return GridFunction(g, std::move(w));
}

double chirp2d_partial(double xi, double y, double N) {
    const double ay = std::abs(y);
    if (ay > N) return 0.0;
    const double w = ay == N ? 0.5 : 1.0;
    const double d = y - xi;
    if (std::abs(d) < 1e-12) return w * 2.0 * N;
    return w * std::sin(2 * kPi * N * d) / (kPi * d);
}

GridFunction2D chirp2d(double N, const FreqGrid& g1, const FreqGrid& g2) {
    if (!(N > 0.0)) throw InvalidArgument("chirp2d: N must be positive");
    if (g2.x_max < N || g1.x_max < N) throw InvalidArgument("chirp2d: spatial grids must cover [-N, N]");
    if (g1.xi_max < N) throw InvalidArgument("chirp2d: first lattice must cover the induced band [-N, N]");
    std::vector<cplx> a(g1.M * g2.x_points);
    for (std::size_t k = 0; k < g1.M; ++k)
        for (std::size_t j = 0; j < g2.x_points; ++j) a[k * g2.x_points + j] = chirp2d_partial(g1.xi(k), g2.x(j), N);
    GridFunction2D F = GridFunction2D::from_partial1(g1, g2, a);
    // Second-axis spectra must also fit their lattice.
    double edge = 0.0, tot = 0.0;
    const auto& v = F.freq();
    for (std::size_t k = 0; k < g1.M; ++k)
        for (std::size_t l = 0; l < g2.M; ++l) {
            double e = std::norm(v[k * g2.M + l]);
            tot += e;
            if (std::abs(g2.xi(l)) > 0.95 * g2.xi_max) edge += e;
        }
    if (tot > 0 && edge / tot > 1e-3) throw AliasingError("chirp2d: second-axis spectrum reaches the lattice edge");
    return F;
}

GridFunction random_bandlimited(std::uint64_t seed, const IndexRange& band, const FreqGrid& g) {
    if (band.empty() || band.end > g.M) throw InvalidArgument("random_bandlimited: band must be a nonempty sub-range");
    std::mt19937_64 rng(split_seed(seed, 0x52414E44));
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    std::vector<cplx> v(g.M, cplx(0.0));
    for (std::size_t k = band.begin; k < band.end; ++k) {
        double re = nd(rng);
        double im = nd(rng);
        v[k] = {re, im};
    }
    return GridFunction(g, std::move(v));
}

GridFunction make_witness(const WitnessSpec& w, const FreqGrid& g) {
    validate(w);
    GridFunction f;
    if (w.kind == "chirp")
        f = chirp(w.N, w.sign, g);
    else if (w.kind == "mollified_indicator")
        f = mollified_indicator(w.N, w.epsilon_mollify, g);
    else if (w.kind == "g_pm")
        f = g_pm(w.N, *w.M_band, w.sign, g, w.epsilon_mollify);
    else if (w.kind == "random_bandlimited")
        f = random_bandlimited(w.seed, {0, g.M}, g);
    else
        throw InvalidArgument("make_witness: unknown or non-1D kind '" + w.kind + "'");
    return w.b != 0.0 ? modulate(f, w.b) : f;
}

}  // namespace oscint
