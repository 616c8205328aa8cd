#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "oscint/lattice.hpp"

namespace oscint {

struct WitnessSpec {
    std::string kind;  // chirp | mollified_indicator | g_pm | chirp2d | random_bandlimited
    double N = 1.0;
    std::optional<double> M_band;
    int sign = 1;
    double b = 0.0;
    double epsilon_mollify = 0.25;
    std::uint64_t seed = 0;
};

void validate(const WitnessSpec& w);

// C-infinity step: 0 for t <= 0, 1 for t >= 1, s(t) + s(1-t) == 1.
double smooth_step(double t);
// Dilated mollified indicator of [-N, N]: 1 on |x| <= N(1-eps), 0 for |x| >= N(1+eps).
double mollified_indicator_value(double x, double N, double eps);

// Energy fraction of the spectrum carried by atoms with |xi| > (1-frac)*xi_max.
double edge_energy_fraction(const GridFunction& f, double frac = 0.05);
// Throws AliasingError when the edge fraction exceeds tol.
void check_aliasing(const GridFunction& f, double frac = 0.05, double tol = 1e-3);

GridFunction chirp(double N, int sign, const FreqGrid& g);
GridFunction mollified_indicator(double N, double eps, const FreqGrid& g);
GridFunction mollified_chirp(double N, int sign, double eps, const FreqGrid& g);
GridFunction g_pm(double N, double M_band, int sign, const FreqGrid& g, double eps = 0.25);

struct BandChoice {
    double M_band = 0.0;
    bool converged = false;
    int steps = 0;
};
// Grows M_band geometrically from 2N until ||g_pm||_p moves by less than tol (relative).
BandChoice stabilized_band(double N, int sign, const FreqGrid& g, double p, double eps = 0.25, double tol = 0.01);

GridFunction modulate(const GridFunction& f, double b);

// Partial transform in the first variable of exp(2 pi i x y) chi(x) chi(y), exact.
double chirp2d_partial(double xi, double y, double N);
GridFunction2D chirp2d(double N, const FreqGrid& g1, const FreqGrid& g2);

GridFunction random_bandlimited(std::uint64_t seed, const IndexRange& band, const FreqGrid& g);

GridFunction make_witness(const WitnessSpec& w, const FreqGrid& g);

}  // namespace oscint
