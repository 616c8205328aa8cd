#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "oscint/error.hpp"
#include "oscint/kernels.hpp"

namespace oscint {

// Uniform frequency lattice xi_k = -xi_max + k*dxi, k in [0, M), paired with a
// half-open spatial grid x_j = -x_max + j*dx, dx = 2*x_max/x_points.
struct FreqGrid {
    std::size_t M = 0;
    double xi_max = 0.0;
    double dxi = 0.0;
    std::size_t x_points = 0;
    double x_max = 0.0;

    double xi(std::size_t k) const { return -xi_max + static_cast<double>(k) * dxi; }
    double dx() const { return 2.0 * x_max / static_cast<double>(x_points); }
    double x(std::size_t j) const { return -x_max + static_cast<double>(j) * dx(); }
    bool operator==(const FreqGrid&) const = default;
};

FreqGrid make_grid(std::size_t M, double xi_max, std::size_t x_points, double x_max);
// Grid whose spatial sampling matches the lattice period exactly (FFT path):
// x_points = M, x_max = 1/(2*dxi).
FreqGrid make_periodic_grid(std::size_t M, double xi_max);

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive

    std::size_t size() const { return end > begin ? end - begin : 0; }
    bool empty() const { return end <= begin; }
    bool contains(std::size_t k) const { return k >= begin && k < end; }
    bool operator==(const IndexRange&) const = default;
};

// Atoms whose frequency lies in the closed interval [lo, hi].
IndexRange atom_range(const FreqGrid& g, double lo, double hi);

// Evaluates out_j = scale * sum_k c_k exp(2 pi i x_j s_k) with s_k = s0 + k*ds and
// x_j = x0 + j*dx. Uses a zero-padded FFT when 1/(ds*dx) is an integer L >= max(K, X),
// otherwise a direct sum driven by a vectorised phase recurrence.
class LatticeSynth {
public:
    LatticeSynth(std::size_t K, double s0, double ds, std::size_t X, double x0, double dx, double scale);
    ~LatticeSynth();
    LatticeSynth(const LatticeSynth&) = delete;
    LatticeSynth& operator=(const LatticeSynth&) = delete;

    void apply(const cplx* c, cplx* out) const;
    // Same sum with conjugated phases: scale * sum_k c_k exp(-2 pi i x_j s_k).
    void apply_conj(const cplx* c, cplx* out) const;
    bool uses_fft() const { return L_ != 0; }

    // Forces the direct path; used to cross-check the two code paths.
    static void set_force_direct(bool on);

private:
    std::size_t K_, X_;
    double s0_, ds_, x0_, dx_, scale_;
    std::size_t L_ = 0;
    std::vector<cplx> pre_, post_;
    struct Fft;
    std::unique_ptr<Fft> fft_;
};

class GridFunction {
public:
    GridFunction() = default;
    GridFunction(const FreqGrid& g, std::vector<cplx> freq);

    // Forward quadrature fhat(xi_k) = sum_j f(x_j) exp(-2 pi i x_j xi_k) dx.
    static GridFunction from_space(const FreqGrid& g, std::vector<cplx> space);
    // Sampled function with no spectrum (outputs of maximal operators).
    static GridFunction space_only(const FreqGrid& g, std::vector<cplx> space);

    const FreqGrid& grid() const { return grid_; }
    bool has_freq() const { return static_cast<bool>(freq_); }
    bool has_space() const { return static_cast<bool>(space_); }
    const std::vector<cplx>& freq() const;
    // Cached samples when present, otherwise a fresh synthesis.
    std::vector<cplx> space() const;
    const std::vector<cplx>* cached_space() const { return space_.get(); }

    GridFunction with_space() const;

private:
    FreqGrid grid_;
    std::shared_ptr<const std::vector<cplx>> freq_;
    std::shared_ptr<const std::vector<cplx>> space_;
};

GridFunction synthesize(const GridFunction& f);
std::vector<cplx> synthesize_samples(const FreqGrid& g, const std::vector<cplx>& freq);
std::vector<cplx> forward_samples(const FreqGrid& g, const std::vector<cplx>& space);

GridFunction band_project(const GridFunction& f, const IndexRange& cell);
GridFunction scale(const GridFunction& f, cplx c);
GridFunction add(const GridFunction& a, const GridFunction& b);

double lp_norm(const GridFunction& f, double p);
double lp_norm_samples(const std::vector<cplx>& v, double dx, double p);
double wiener_norm(const GridFunction& f, double p);
double conjugate_exponent(double p);

// Two-axis lattice function; freq stored row-major with index k1*M2 + k2.
class GridFunction2D {
public:
    GridFunction2D() = default;
    GridFunction2D(const FreqGrid& g1, const FreqGrid& g2, std::vector<cplx> freq);

    static GridFunction2D from_space(const FreqGrid& g1, const FreqGrid& g2, const std::vector<cplx>& space);
    // Input sampled in frequency along axis 1 and in space along axis 2.
    static GridFunction2D from_partial1(const FreqGrid& g1, const FreqGrid& g2, const std::vector<cplx>& a);
    static GridFunction2D space_only(const FreqGrid& g1, const FreqGrid& g2, std::vector<cplx> space);

    const FreqGrid& grid1() const { return g1_; }
    const FreqGrid& grid2() const { return g2_; }
    bool has_freq() const { return static_cast<bool>(freq_); }
    const std::vector<cplx>& freq() const;
    cplx at(std::size_t k1, std::size_t k2) const { return (*freq_)[k1 * g2_.M + k2]; }

    // Samples with each axis in frequency (true) or space (false) representation.
    // Row-major, extents (freq1 ? M1 : X1) x (freq2 ? M2 : X2).
    std::vector<cplx> represent(bool freq1, bool freq2) const;
    std::vector<cplx> space() const { return represent(false, false); }

private:
    FreqGrid g1_, g2_;
    std::shared_ptr<const std::vector<cplx>> freq_;
    std::shared_ptr<const std::vector<cplx>> space_;
};

struct MixedNormSpec {
    std::vector<int> axis_order;      // inner first, e.g. {1, 0}: inner axis 1 (y), outer axis 0 (x)
    std::vector<double> exponent;     // per axis (index = axis)
    std::vector<bool> wiener;         // per axis
};

double mixed_norm(const GridFunction2D& F, const MixedNormSpec& spec);

}  // namespace oscint
