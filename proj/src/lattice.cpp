#include "oscint/lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

namespace oscint {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::size_t kMaxFft = std::size_t{1} << 27;
constexpr std::size_t kAnchorEvery = 64;

std::atomic<bool> g_force_direct{false};
std::mutex g_fftw_plan_mutex;

// exp(2 pi i t) with t reduced mod 1 first, so large arguments stay accurate.
cplx cis_cycles(double t) {
    double r = t - std::round(t);
    return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

FreqGrid make_grid(std::size_t M, double xi_max, std::size_t x_points, double x_max) {
    if (M < 2) throw InvalidArgument("make_grid: M must be >= 2, got " + std::to_string(M));
    if (!finite_pos(xi_max)) throw InvalidArgument("make_grid: xi_max must be finite and positive");
    if (!finite_pos(x_max)) throw InvalidArgument("make_grid: x_max must be finite and positive");
    if (x_points == 0) throw InvalidArgument("make_grid: x_points must be positive");
    FreqGrid g;
    g.M = M;
    g.dxi = 2.0 * xi_max / static_cast<double>(M);
    // Re-derive the half extent from dxi so that dxi*M == 2*xi_max holds in floating point.
    g.xi_max = g.dxi * static_cast<double>(M) / 2.0;
    g.x_points = x_points;
    g.x_max = x_max;
    return g;
}

FreqGrid make_periodic_grid(std::size_t M, double xi_max) {
    FreqGrid g = make_grid(M, xi_max, M, 1.0);
    g.x_max = 0.5 / g.dxi;
    return g;
}

IndexRange atom_range(const FreqGrid& g, double lo, double hi) {
    if (hi < lo) return {0, 0};
    double a = std::ceil((lo + g.xi_max) / g.dxi - 1e-9);
    double b = std::floor((hi + g.xi_max) / g.dxi + 1e-9) + 1.0;
    a = std::clamp(a, 0.0, static_cast<double>(g.M));
    b = std::clamp(b, 0.0, static_cast<double>(g.M));
    if (b <= a) return {0, 0};
    return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

// ---------------------------------------------------------------------------
// LatticeSynth

struct LatticeSynth::Fft {
    fftw_complex* buf = nullptr;
    fftw_plan plan = nullptr;
    std::mutex run;  // the buffer is shared by applies on this object
    ~Fft() {
        std::lock_guard<std::mutex> lk(g_fftw_plan_mutex);
        if (plan) fftw_destroy_plan(plan);
        if (buf) fftw_free(buf);
    }
};

void LatticeSynth::set_force_direct(bool on) { g_force_direct = on; }

LatticeSynth::LatticeSynth(std::size_t K, double s0, double ds, std::size_t X, double x0, double dx, double scale)
    : K_(K), X_(X), s0_(s0), ds_(ds), x0_(x0), dx_(dx), scale_(scale) {
    if (!g_force_direct && K > 0 && X > 0) {
        double inv = 1.0 / (ds * dx);
        double Lr = std::round(inv);
        if (Lr >= 1.0 && std::abs(inv - Lr) <= 1e-9 * Lr && Lr >= static_cast<double>(std::max(K, X)) &&
            Lr <= static_cast<double>(kMaxFft)) {
            L_ = static_cast<std::size_t>(Lr);
        }
    }
    if (L_) {
        pre_.resize(K_);
        post_.resize(X_);
        for (std::size_t k = 0; k < K_; ++k) pre_[k] = cis_cycles(x0_ * ds_ * static_cast<double>(k));
        for (std::size_t j = 0; j < X_; ++j) post_[j] = scale_ * cis_cycles((x0_ + static_cast<double>(j) * dx_) * s0_);
        fft_ = std::make_unique<Fft>();
        std::lock_guard<std::mutex> lk(g_fftw_plan_mutex);
        fft_->buf = fftw_alloc_complex(L_);
        fft_->plan = fftw_plan_dft_1d(static_cast<int>(L_), fft_->buf, fft_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
}

LatticeSynth::~LatticeSynth() = default;

void LatticeSynth::apply(const cplx* c, cplx* out) const {
    if (L_) {
        std::lock_guard<std::mutex> lk(fft_->run);
        auto* b = reinterpret_cast<cplx*>(fft_->buf);
        for (std::size_t k = 0; k < K_; ++k) b[k] = c[k] * pre_[k];
        std::fill(b + K_, b + L_, cplx(0.0));
        fftw_execute(fft_->plan);
        for (std::size_t j = 0; j < X_; ++j) out[j] = b[j] * post_[j];
        return;
    }
    // Direct: out += c_k E, E *= W with periodic exact re-anchoring.
    const Kernels& kr = kernels();
    std::vector<cplx> E(X_), W(X_);
    std::fill(out, out + X_, cplx(0.0));
    for (std::size_t j = 0; j < X_; ++j) W[j] = cis_cycles((x0_ + static_cast<double>(j) * dx_) * ds_);
    for (std::size_t k = 0; k < K_; ++k) {
        if (k % kAnchorEvery == 0) {
            const double sk = s0_ + static_cast<double>(k) * ds_;
            for (std::size_t j = 0; j < X_; ++j) E[j] = cis_cycles((x0_ + static_cast<double>(j) * dx_) * sk);
        }
        if (c[k] != cplx(0.0)) kr.caxpy(out, c[k], E.data(), X_);
        kr.cmul_inplace(E.data(), W.data(), X_);
    }
    if (scale_ != 1.0)
        for (std::size_t j = 0; j < X_; ++j) out[j] *= scale_;
}

void LatticeSynth::apply_conj(const cplx* c, cplx* out) const {
    std::vector<cplx> cc(c, c + K_);
    for (auto& v : cc) v = std::conj(v);
    apply(cc.data(), out);
    for (std::size_t j = 0; j < X_; ++j) out[j] = std::conj(out[j]);
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(const FreqGrid& g, std::vector<cplx> freq) : grid_(g) {
    if (freq.size() != g.M)
        throw InvalidArgument("GridFunction: expected " + std::to_string(g.M) + " frequency samples, got " +
                              std::to_string(freq.size()));
    freq_ = std::make_shared<const std::vector<cplx>>(std::move(freq));
}

GridFunction GridFunction::from_space(const FreqGrid& g, std::vector<cplx> space) {
    if (space.size() != g.x_points) throw InvalidArgument("GridFunction::from_space: sample count mismatch");
    GridFunction f(g, forward_samples(g, space));
    f.space_ = std::make_shared<const std::vector<cplx>>(std::move(space));
    return f;
}

GridFunction GridFunction::space_only(const FreqGrid& g, std::vector<cplx> space) {
    if (space.size() != g.x_points) throw InvalidArgument("GridFunction::space_only: sample count mismatch");
    GridFunction f;
    f.grid_ = g;
    f.space_ = std::make_shared<const std::vector<cplx>>(std::move(space));
    return f;
}

const std::vector<cplx>& GridFunction::freq() const {
    if (!freq_) throw InvalidArgument("GridFunction: no frequency representation");
    return *freq_;
}

std::vector<cplx> GridFunction::space() const {
    if (space_) return *space_;
    return synthesize_samples(grid_, freq());
}

GridFunction GridFunction::with_space() const {
    GridFunction f = *this;
    if (!f.space_) f.space_ = std::make_shared<const std::vector<cplx>>(synthesize_samples(grid_, freq()));
    return f;
}

GridFunction synthesize(const GridFunction& f) { return f.with_space(); }

std::vector<cplx> synthesize_samples(const FreqGrid& g, const std::vector<cplx>& freq) {
    LatticeSynth s(g.M, -g.xi_max, g.dxi, g.x_points, -g.x_max, g.dx(), g.dxi);
    std::vector<cplx> out(g.x_points);
    s.apply(freq.data(), out.data());
    return out;
}

std::vector<cplx> forward_samples(const FreqGrid& g, const std::vector<cplx>& space) {
    // sum_j f_j exp(-2 pi i x_j xi_k) dx, with the roles of the two lattices swapped.
    LatticeSynth s(g.x_points, -g.x_max, g.dx(), g.M, -g.xi_max, g.dxi, g.dx());
    std::vector<cplx> out(g.M);
    s.apply_conj(space.data(), out.data());
    return out;
}

GridFunction band_project(const GridFunction& f, const IndexRange& cell) {
    const FreqGrid& g = f.grid();
    if (!cell.empty() && (cell.end > g.M || cell.begin > cell.end))
        throw InvalidArgument("band_project: cell outside [0, M)");
    std::vector<cplx> v(g.M, cplx(0.0));
    const auto& src = f.freq();
    for (std::size_t k = cell.begin; k < cell.end; ++k) v[k] = src[k];
    return GridFunction(g, std::move(v));
}

GridFunction scale(const GridFunction& f, cplx c) {
    std::vector<cplx> v = f.freq();
    for (auto& x : v) x *= c;
    return GridFunction(f.grid(), std::move(v));
}

GridFunction add(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid())) throw InvalidArgument("add: grid mismatch");
    std::vector<cplx> v = a.freq();
    const auto& w = b.freq();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += w[k];
    return GridFunction(a.grid(), std::move(v));
}

double lp_norm_samples(const std::vector<cplx>& v, double dx, double p) {
    if (!(p > 0.0)) throw InvalidArgument("lp_norm: exponent must be positive");
    if (std::isinf(p)) return abs_max(v.data(), v.size());
    return std::pow(abs_pow_sum(v.data(), v.size(), p) * dx, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) {
    if (!(p > 0.0)) throw InvalidArgument("lp_norm: exponent must be positive");
    if (const auto* s = f.cached_space()) return lp_norm_samples(*s, f.grid().dx(), p);
    return lp_norm_samples(f.space(), f.grid().dx(), p);
}

double conjugate_exponent(double p) {
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return p / (p - 1.0);
}

double wiener_norm(const GridFunction& f, double p) {
    if (!(p > 1.0)) throw InvalidArgument("wiener_norm: p must exceed 1");
    return lp_norm_samples(f.freq(), f.grid().dxi, conjugate_exponent(p));
}

// ---------------------------------------------------------------------------
// GridFunction2D

namespace {

// Applies a 1D synthesis (or its adjoint-sign analogue) along one axis of a row-major matrix.
std::vector<cplx> along_axis(const std::vector<cplx>& a, std::size_t rows, std::size_t cols, int axis,
                             const LatticeSynth& s, std::size_t out_len, bool conj) {
    std::vector<cplx> out;
    if (axis == 1) {
        out.resize(rows * out_len);
        for (std::size_t r = 0; r < rows; ++r) {
            if (conj)
                s.apply_conj(a.data() + r * cols, out.data() + r * out_len);
            else
                s.apply(a.data() + r * cols, out.data() + r * out_len);
        }
    } else {
        out.resize(out_len * cols);
        std::vector<cplx> col(rows), res(out_len);
        for (std::size_t c = 0; c < cols; ++c) {
            for (std::size_t r = 0; r < rows; ++r) col[r] = a[r * cols + c];
            if (conj)
                s.apply_conj(col.data(), res.data());
            else
                s.apply(col.data(), res.data());
            for (std::size_t r = 0; r < out_len; ++r) out[r * cols + c] = res[r];
        }
    }
    return out;
}

std::unique_ptr<LatticeSynth> synth_for(const FreqGrid& g) {
    return std::make_unique<LatticeSynth>(g.M, -g.xi_max, g.dxi, g.x_points, -g.x_max, g.dx(), g.dxi);
}

std::unique_ptr<LatticeSynth> fwd_for(const FreqGrid& g) {
    return std::make_unique<LatticeSynth>(g.x_points, -g.x_max, g.dx(), g.M, -g.xi_max, g.dxi, g.dx());
}

}  // namespace

GridFunction2D::GridFunction2D(const FreqGrid& g1, const FreqGrid& g2, std::vector<cplx> freq) : g1_(g1), g2_(g2) {
    if (freq.size() != g1.M * g2.M) throw InvalidArgument("GridFunction2D: expected M1*M2 frequency samples");
    freq_ = std::make_shared<const std::vector<cplx>>(std::move(freq));
}

GridFunction2D GridFunction2D::from_space(const FreqGrid& g1, const FreqGrid& g2, const std::vector<cplx>& space) {
    if (space.size() != g1.x_points * g2.x_points) throw InvalidArgument("GridFunction2D::from_space: size mismatch");
    auto f2 = fwd_for(g2);
    auto t = along_axis(space, g1.x_points, g2.x_points, 1, *f2, g2.M, true);
    auto f1 = fwd_for(g1);
    auto F = along_axis(t, g1.x_points, g2.M, 0, *f1, g1.M, true);
    GridFunction2D r(g1, g2, std::move(F));
    r.space_ = std::make_shared<const std::vector<cplx>>(space);
    return r;
}

GridFunction2D GridFunction2D::from_partial1(const FreqGrid& g1, const FreqGrid& g2, const std::vector<cplx>& a) {
    if (a.size() != g1.M * g2.x_points) throw InvalidArgument("GridFunction2D::from_partial1: size mismatch");
    auto f2 = fwd_for(g2);
    return GridFunction2D(g1, g2, along_axis(a, g1.M, g2.x_points, 1, *f2, g2.M, true));
}

GridFunction2D GridFunction2D::space_only(const FreqGrid& g1, const FreqGrid& g2, std::vector<cplx> space) {
    if (space.size() != g1.x_points * g2.x_points) throw InvalidArgument("GridFunction2D::space_only: size mismatch");
    GridFunction2D r;
    r.g1_ = g1;
    r.g2_ = g2;
    r.space_ = std::make_shared<const std::vector<cplx>>(std::move(space));
    return r;
}

const std::vector<cplx>& GridFunction2D::freq() const {
    if (!freq_) throw InvalidArgument("GridFunction2D: no frequency representation");
    return *freq_;
}

std::vector<cplx> GridFunction2D::represent(bool freq1, bool freq2) const {
    if (!freq1 && !freq2 && space_) return *space_;
    const auto& F = freq();
    std::vector<cplx> a = F;
    std::size_t rows = g1_.M, cols = g2_.M;
    if (!freq2) {
        auto s2 = synth_for(g2_);
        a = along_axis(a, rows, cols, 1, *s2, g2_.x_points, false);
        cols = g2_.x_points;
    }
    if (!freq1) {
        auto s1 = synth_for(g1_);
        a = along_axis(a, rows, cols, 0, *s1, g1_.x_points, false);
    }
    return a;
}

double mixed_norm(const GridFunction2D& F, const MixedNormSpec& spec) {
    if (spec.axis_order.size() != 2 || spec.exponent.size() != 2 || spec.wiener.size() != 2)
        throw InvalidArgument("mixed_norm: spec must cover exactly two axes");
    if (!((spec.axis_order[0] == 0 && spec.axis_order[1] == 1) || (spec.axis_order[0] == 1 && spec.axis_order[1] == 0)))
        throw InvalidArgument("mixed_norm: axis_order must be a permutation of {0, 1}");
    double e[2];
    double meas[2];
    const FreqGrid* g[2] = {&F.grid1(), &F.grid2()};
    for (int a = 0; a < 2; ++a) {
        double p = spec.exponent[a];
        if (!(p > 0.0)) throw InvalidArgument("mixed_norm: exponents must be positive");
        if (spec.wiener[a]) {
            if (!(p > 1.0)) throw InvalidArgument("mixed_norm: Wiener axis needs p > 1");
            e[a] = conjugate_exponent(p);
            meas[a] = g[a]->dxi;
        } else {
            e[a] = p;
            meas[a] = g[a]->dx();
        }
    }
    bool has_space = !F.has_freq();
    if (has_space && (spec.wiener[0] || spec.wiener[1]))
        throw InvalidArgument("mixed_norm: Wiener axis needs a frequency representation");
    std::vector<cplx> R = has_space ? F.space() : F.represent(spec.wiener[0], spec.wiener[1]);
    const std::size_t n0 = spec.wiener[0] ? g[0]->M : g[0]->x_points;
    const std::size_t n1 = spec.wiener[1] ? g[1]->M : g[1]->x_points;
    const int inner = spec.axis_order[0], outer = spec.axis_order[1];
    const std::size_t ni = inner == 0 ? n0 : n1, no = outer == 0 ? n0 : n1;
    std::vector<cplx> inner_vals(no);
    std::vector<cplx> line(ni);
    for (std::size_t o = 0; o < no; ++o) {
        for (std::size_t i = 0; i < ni; ++i) line[i] = inner == 1 ? R[o * n1 + i] : R[i * n1 + o];
        inner_vals[o] = lp_norm_samples(line, meas[inner], e[inner]);
    }
    return lp_norm_samples(inner_vals, meas[outer], e[outer]);
}

}  // namespace oscint
