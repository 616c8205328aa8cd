#include "oscint/osc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace oscint {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx cis(double theta) { return {std::cos(theta), std::sin(theta)}; }

void check_inputs(const std::vector<GridFunction>& fs, const SignVector& eps, std::size_t max_n) {
    if (fs.empty()) throw InvalidArgument("ordered evaluator: need at least one function");
    if (fs.size() != eps.size()) throw InvalidArgument("ordered evaluator: sign vector length differs from n");
    if (fs.size() > max_n) throw InvalidArgument("ordered evaluator: n = " + std::to_string(fs.size()) + " exceeds " +
                                                 std::to_string(max_n));
    for (const auto& f : fs) {
        if (!(f.grid() == fs[0].grid())) throw InvalidArgument("ordered evaluator: functions live on different grids");
        if (!f.has_freq()) throw InvalidArgument("ordered evaluator: function has no spectrum");
    }
}

double factorial(int r) {
    double v = 1.0;
    for (int i = 2; i <= r; ++i) v *= i;
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// SignVector

SignVector::SignVector(std::vector<int> s) : s_(std::move(s)) {
    if (s_.empty()) throw InvalidArgument("SignVector: empty");
    for (int v : s_)
        if (v != 1 && v != -1) throw InvalidArgument("SignVector: entries must be +1 or -1");
}

SignVector SignVector::parse(const std::string& text) {
    std::vector<int> v;
    if (text.find_first_of("0123456789") == std::string::npos) {
        for (char c : text) {
            if (c == '+') v.push_back(1);
            else if (c == '-') v.push_back(-1);
            else if (c != ' ' && c != ',') throw InvalidArgument("SignVector::parse: bad character in '" + text + "'");
        }
    } else {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) v.push_back(std::stoi(tok));
    }
    return SignVector(std::move(v));
}

int SignVector::sum() const {
    int s = 0;
    for (int v : s_) s += v;
    return s;
}

int SignVector::negatives() const {
    int s = 0;
    for (int v : s_) s += v < 0;
    return s;
}

SignVector SignVector::negated() const {
    std::vector<int> v = s_;
    for (auto& x : v) x = -x;
    return SignVector(std::move(v));
}

SignVector SignVector::slice(std::size_t b, std::size_t e) const {
    return SignVector(std::vector<int>(s_.begin() + static_cast<long>(b), s_.begin() + static_cast<long>(e)));
}

std::string SignVector::str() const {
    std::string r;
    for (int v : s_) r += v > 0 ? '+' : '-';
    return r;
}

// ---------------------------------------------------------------------------

Budget default_budget() {
    Budget b;
    if (const char* env = std::getenv("OSCINT_BUDGET_MB")) {
        char* end = nullptr;
        double mb = std::strtod(env, &end);
        if (end != env && mb > 0) b.max_bytes = static_cast<std::size_t>(mb * 1024.0 * 1024.0);
    }
    return b;
}

cplx OrderedSpectrum::eval(double x) const {
    cplx s = 0.0;
    for (std::size_t t = 0; t < H.size(); ++t) s += H[t] * cis(kTwoPi * x * (s0 + static_cast<double>(t) * ds));
    return s;
}

FreqGrid output_grid(const FreqGrid& in, const SignVector& eps, const OutputOptions& opt) {
    const std::size_t n = eps.size();
    const bool all_negative = eps.negatives() == static_cast<int>(n);
    const std::size_t Mo = n * in.M + (all_negative ? 2 : 0);
    const bool periodic = in.x_points == in.M && std::abs(2.0 * in.x_max * in.dxi - 1.0) < 1e-12;
    std::size_t xp = opt.x_points ? opt.x_points : (periodic ? Mo : n * in.x_points);
    double xm = opt.x_max > 0 ? opt.x_max : in.x_max;
    FreqGrid g = make_grid(Mo, 0.5 * static_cast<double>(Mo) * in.dxi, xp, xm);
    g.dxi = in.dxi;  // keep the spacing bit-identical to the input lattice
    return g;
}

OrderedSpectrum dp_spectrum(const std::vector<GridFunction>& fs, const SignVector& eps, TieRule tie,
                            const Budget& budget) {
    check_inputs(fs, eps, 4);
    const std::size_t n = fs.size();
    const FreqGrid& g = fs[0].grid();
    const std::size_t M = g.M;
    const std::size_t maxM = n == 4 ? budget.max_M_n4 : budget.max_M_n23;
    if (n >= 2 && M > maxM)
        throw BudgetExceeded("dp_ordered: M = " + std::to_string(M) + " exceeds the limit " + std::to_string(maxM) +
                             " for n = " + std::to_string(n));
    const std::size_t off = static_cast<std::size_t>(eps.negatives()) * (M - 1);
    const std::size_t Lt = n * (M - 1) + 1;
    const double bytes = static_cast<double>(n + 1) * static_cast<double>(Lt) * sizeof(cplx);
    if (bytes > static_cast<double>(budget.max_bytes))
        throw BudgetExceeded("dp_ordered: needs " + std::to_string(static_cast<long long>(bytes / 1048576.0)) +
                             " MB, budget is " + std::to_string(budget.max_bytes / 1048576) + " MB");
    if (static_cast<double>(n) * static_cast<double>(M) * static_cast<double>(Lt) > budget.max_ops)
        throw BudgetExceeded("dp_ordered: work estimate exceeds budget");

    const Kernels& kr = kernels();
    std::vector<std::vector<cplx>> P(n + 1, std::vector<cplx>(Lt, cplx(0.0)));
    std::vector<std::size_t> lo(n + 1, Lt), hi(n + 1, 0);
    P[0][off] = 1.0;
    lo[0] = off;
    hi[0] = off + 1;
    std::vector<const std::vector<cplx>*> fv(n);
    for (std::size_t i = 0; i < n; ++i) fv[i] = &fs[i].freq();

    auto accumulate = [&](std::size_t dst, std::size_t src, cplx a, long shift) {
        if (lo[src] >= hi[src] || a == cplx(0.0)) return;
        const std::size_t b = lo[src], e = hi[src];
        const std::size_t db = static_cast<std::size_t>(static_cast<long>(b) + shift);
        kr.caxpy(P[dst].data() + db, a, P[src].data() + b, e - b);
        lo[dst] = std::min(lo[dst], db);
        hi[dst] = std::max(hi[dst], db + (e - b));
    };

    for (std::size_t k = 0; k < M; ++k) {
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) any = any || (*fv[i])[k] != cplx(0.0);
        if (!any) continue;
        const long kk = static_cast<long>(k);
        for (std::size_t i = n; i >= 1; --i) {
            if (tie == TieRule::Strict) {
                accumulate(i, i - 1, (*fv[i - 1])[k], eps[i - 1] * kk);
            } else {
                cplx prod = 1.0;
                long shift = 0;
                for (std::size_t r = 1; r <= i; ++r) {
                    const std::size_t slot = i - r;  // 0-based slot joining the tie group
                    prod *= (*fv[slot])[k];
                    if (prod == cplx(0.0)) break;
                    shift += eps[slot] * kk;
                    accumulate(i, i - r, prod / factorial(static_cast<int>(r)), shift);
                }
            }
        }
    }
    OrderedSpectrum s;
    s.ds = g.dxi;
    s.s0 = -g.xi_max * eps.sum() - static_cast<double>(off) * g.dxi;
    s.H = std::move(P[n]);
    const double w = std::pow(g.dxi, static_cast<double>(n));
    for (auto& v : s.H) v *= w;
    return s;
}

std::vector<cplx> evaluate_spectrum(const OrderedSpectrum& s, const FreqGrid& out) {
    LatticeSynth syn(s.H.size(), s.s0, s.ds, out.x_points, -out.x_max, out.dx(), 1.0);
    std::vector<cplx> v(out.x_points);
    syn.apply(s.H.data(), v.data());
    return v;
}

GridFunction spectrum_to_function(const OrderedSpectrum& s, const FreqGrid& out) {
    const double pos = (s.s0 + out.xi_max) / out.dxi;
    const double r = std::round(pos);
    if (std::abs(pos - r) > 1e-6) throw InvalidArgument("spectrum_to_function: spectrum not aligned with lattice");
    if (r < 0 || static_cast<std::size_t>(r) + s.H.size() > out.M)
        throw InvalidArgument("spectrum_to_function: spectrum does not fit the output lattice");
    std::vector<cplx> F(out.M, cplx(0.0));
    const std::size_t b = static_cast<std::size_t>(r);
    for (std::size_t t = 0; t < s.H.size(); ++t) F[b + t] = s.H[t] / out.dxi;
    return GridFunction(out, std::move(F)).with_space();
}

GridFunction dp_ordered(const std::vector<GridFunction>& fs, const SignVector& eps, const OutputOptions& opt,
                        TieRule tie, const Budget& budget) {
    OrderedSpectrum s = dp_spectrum(fs, eps, tie, budget);
    return spectrum_to_function(s, output_grid(fs[0].grid(), eps, opt));
}

GridFunction brute_ordered(const std::vector<GridFunction>& fs, const SignVector& eps, const OutputOptions& opt,
                           TieRule tie) {
    check_inputs(fs, eps, 4);
    const std::size_t n = fs.size();
    const FreqGrid& g = fs[0].grid();
    const FreqGrid out = output_grid(g, eps, opt);
    std::vector<double> xs(out.x_points);
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = out.x(j);
    std::vector<cplx> acc(out.x_points, cplx(0.0));
    std::vector<std::size_t> k(n, 0);
    const double w = std::pow(g.dxi, static_cast<double>(n));
    // Enumerate nondecreasing tuples; strict rule skips any tuple with a tie.
    auto rec = [&](auto&& self, std::size_t i, std::size_t start) -> void {
        if (i == n) {
            cplx c = w;
            double sigma = 0.0;
            double weight = 1.0;
            std::size_t run = 1;
            for (std::size_t l = 0; l < n; ++l) {
                c *= fs[l].freq()[k[l]];
                sigma += eps[l] * g.xi(k[l]);
                if (l > 0 && k[l] == k[l - 1]) {
                    ++run;
                    weight /= static_cast<double>(run);
                } else {
                    run = 1;
                }
            }
            if (c == cplx(0.0)) return;
            c *= weight;
            for (std::size_t j = 0; j < xs.size(); ++j) acc[j] += c * cis(kTwoPi * xs[j] * sigma);
            return;
        }
        for (std::size_t kv = start; kv < g.M; ++kv) {
            k[i] = kv;
            self(self, i + 1, tie == TieRule::Strict ? kv + 1 : kv);
        }
    };
    rec(rec, 0, 0);
    return GridFunction::space_only(out, std::move(acc));
}

// ---------------------------------------------------------------------------
// Maximal truncations

namespace {

struct PhaseTable {
    std::size_t X;
    std::vector<cplx> plus, minus;  // [k*X + j] = exp(+-2 pi i x_j xi_k)
    const cplx* row(std::size_t k, int sign) const { return (sign > 0 ? plus.data() : minus.data()) + k * X; }
};

PhaseTable phase_table(const FreqGrid& g, const FreqGrid& out) {
    PhaseTable t;
    t.X = out.x_points;
    t.plus.resize(g.M * t.X);
    t.minus.resize(g.M * t.X);
    for (std::size_t k = 0; k < g.M; ++k)
        for (std::size_t j = 0; j < t.X; ++j) {
            double c = out.x(j) * g.xi(k);
            c -= std::round(c);
            t.plus[k * t.X + j] = cis(kTwoPi * c);
            t.minus[k * t.X + j] = std::conj(t.plus[k * t.X + j]);
        }
    return t;
}

}  // namespace

GridFunction sup_truncated(const std::vector<GridFunction>& fs, const SignVector& eps, const OutputOptions& opt,
                           const Budget& budget) {
    check_inputs(fs, eps, 3);
    const std::size_t n = fs.size();
    if (n < 2) throw InvalidArgument("sup_truncated: n must be 2 or 3");
    const FreqGrid& g = fs[0].grid();
    const FreqGrid out = output_grid(g, eps, opt);
    const std::size_t X = out.x_points, M = g.M;
    const double bytes = 2.0 * static_cast<double>(M) * static_cast<double>(X) * sizeof(cplx);
    if (bytes > static_cast<double>(budget.max_bytes)) throw BudgetExceeded("sup_truncated: phase table over budget");
    const double ops = 0.5 * static_cast<double>(M) * static_cast<double>(M) * static_cast<double>(n * X);
    if (ops > budget.max_ops) throw BudgetExceeded("sup_truncated: work estimate exceeds budget");

    const Kernels& kr = kernels();
    const PhaseTable E = phase_table(g, out);
    std::vector<double> best(X, 0.0);
    std::vector<std::vector<cplx>> Q(n + 1, std::vector<cplx>(X));
    for (std::size_t lower = 0; lower < M; ++lower) {
        for (std::size_t i = 1; i <= n; ++i) std::fill(Q[i].begin(), Q[i].end(), cplx(0.0));
        for (std::size_t k = lower; k < M; ++k) {
            for (std::size_t i = n; i >= 1; --i) {
                const cplx a = fs[i - 1].freq()[k] * g.dxi;
                if (a == cplx(0.0)) continue;
                const cplx* e = E.row(k, eps[i - 1]);
                if (i == 1)
                    kr.caxpy(Q[1].data(), a, e, X);
                else
                    kr.caxpy_mul(Q[i].data(), a, e, Q[i - 1].data(), X);
            }
            kr.cabs2_max(best.data(), Q[n].data(), X);
        }
    }
    std::vector<cplx> v(X);
    for (std::size_t j = 0; j < X; ++j) v[j] = std::sqrt(best[j]);
    return GridFunction::space_only(out, std::move(v));
}

GridFunction sup_truncated_brute(const std::vector<GridFunction>& fs, const SignVector& eps, const OutputOptions& opt) {
    check_inputs(fs, eps, 3);
    const std::size_t n = fs.size();
    const FreqGrid& g = fs[0].grid();
    const std::size_t M = g.M;
    std::vector<double> best;
    for (std::size_t lower = 0; lower < M; ++lower) {
        for (std::size_t upper = lower; upper < M; ++upper) {
            std::vector<GridFunction> w;
            for (std::size_t i = 0; i < n; ++i) w.push_back(band_project(fs[i], {lower, upper + 1}));
            auto v = brute_ordered(w, eps, opt).space();
            if (best.empty()) best.assign(v.size(), 0.0);
            for (std::size_t j = 0; j < v.size(); ++j) best[j] = std::max(best[j], std::abs(v[j]));
        }
    }
    std::vector<cplx> v(best.begin(), best.end());
    return GridFunction::space_only(output_grid(g, eps, opt), std::move(v));
}

// ---------------------------------------------------------------------------

cplx closed_form_c2pm(double x) {
    if (x == 0.0) throw SingularPoint("closed_form_c2pm: x = 0 is singular");
    const double pi = std::numbers::pi;
    const cplx i(0.0, 1.0);
    return 1.0 / (pi * i * x) + (1.0 - std::exp(-4.0 * pi * i * x)) / (4.0 * pi * pi * x * x);
}

GridFunction rubio_square(const GridFunction& f, const std::vector<IndexRange>& cells, double r) {
    if (!(r > 0.0)) throw InvalidArgument("rubio_square: r must be positive");
    std::vector<IndexRange> sorted;
    for (const auto& c : cells)
        if (!c.empty()) sorted.push_back(c);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.begin < b.begin; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].begin < sorted[i - 1].end) throw InvalidArgument("rubio_square: cells overlap");
    const FreqGrid& g = f.grid();
    std::vector<double> acc(g.x_points, 0.0);
    for (const auto& c : sorted) {
        auto v = band_project(f, c).space();
        for (std::size_t j = 0; j < v.size(); ++j) acc[j] += std::pow(std::abs(v[j]), r);
    }
    std::vector<cplx> out(g.x_points);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::pow(acc[j], 1.0 / r);
    return GridFunction::space_only(g, std::move(out));
}

// ---------------------------------------------------------------------------
// Decomposition over the pair partition

double max_rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) throw InvalidArgument("max_rel_diff: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return den > 0.0 ? num / den : num;
}

std::size_t default_pivot(const std::vector<bool>& wiener_slots) {
    std::size_t n = wiener_slots.size();
    std::size_t p = 1;
    for (std::size_t i = 0; i < n; ++i)
        if (wiener_slots[i]) {
            p = i + 1;
            break;
        }
    if (n >= 2) p = std::min(p, n - 1);
    return p;
}

ReconstructionReport decompose_reconstruct(const std::vector<GridFunction>& fs, const SignVector& eps, std::size_t pivot,
                                           double p_prime, int m_max) {
    check_inputs(fs, eps, 4);
    const std::size_t n = fs.size();
    if (n < 2) throw InvalidArgument("decompose_reconstruct: n must be at least 2");
    if (pivot < 1 || pivot > n - 1) throw InvalidArgument("decompose_reconstruct: pivot must lie in [1, n-1]");
    const FreqGrid& g = fs[0].grid();
    const FreqGrid out = output_grid(g, eps);

    ReconstructionReport rep;
    rep.direct = dp_ordered(fs, eps);
    const std::size_t X = out.x_points;
    std::vector<cplx> dec(X, cplx(0.0)), res(X, cplx(0.0));

    // A vanishing pivot has no martingale and both sides are identically zero.
    bool pivot_zero = true;
    for (auto v : fs[pivot - 1].freq()) pivot_zero = pivot_zero && v == cplx(0.0);
    if (!pivot_zero) {
        CdfMap cdf = build_cdf(fs[pivot - 1], p_prime, m_max);
        const int depth = m_max < 0 ? cdf.m_max : m_max;
        PairPartition part = pair_partition(cdf, depth);
        rep.entries = part.entries.size();
        rep.residual_pairs = part.residual_pairs();
        const SignVector eL = eps.slice(0, pivot), eR = eps.slice(pivot, n);
        for (const auto& e : part.entries) {
            std::vector<GridFunction> L(fs.begin(), fs.begin() + static_cast<long>(pivot));
            L.back() = band_project(L.back(), e.left);
            std::vector<GridFunction> R(fs.begin() + static_cast<long>(pivot), fs.end());
            R.front() = band_project(R.front(), e.right);
            auto vl = evaluate_spectrum(dp_spectrum(L, eL), out);
            auto vr = evaluate_spectrum(dp_spectrum(R, eR), out);
            for (std::size_t j = 0; j < X; ++j) dec[j] += vl[j] * vr[j];
        }
        for (const auto& blk : part.residual_blocks) {
            std::vector<GridFunction> w = fs;
            w[pivot - 1] = band_project(w[pivot - 1], blk);
            w[pivot] = band_project(w[pivot], blk);
            auto v = evaluate_spectrum(dp_spectrum(w, eps), out);
            for (std::size_t j = 0; j < X; ++j) res[j] += v[j];
        }
    }
    std::vector<cplx> total(X);
    for (std::size_t j = 0; j < X; ++j) total[j] = dec[j] + res[j];
    rep.max_rel_err = max_rel_diff(total, rep.direct.space());
    rep.decomposed = GridFunction::space_only(out, std::move(dec));
    rep.residual = GridFunction::space_only(out, std::move(res));
    return rep;
}

}  // namespace oscint
