#include "oscint/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace oscint {

namespace {

constexpr int kMaxDepth = 53;  // dyadic thresholds stay exact in double
constexpr int kMaxMaterialised = 24;

std::size_t first_at_least(const CdfMap& c, std::size_t b, std::size_t e, double thr) {
    return static_cast<std::size_t>(std::lower_bound(c.gamma.begin() + b, c.gamma.begin() + e, thr) - c.gamma.begin());
}

int ceil_log2(std::size_t M) {
    int r = 0;
    while ((std::size_t{1} << r) < M) ++r;
    return r;
}

}  // namespace

int default_m_max(std::size_t M) { return ceil_log2(M) + 4; }

CdfMap cdf_from_weights(std::vector<double> w, int m_max) {
    CdfMap c;
    const std::size_t M = w.size();
    if (M == 0) throw InvalidArgument("cdf: empty weight vector");
    for (double v : w)
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("cdf: weights must be finite and nonnegative");
    c.weights = std::move(w);
    c.cum.assign(M + 1, 0.0);
    for (std::size_t k = 0; k < M; ++k) {
        c.cum[k + 1] = c.cum[k] + c.weights[k];
        c.max_weight = std::max(c.max_weight, c.weights[k]);
    }
    c.total = c.cum[M];
    if (!(c.total > 0.0)) throw ZeroMass("cdf: input has zero mass");
    const double below_one = std::nextafter(1.0, 0.0);
    c.gamma.resize(M);
    for (std::size_t k = 0; k < M; ++k) c.gamma[k] = std::min(c.cum[k] / c.total, below_one);
    c.m_max = m_max < 0 ? default_m_max(M) : m_max;
    return c;
}

CdfMap build_cdf(const GridFunction& f, double p_prime, int m_max) {
    if (!(p_prime >= 1.0)) throw InvalidArgument("build_cdf: p' must be >= 1");
    const auto& v = f.freq();
    std::vector<double> w(v.size());
    const double dxi = f.grid().dxi;
    for (std::size_t k = 0; k < v.size(); ++k) w[k] = std::pow(std::abs(v[k]), p_prime) * dxi;
    return cdf_from_weights(std::move(w), m_max);
}

Cell cell_at(const CdfMap& c, int m, std::uint64_t j) {
    const std::size_t M = c.size();
    const double lo = std::ldexp(static_cast<double>(j), -m);
    const double mid = std::ldexp(static_cast<double>(2 * j + 1), -(m + 1));
    const double hi = std::ldexp(static_cast<double>(j + 1), -m);
    Cell cell;
    std::size_t b = first_at_least(c, 0, M, lo);
    std::size_t e = first_at_least(c, b, M, hi);
    std::size_t d = first_at_least(c, b, e, mid);
    cell.range = {b, e};
    cell.left = {b, d};
    cell.right = {d, e};
    return cell;
}

MartingaleStructure cells(const CdfMap& c, int m) {
    if (m < 0 || m > c.m_max) throw InvalidArgument("cells: depth " + std::to_string(m) + " outside [0, m_max]");
    if (m > kMaxMaterialised) throw BudgetExceeded("cells: refusing to materialise 2^" + std::to_string(m) + " cells");
    MartingaleStructure s;
    s.m = m;
    const std::uint64_t n = std::uint64_t{1} << m;
    s.cells.reserve(n);
    for (std::uint64_t j = 0; j < n; ++j) s.cells.push_back(cell_at(c, m, j));
    return s;
}

MartingaleStructure restricted_cells(const CdfMap& c, int m1, std::uint64_t j1, int m2) {
    if (m1 < 0 || m2 < 0 || m1 > c.m_max) throw InvalidArgument("restricted_cells: bad depth");
    if (m2 > kMaxMaterialised) throw BudgetExceeded("restricted_cells: depth too large");
    if (j1 >= (std::uint64_t{1} << m1)) throw InvalidArgument("restricted_cells: cell index out of range");
    const IndexRange parent = cell_at(c, m1, j1).range;
    if (parent.empty()) throw InvalidArgument("restricted_cells: parent cell is empty");
    const double pm = c.mass(parent);
    if (!(pm > 0.0)) throw ZeroMass("restricted_cells: parent cell has zero mass");
    const std::size_t n = parent.size();
    std::vector<double> g(n);
    const double below_one = std::nextafter(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::min((c.cum[parent.begin + i] - c.cum[parent.begin]) / pm, below_one);
    auto at = [&](double thr) {
        return parent.begin + static_cast<std::size_t>(std::lower_bound(g.begin(), g.end(), thr) - g.begin());
    };
    MartingaleStructure s;
    s.m = m2;
    const std::uint64_t cnt = std::uint64_t{1} << m2;
    for (std::uint64_t j = 0; j < cnt; ++j) {
        std::size_t b = at(std::ldexp(static_cast<double>(j), -m2));
        std::size_t e = at(std::ldexp(static_cast<double>(j + 1), -m2));
        std::size_t d = at(std::ldexp(static_cast<double>(2 * j + 1), -(m2 + 1)));
        d = std::clamp(d, b, e);
        s.cells.push_back(Cell{{b, e}, {b, d}, {d, e}});
    }
    return s;
}

std::size_t PairPartition::residual_pairs() const {
    std::size_t n = 0;
    for (const auto& r : residual_blocks) n += r.size() * (r.size() - 1) / 2;
    return n;
}

PairPartition pair_partition(const CdfMap& c, int m_max) {
    const std::size_t M = c.size();
    if (m_max < ceil_log2(M)) throw InvalidArgument("pair_partition: m_max must be >= ceil(log2 M)");
    if (m_max > kMaxDepth) throw InvalidArgument("pair_partition: m_max above 53 loses dyadic exactness");
    PairPartition out;
    struct Node {
        int m;
        std::uint64_t j;
        IndexRange r;
    };
    std::vector<Node> stack{{0, 0, {0, M}}};
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        if (nd.r.size() < 2) continue;
        if (nd.m == m_max) {
            out.residual_blocks.push_back(nd.r);
            continue;
        }
        const double thr = std::ldexp(static_cast<double>(2 * nd.j + 1), -(nd.m + 1));
        const std::size_t mid = first_at_least(c, nd.r.begin, nd.r.end, thr);
        IndexRange l{nd.r.begin, mid}, r{mid, nd.r.end};
        if (!l.empty() && !r.empty()) out.entries.push_back({nd.m, nd.j, l, r});
        stack.push_back({nd.m + 1, 2 * nd.j + 1, r});
        stack.push_back({nd.m + 1, 2 * nd.j, l});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const auto& a, const auto& b) { return std::tie(a.m, a.j) < std::tie(b.m, b.j); });
    std::sort(out.residual_blocks.begin(), out.residual_blocks.end(),
              [](const auto& a, const auto& b) { return a.begin < b.begin; });
    return out;
}

}  // namespace oscint
