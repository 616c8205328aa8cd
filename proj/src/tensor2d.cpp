#include "oscint/tensor2d.hpp"

#include <cmath>
#include <numbers>

namespace oscint {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx cis_cycles(double t) {
    t -= std::round(t);
    return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

std::size_t lattice_index(const FreqGrid& out, double s) {
    double p = (s + out.xi_max) / out.dxi;
    double r = std::round(p);
    if (std::abs(p - r) > 1e-6 || r < 0 || r >= static_cast<double>(out.M))
        throw InvalidArgument("brute_tensor: signed atom sum off the output lattice");
    return static_cast<std::size_t>(r);
}
}  // namespace

GridFunction2D brute_tensor(const std::vector<GridFunction2D>& fs, const SignVector& eps, std::size_t max_M) {
    if (fs.empty() || fs.size() != eps.size()) throw InvalidArgument("brute_tensor: need one sign per function");
    if (fs.size() > 2) throw InvalidArgument("brute_tensor: n must be 1 or 2");
    const FreqGrid& g1 = fs[0].grid1();
    const FreqGrid& g2 = fs[0].grid2();
    for (const auto& f : fs)
        if (!(f.grid1() == g1) || !(f.grid2() == g2)) throw InvalidArgument("brute_tensor: grid mismatch");
    if (fs.size() == 1) {
        if (eps[0] < 0) {
            // Reflect both axes: C_1^{-1}(f)(z) = f(-z).
            const FreqGrid o1 = output_grid(g1, eps), o2 = output_grid(g2, eps);
            std::vector<cplx> G(o1.M * o2.M, cplx(0.0));
            for (std::size_t k = 0; k < g1.M; ++k)
                for (std::size_t l = 0; l < g2.M; ++l)
                    G[lattice_index(o1, -g1.xi(k)) * o2.M + lattice_index(o2, -g2.xi(l))] = fs[0].at(k, l);
            return GridFunction2D(o1, o2, std::move(G));
        }
        return fs[0];
    }
    if (g1.M > max_M || g2.M > max_M) throw BudgetExceeded("brute_tensor: M per axis above the enumeration budget");
    const FreqGrid o1 = output_grid(g1, eps), o2 = output_grid(g2, eps);
    std::vector<cplx> H(o1.M * o2.M, cplx(0.0));
    const double w = g1.dxi * g2.dxi;
    for (std::size_t k1 = 0; k1 < g1.M; ++k1)
        for (std::size_t k2 = k1 + 1; k2 < g1.M; ++k2) {
            const std::size_t a = lattice_index(o1, eps[0] * g1.xi(k1) + eps[1] * g1.xi(k2));
            for (std::size_t l1 = 0; l1 < g2.M; ++l1) {
                const cplx f1 = fs[0].at(k1, l1);
                if (f1 == cplx(0.0)) continue;
                for (std::size_t l2 = l1 + 1; l2 < g2.M; ++l2) {
                    const std::size_t b = lattice_index(o2, eps[0] * g2.xi(l1) + eps[1] * g2.xi(l2));
                    H[a * o2.M + b] += f1 * fs[1].at(k2, l2) * w * w;
                }
            }
        }
    // Output convention: samples are such that synthesis sum Fhat e^{...} dxi deta reproduces C.
    for (auto& v : H) v /= o1.dxi * o2.dxi;
    return GridFunction2D(o1, o2, std::move(H));
}

GridMartingale2D grid_martingale_from_weights(const std::vector<double>& w, std::size_t M1, std::size_t M2, int m1,
                                              int m2) {
    if (w.size() != M1 * M2) throw InvalidArgument("grid_martingale_2d: weight matrix has wrong size");
    GridMartingale2D gm;
    gm.m1 = m1;
    gm.m2 = m2;
    std::vector<double> col(M1, 0.0);
    for (std::size_t k = 0; k < M1; ++k)
        for (std::size_t l = 0; l < M2; ++l) {
            col[k] += w[k * M2 + l];
            gm.max_atom = std::max(gm.max_atom, w[k * M2 + l]);
        }
    for (double c : col) gm.max_column = std::max(gm.max_column, c);
    gm.outer = cdf_from_weights(col, std::max(m1, default_m_max(M1)));
    gm.total = gm.outer.total;
    gm.outer_cells = cells(gm.outer, m1);
    for (std::size_t j1 = 0; j1 < gm.outer_cells.cells.size(); ++j1) {
        const IndexRange xr = gm.outer_cells.cells[j1].range;
        std::vector<double> row(M2, 0.0);
        for (std::size_t k = xr.begin; k < xr.end; ++k)
            for (std::size_t l = 0; l < M2; ++l) row[l] += w[k * M2 + l];
        double rm = 0.0, mass = 0.0;
        for (double r : row) {
            rm = std::max(rm, r);
            mass += r;
        }
        gm.inner_max_atom.push_back(rm);
        if (xr.empty() || !(mass > 0.0)) {
            gm.inner.push_back(MartingaleStructure{m2, {}});
            continue;
        }
        CdfMap ic = cdf_from_weights(row, std::max(m2, default_m_max(M2)));
        MartingaleStructure is = cells(ic, m2);
        for (std::size_t j2 = 0; j2 < is.cells.size(); ++j2) {
            const IndexRange yr = is.cells[j2].range;
            ProductCell pc{j1, j2, xr, yr, 0.0};
            for (std::size_t k = xr.begin; k < xr.end; ++k)
                for (std::size_t l = yr.begin; l < yr.end; ++l) pc.mass += w[k * M2 + l];
            gm.cells.push_back(pc);
        }
        gm.inner.push_back(std::move(is));
    }
    return gm;
}

GridMartingale2D grid_martingale_2d(const GridFunction2D& F, double q_prime, int m1, int m2) {
    if (!(q_prime >= 1.0)) throw InvalidArgument("grid_martingale_2d: q' must be >= 1");
    const std::size_t M1 = F.grid1().M, M2 = F.grid2().M;
    std::vector<double> w(M1 * M2);
    const double meas = F.grid1().dxi * F.grid2().dxi;
    const auto& v = F.freq();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(std::abs(v[i]), q_prime) * meas;
    return grid_martingale_from_weights(w, M1, M2, m1, m2);
}

GridFunction2D sup_tensor_partial(const GridFunction2D& F, std::size_t max_M) {
    const FreqGrid& g1 = F.grid1();
    const FreqGrid& g2 = F.grid2();
    const std::size_t M1 = g1.M, M2 = g2.M;
    if (M1 > max_M || M2 > max_M) throw BudgetExceeded("sup_tensor_partial: M per axis above budget");
    const std::size_t X1 = g1.x_points, X2 = g2.x_points;
    const Kernels& kr = kernels();
    const double w = g1.dxi * g2.dxi;
    // Phases along axis 2, stored [l][j2].
    std::vector<cplx> e2(M2 * X2);
    for (std::size_t l = 0; l < M2; ++l)
        for (std::size_t j = 0; j < X2; ++j) e2[l * X2 + j] = cis_cycles(g2.xi(l) * g2.x(j));
    std::vector<cplx> RT(M2 * M1);  // RT[l][K-1] = sum_{k<K} Fhat[k][l] e^{2 pi i xi_k z1}
    std::vector<cplx> S(M1);
    std::vector<double> best(M1);
    std::vector<cplx> out(X1 * X2);
    for (std::size_t j1 = 0; j1 < X1; ++j1) {
        const double z1 = g1.x(j1);
        for (std::size_t l = 0; l < M2; ++l) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < M1; ++k) {
                acc += F.at(k, l) * cis_cycles(g1.xi(k) * z1);
                RT[l * M1 + k] = acc;
            }
        }
        for (std::size_t j2 = 0; j2 < X2; ++j2) {
            std::fill(S.begin(), S.end(), cplx(0.0));
            std::fill(best.begin(), best.end(), 0.0);
            for (std::size_t l = 0; l < M2; ++l) {
                kr.caxpy(S.data(), e2[l * X2 + j2], RT.data() + l * M1, M1);
                kr.cabs2_max(best.data(), S.data(), M1);
            }
            double m = 0.0;
            for (double b : best) m = std::max(m, b);
            out[j1 * X2 + j2] = std::sqrt(m) * w;
        }
    }
    return GridFunction2D::space_only(g1, g2, std::move(out));
}

GridFunction2D sup_tensor_partial_brute(const GridFunction2D& F) {
    const FreqGrid& g1 = F.grid1();
    const FreqGrid& g2 = F.grid2();
    const std::size_t X1 = g1.x_points, X2 = g2.x_points;
    std::vector<cplx> out(X1 * X2);
    for (std::size_t j1 = 0; j1 < X1; ++j1)
        for (std::size_t j2 = 0; j2 < X2; ++j2) {
            double m = 0.0;
            for (std::size_t K = 1; K <= g1.M; ++K)
                for (std::size_t L = 1; L <= g2.M; ++L) {
                    cplx s = 0.0;
                    for (std::size_t k = 0; k < K; ++k)
                        for (std::size_t l = 0; l < L; ++l)
                            s += F.at(k, l) * std::exp(cplx(0.0, kTwoPi * (g1.xi(k) * g1.x(j1) + g2.xi(l) * g2.x(j2))));
                    m = std::max(m, std::abs(s));
                }
            out[j1 * X2 + j2] = m * g1.dxi * g2.dxi;
        }
    return GridFunction2D::space_only(g1, g2, std::move(out));
}

}  // namespace oscint
