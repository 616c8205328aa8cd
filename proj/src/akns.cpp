#include "oscint/akns.hpp"

#include <cmath>
#include <string>

#include "oscint/error.hpp"

namespace oscint {

namespace {

Field integrand(const AknsSystem& sys, const Field& next, std::size_t j) {
    const QuadrantGrid& g = sys.grid;
    const std::size_t n = g.n;
    const auto& a = sys.alpha[j - 1];
    const double w1 = a[0] * sys.lambda[0], w2 = a[1] * sys.lambda[1];
    std::vector<cplx> e1(n), e2(n);
    for (std::size_t i = 0; i < n; ++i) {
        e1[i] = std::polar(1.0, -w1 * g.x(i));
        e2[i] = std::polar(1.0, -w2 * g.x(i));
    }
    const Field& V = sys.V[j - 1];
    Field G(n * n);
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i2 = 0; i2 < n; ++i2) G[i1 * n + i2] = V[i1 * n + i2] * next[i1 * n + i2] * e1[i1] * e2[i2];
    return G;
}

// U[i1][i2] = trapezoid integral of G over [0, x_i1] x [0, x_i2].
Field cumulative(const Field& G, std::size_t n, double h, bool x2_first) {
    Field U(n * n, cplx(0.0));
    const double q = h * h / 4.0;
    if (!x2_first) {
        for (std::size_t i1 = 1; i1 < n; ++i1)
            for (std::size_t i2 = 1; i2 < n; ++i2) {
                cplx cell = q * (G[(i1 - 1) * n + i2 - 1] + G[(i1 - 1) * n + i2] + G[i1 * n + i2 - 1] + G[i1 * n + i2]);
                U[i1 * n + i2] = U[(i1 - 1) * n + i2] + U[i1 * n + i2 - 1] - U[(i1 - 1) * n + i2 - 1] + cell;
            }
        return U;
    }
    // Independent route: 1D trapezoid in x2 for every row, then a running sum over x1.
    Field R(n * n, cplx(0.0));
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i2 = 1; i2 < n; ++i2)
            R[i1 * n + i2] = R[i1 * n + i2 - 1] + 0.5 * h * (G[i1 * n + i2 - 1] + G[i1 * n + i2]);
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i1 = 1; i1 < n; ++i1)
            U[i1 * n + i2] = U[(i1 - 1) * n + i2] + 0.5 * h * (R[(i1 - 1) * n + i2] + R[i1 * n + i2]);
    return U;
}

}  // namespace

Field sample(const QuadrantGrid& g, const Potential& V) {
    Field f(g.n * g.n);
    for (std::size_t i1 = 0; i1 < g.n; ++i1)
        for (std::size_t i2 = 0; i2 < g.n; ++i2) f[i1 * g.n + i2] = V(g.x(i1), g.x(i2));
    return f;
}

AknsSystem build_system(const QuadrantGrid& g, std::vector<Field> potentials, std::vector<std::array<double, 2>> constants,
                        std::array<double, 2> lambda) {
    if (g.n < 2 || !(g.x_max > 0.0)) throw InvalidArgument("akns: quadrant grid needs n >= 2 and x_max > 0");
    if (constants.size() < 2) throw InvalidArgument("akns: need at least two equations");
    if (potentials.size() + 1 != constants.size()) throw InvalidArgument("akns: need N-1 potentials for N constants");
    for (const auto& V : potentials)
        if (V.size() != g.n * g.n) throw InvalidArgument("akns: potential sampled on the wrong grid");
    AknsSystem s;
    s.grid = g;
    s.N_funcs = constants.size();
    s.lambda = lambda;
    for (std::size_t j = 0; j + 1 < constants.size(); ++j) {
        std::array<double, 2> a{constants[j][0] - constants[j + 1][0], constants[j][1] - constants[j + 1][1]};
        if (a[0] == 0.0 || a[1] == 0.0)
            throw InvalidArgument("akns: adjacent constants coincide at j = " + std::to_string(j + 1));
        s.alpha.push_back(a);
        s.wiener_class.push_back((j + 1) % 2 == 1);
    }
    s.V = std::move(potentials);
    s.c = std::move(constants);
    return s;
}

QuadrantSolution solve(const AknsSystem& sys) {
    const QuadrantGrid& g = sys.grid;
    const double h = g.h();
    for (const auto& a : sys.alpha)
        for (int k = 0; k < 2; ++k)
            if (std::abs(a[k] * sys.lambda[k]) * h > 0.5)
                throw InvalidArgument("akns: lattice does not resolve the phase, |alpha lambda| h > 0.5");
    QuadrantSolution sol;
    sol.grid = g;
    sol.u_tilde.assign(sys.N_funcs, Field());
    sol.u_tilde[sys.N_funcs - 1] = Field(g.n * g.n, cplx(1.0));
    for (std::size_t j = sys.N_funcs - 1; j >= 1; --j)
        sol.u_tilde[j - 1] = cumulative(integrand(sys, sol.u_tilde[j], j), g.n, h, false);
    return sol;
}

double sup_quadrant(const QuadrantSolution& sol, std::size_t j, double x_sub) {
    if (j < 1 || j > sol.u_tilde.size()) throw InvalidArgument("sup_quadrant: index out of range");
    const QuadrantGrid& g = sol.grid;
    std::size_t lim = g.n;
    if (x_sub >= 0.0) lim = std::min(g.n, static_cast<std::size_t>(std::floor(x_sub / g.h() + 1e-9)) + 1);
    const Field& u = sol.u_tilde[j - 1];
    double m = 0.0;
    for (std::size_t i1 = 0; i1 < lim; ++i1)
        for (std::size_t i2 = 0; i2 < lim; ++i2) m = std::max(m, std::abs(u[i1 * g.n + i2]));
    return m;
}

Field physical_solution(const QuadrantSolution& sol, const AknsSystem& sys, std::size_t j) {
    const QuadrantGrid& g = sol.grid;
    Field u = sol.u_tilde[j - 1];
    const auto& c = sys.c[j - 1];
    for (std::size_t i1 = 0; i1 < g.n; ++i1)
        for (std::size_t i2 = 0; i2 < g.n; ++i2)
            u[i1 * g.n + i2] *= std::polar(1.0, c[0] * sys.lambda[0] * g.x(i1) + c[1] * sys.lambda[1] * g.x(i2));
    return u;
}

double recursion_residual(const QuadrantSolution& sol, const AknsSystem& sys, std::size_t j) {
    if (j < 1 || j >= sys.N_funcs) return 0.0;
    const QuadrantGrid& g = sol.grid;
    Field U = cumulative(integrand(sys, sol.u_tilde[j], j), g.n, g.h(), true);
    const Field& S = sol.u_tilde[j - 1];
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < U.size(); ++i) {
        num = std::max(num, std::abs(U[i] - S[i]));
        den = std::max(den, std::abs(S[i]));
    }
    return den > 0.0 ? num / den : num;
}

}  // namespace oscint
