#pragma once

#include <array>
#include <functional>
#include <vector>

#include "oscint/kernels.hpp"

namespace oscint {

// Closed nodal grid on the quadrant square [0, x_max]^2: x_i = i*h, i = 0..n-1.
struct QuadrantGrid {
    std::size_t n = 2;
    double x_max = 1.0;
    double h() const { return x_max / static_cast<double>(n - 1); }
    double x(std::size_t i) const { return static_cast<double>(i) * h(); }
};

using Field = std::vector<cplx>;  // n*n, index i1*n + i2
using Potential = std::function<cplx(double, double)>;

Field sample(const QuadrantGrid& g, const Potential& V);

struct AknsSystem {
    QuadrantGrid grid;
    std::size_t N_funcs = 2;
    std::vector<Field> V;                         // V[j-1] for j = 1..N-1
    std::vector<bool> wiener_class;               // declared class per potential (odd j)
    std::vector<std::array<double, 2>> c;         // c[j-1] for j = 1..N
    std::array<double, 2> lambda{0.0, 0.0};
    std::vector<std::array<double, 2>> alpha;     // alpha[j-1] = c_j - c_{j+1}
};

AknsSystem build_system(const QuadrantGrid& g, std::vector<Field> potentials, std::vector<std::array<double, 2>> constants,
                        std::array<double, 2> lambda);

struct QuadrantSolution {
    QuadrantGrid grid;
    std::vector<Field> u_tilde;  // u_tilde[j-1], j = 1..N; u_tilde[N-1] == 1
};

// Bottom-up cumulative trapezoid solve of the iterated-integral recursion.
QuadrantSolution solve(const AknsSystem& sys);

// max |u_tilde_j| over the nodes with x1, x2 <= x_sub (x_sub < 0: whole grid).
double sup_quadrant(const QuadrantSolution& sol, std::size_t j, double x_sub = -1.0);

// u_j = exp(i(c_j1 lambda_1 x1 + c_j2 lambda_2 x2)) u_tilde_j
Field physical_solution(const QuadrantSolution& sol, const AknsSystem& sys, std::size_t j);

// Re-integrates u_tilde_{j+1} with the x2-first summation order and compares with
// the stored u_tilde_j; relative to sup |u_tilde_j|.
double recursion_residual(const QuadrantSolution& sol, const AknsSystem& sys, std::size_t j);

}  // namespace oscint
