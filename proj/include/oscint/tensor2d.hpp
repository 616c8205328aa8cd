#pragma once

#include <vector>

#include "oscint/lattice.hpp"
#include "oscint/martingale.hpp"
#include "oscint/osc.hpp"

namespace oscint {

// Ordered tuples independently in each variable; n = 1 or n = 2 (M <= max_M per axis).
GridFunction2D brute_tensor(const std::vector<GridFunction2D>& fs, const SignVector& eps, std::size_t max_M = 32);

struct ProductCell {
    std::size_t j1 = 0, j2 = 0;
    IndexRange x;  // atoms along axis 1
    IndexRange y;  // atoms along axis 2
    double mass = 0.0;
};

struct GridMartingale2D {
    int m1 = 0, m2 = 0;
    double total = 0.0;
    double max_atom = 0.0;    // largest single w[k1][k2]
    double max_column = 0.0;  // largest x-atom marginal
    CdfMap outer;
    MartingaleStructure outer_cells;
    std::vector<MartingaleStructure> inner;  // per outer cell; empty cells get no subdivision
    std::vector<double> inner_max_atom;      // largest renormalised row strip per outer cell
    std::vector<ProductCell> cells;
};

// Weights w = |Fhat|^q' dxi deta; outer cells from the x-marginal, inner cells from
// the y-marginal restricted to each outer cell.
GridMartingale2D grid_martingale_2d(const GridFunction2D& F, double q_prime, int m1, int m2);
GridMartingale2D grid_martingale_from_weights(const std::vector<double>& w, std::size_t M1, std::size_t M2, int m1,
                                              int m2);

// sup over prefix rectangles (K, L) of |sum_{k<K, l<L} Fhat e^{2 pi i (xi z1 + eta z2)} dxi deta|
// at every spatial node of F's grids.
GridFunction2D sup_tensor_partial(const GridFunction2D& F, std::size_t max_M = 96);
// Exhaustive (K, L) enumeration; oracle for small grids.
GridFunction2D sup_tensor_partial_brute(const GridFunction2D& F);

}  // namespace oscint
