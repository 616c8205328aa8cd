#pragma once

#include <cstdint>
#include <vector>

#include "oscint/lattice.hpp"

namespace oscint {

// Normalised cumulative mass over the atoms, left-endpoint convention:
// gamma[k] = cum[k] / total is the mass strictly before atom k.
struct CdfMap {
    std::vector<double> weights;
    std::vector<double> cum;    // size M+1
    std::vector<double> gamma;  // size M, in [0, 1)
    double total = 0.0;
    double max_weight = 0.0;
    int m_max = 0;

    std::size_t size() const { return weights.size(); }
    double mass(const IndexRange& r) const { return r.empty() ? 0.0 : cum[r.end] - cum[r.begin]; }
};

int default_m_max(std::size_t M);

// w_k = |fhat_k|^p' * dxi.
CdfMap build_cdf(const GridFunction& f, double p_prime, int m_max = -1);
CdfMap cdf_from_weights(std::vector<double> w, int m_max = -1);

struct Cell {
    IndexRange range;
    IndexRange left;
    IndexRange right;
};

struct MartingaleStructure {
    int m = 0;
    std::vector<Cell> cells;  // 2^m cells, index j
};

MartingaleStructure cells(const CdfMap& cdf, int m);
// Cell (m, j) without materialising the whole level.
Cell cell_at(const CdfMap& cdf, int m, std::uint64_t j);
// Subdivides cell (m1, j1) by its own renormalised cumulative mass at depth m2.
MartingaleStructure restricted_cells(const CdfMap& cdf, int m1, std::uint64_t j1, int m2);

struct PairPartitionEntry {
    int m = 0;
    std::uint64_t j = 0;
    IndexRange left;
    IndexRange right;
};

struct PairPartition {
    std::vector<PairPartitionEntry> entries;
    // Depth-m_max cells holding more than one atom; every pair inside one of
    // these blocks is a residual (quantisation collision).
    std::vector<IndexRange> residual_blocks;

    std::size_t residual_pairs() const;
};

PairPartition pair_partition(const CdfMap& cdf, int m_max);

}  // namespace oscint
