#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "oscint/lattice.hpp"
#include "oscint/martingale.hpp"

namespace oscint {

class SignVector {
public:
    SignVector() = default;
    explicit SignVector(std::vector<int> s);
    // "+-+" or "1,-1,1"
    static SignVector parse(const std::string& text);

    std::size_t size() const { return s_.size(); }
    int operator[](std::size_t i) const { return s_[i]; }
    int sum() const;
    int negatives() const;
    // eps_i + eps_{i+1} == 0 (0-based i)
    bool degenerate_at(std::size_t i) const { return s_[i] + s_[i + 1] == 0; }
    SignVector negated() const;
    SignVector slice(std::size_t b, std::size_t e) const;
    std::string str() const;
    const std::vector<int>& values() const { return s_; }

private:
    std::vector<int> s_;
};

// How coincident atoms k_i == k_{i+1} are weighted. Strict drops them; Simplex
// keeps them with weight 1/g! per group of g equal indices (the exact volume of
// the ordered simplex inside a diagonal cell).
enum class TieRule { Strict, Simplex };

struct Budget {
    std::size_t max_bytes = std::size_t{1} << 30;
    std::size_t max_M_n23 = 4096;
    std::size_t max_M_n4 = 512;
    double max_ops = 4e10;
};

// Honours OSCINT_BUDGET_MB for the byte cap.
Budget default_budget();

// C(x) = sum_t H[t] exp(2 pi i x (s0 + t*ds)).
struct OrderedSpectrum {
    double s0 = 0.0;
    double ds = 1.0;
    std::vector<cplx> H;

    cplx eval(double x) const;
};

struct OutputOptions {
    std::size_t x_points = 0;  // 0: derived from the input grid
    double x_max = 0.0;        // 0: same as the input grid
};

// Lattice and spatial grid for an n-fold output. M' = n*M (n*M+2 if every sign is
// negative), same spacing, aligned so every signed atom sum is a lattice point.
FreqGrid output_grid(const FreqGrid& in, const SignVector& eps, const OutputOptions& opt = {});

OrderedSpectrum dp_spectrum(const std::vector<GridFunction>& fs, const SignVector& eps, TieRule tie = TieRule::Strict,
                            const Budget& budget = default_budget());
GridFunction spectrum_to_function(const OrderedSpectrum& s, const FreqGrid& out);
std::vector<cplx> evaluate_spectrum(const OrderedSpectrum& s, const FreqGrid& out);

GridFunction dp_ordered(const std::vector<GridFunction>& fs, const SignVector& eps, const OutputOptions& opt = {},
                        TieRule tie = TieRule::Strict, const Budget& budget = default_budget());
GridFunction brute_ordered(const std::vector<GridFunction>& fs, const SignVector& eps, const OutputOptions& opt = {},
                           TieRule tie = TieRule::Strict);

GridFunction sup_truncated(const std::vector<GridFunction>& fs, const SignVector& eps, const OutputOptions& opt = {},
                           const Budget& budget = default_budget());
// Exhaustive window enumeration, oracle for sup_truncated.
GridFunction sup_truncated_brute(const std::vector<GridFunction>& fs, const SignVector& eps,
                                 const OutputOptions& opt = {});

cplx closed_form_c2pm(double x);

GridFunction rubio_square(const GridFunction& f, const std::vector<IndexRange>& cells, double r);

struct ReconstructionReport {
    GridFunction direct;
    GridFunction decomposed;  // sum over partition entries
    GridFunction residual;    // collisions at depth m_max
    double max_rel_err = 0.0;
    std::size_t entries = 0;
    std::size_t residual_pairs = 0;
};

// pivot (1-based, in [1, n-1]) names the slot whose cumulative mass drives the
// martingale; the ordering constraint between slots pivot and pivot+1 is split.
ReconstructionReport decompose_reconstruct(const std::vector<GridFunction>& fs, const SignVector& eps, std::size_t pivot,
                                           double p_prime, int m_max = -1);

// First Wiener slot (1-based), falling back to 1; clamped to [1, n-1].
std::size_t default_pivot(const std::vector<bool>& wiener_slots);

// max|a - b| / max|b| over the samples (absolute when b vanishes).
double max_rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace oscint
