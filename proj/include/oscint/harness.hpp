#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "oscint/witnesses.hpp"

namespace oscint {

using Samples = std::vector<std::pair<double, double>>;  // (N, value)

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

// log value against log N.
FitResult fit_power_law(const Samples& s);
// value against log N.
FitResult fit_log_growth(const Samples& s);

enum class Verdict { Bounded, Growing, Inconclusive };
const char* verdict_name(Verdict v);

struct Thresholds {
    double bounded_slope = 0.05;  // log-log
    double growth_slope = 0.15;   // semilog
    double band = 10.0;           // max/min over the schedule
    double min_r2 = 0.9;
};

double band_ratio(const Samples& s);
// Bounded when the log-log slope and the band are both small, Growing on a clean
// positive semilog trend, Inconclusive otherwise.
Verdict classify(const Samples& s, const Thresholds& t = {});

// How a report turns its rows into PASS/FAIL. Every protocol reads only the
// ratio column, so the verdict can be recomputed from the CSV.
enum class Protocol {
    Rate,         // log-log slope within tol of expected, R^2 >= min_r2
    Growth,       // semilog slope >= growth_slope (expected: lower bound), R^2 >= min_r2
    Bounded,      // log-log slope <= bounded_slope and band <= band
    Convergence,  // last ratio <= tol and ratios nonincreasing
    Ceiling,      // every ratio <= tol
    Stability     // every ratio within tol (relative) of the first row
};
const char* protocol_name(Protocol p);
Protocol parse_protocol(const std::string& s);

struct GridParams {
    std::size_t M = 0;
    double xi_max = 0.0;
    std::size_t x_points = 0;
    double x_max = 0.0;
};

struct ExperimentConfig {
    std::string kind;
    std::string variant;             // kind-specific, e.g. "Lq[Wp]"
    std::vector<double> exponents;   // p_1, ..., p_n (and q where the kind uses one)
    std::vector<double> N_schedule;  // strictly increasing
    GridParams grid;
    std::vector<WitnessSpec> witnesses;
    std::uint64_t seed = 20240601;
    std::size_t seeds = 1;
    Protocol protocol = Protocol::Rate;
    double expected = 0.0;
    double tol = 0.05;
    Thresholds thresholds;
    std::string output;
};

void validate(const ExperimentConfig& c);

struct ReportRow {
    std::string kind;
    double N = 0.0;
    std::uint64_t seed = 0;
    double value = 0.0;
    double normalizer = 1.0;
    double ratio = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ReportRow> rows;
    FitResult fit;        // log-log for Rate/Bounded, semilog for Growth
    std::string axes;     // "loglog", "semilog" or "none"
    double band = 0.0;
    Verdict classification = Verdict::Inconclusive;
    bool pass = false;
    std::string detail;
    double wall_seconds = 0.0;  // console only, never written to the CSV
};

// Recomputes fit, band, classification and pass from rows + config.
void finalize(ExperimentReport& r);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

void write_csv(const ExperimentReport& r, std::ostream& os);
// Rows and footer parsed back (the config fields needed by finalize come from the footer).
ExperimentReport read_csv(std::istream& is);

// Calibrated configurations per catalog kind; several variants where the kind
// has more than one exponent tuple.
std::vector<ExperimentConfig> default_configs(const std::string& kind);
std::vector<std::string> catalog_kinds();

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& c);

// ---- invariant measurements shared by the CLI and the acceptance suite ----

struct OracleStats {
    double max_rel_err = 0.0;
    std::size_t cases = 0;
    double seconds = 0.0;
};
// dp_ordered vs brute_ordered, n in {2, 3}, M in {8, 12, 16}, random spectra, sign
// patterns cycled per seed.
OracleStats measure_oracle_equivalence(std::size_t seeds, std::uint64_t root = 1);

struct TilingStats {
    std::size_t vectors = 0;
    std::size_t failures = 0;          // pairs not covered exactly once at the default depth
    std::size_t residual_nonempty = 0; // vectors with residual pairs at the resolving depth
    double seconds = 0.0;
};
TilingStats measure_tiling(std::size_t vectors, std::size_t max_M, std::uint64_t root = 2);

struct DecompositionStats {
    double max_rel_err = 0.0;
    std::size_t seeds = 0;
    std::size_t max_residual_pairs = 0;
    double seconds = 0.0;
};
DecompositionStats measure_decomposition(std::size_t seeds, std::size_t M, std::uint64_t root = 3);

struct ClosedFormStats {
    std::vector<std::size_t> M;
    std::vector<double> max_rel_err;  // over |x| in [0.25, 4]
};
ClosedFormStats measure_closed_form(const std::vector<std::size_t>& Ms);

struct AknsStats {
    double zero_potential_err = 0.0;
    double constant_potential_err = 0.0;  // lambda = 0: x1 x2
    double exponential_err = 0.0;         // alpha = (1, 1): separable closed form
    double residual = 0.0;                // worst self-consistency residual in the saturation runs
    double max_saturation = 0.0;
    std::vector<double> saturation;       // per lambda pair: sup_full / sup_half
    std::vector<double> sup_full, sup_half;
    double seconds = 0.0;
};
AknsStats measure_akns(std::size_t lambda_pairs = 16, std::size_t nodes = 1601, double x_max = 8.0,
                       std::uint64_t root = 5);

// ||(sum_j |P f_j|^2)^{1/2}||_q / ||(sum_j |f_j|^2)^{1/2}||_p with P the band
// projection onto `band` (the whole lattice gives the identity).
double vector_valued_ratio(const std::vector<GridFunction>& fs, const IndexRange& band, double p, double q);

// |double integral of exp(-4 pi i s t) / (s t)| over [-a, a]^2, a = N/10, reduced to
// 4 * int_0^{4 pi a^2} Si(u)/u du.
double fefferman_value(double N);

}  // namespace oscint
