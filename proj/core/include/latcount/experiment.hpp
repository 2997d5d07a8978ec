#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latcount/enumerate.hpp"

// Batch experiment harness: count-vs-volume sweeps, exponent fitting,
// angular equidistribution histograms, congruence uniformity tables, the
// comparison-lemma sandwich probe, and deterministic CSV/JSON output.

namespace latcount {

inline constexpr const char* kVersion = "0.1.0";

struct DegenerateFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitResult {
    double slope = 0;       // of log|relative_error| against log volume
    double intercept = 0;
    double r_squared = 0;
    double envelope_C = 0;  // max |relative_error| * volume^target over samples
    double envelope_last_quartile = 0;
    double target_exponent = 0;
    int used_points = 0;
    int excluded_zero_errors = 0;  // exact zeros are excluded from the log fit
    bool pass = false;  // envelope finite and last-quartile <= 2x full envelope
};

// records must be ordered by increasing parameter; needs >= 8 records.
FitResult fit_exponent(std::span<const CountRecord> records, double target_exponent);

// Flat key = value configuration with '#' comments; unknown keys are errors.
// Every field has the documented default below.
struct ExperimentConfig {
    std::string experiment = "sweep";
    std::string domain = "norm-ball";   // norm-ball | hyperbolic-ball | sector | bisector
    std::vector<double> grid{200, 250, 300, 350, 400, 450, 500, 550, 600, 650};
    int64_t modulus = 1;
    std::array<int64_t, 4> coset{1, 0, 0, 1};
    std::vector<int64_t> moduli{2, 3, 4, 5};
    uint64_t seed = 0;
    int workers = 1;
    double eta = 0.02;          // exponent slack added before pass/fail bounds
    double delta = 1e-9;        // regularity cutoff
    int bins1 = 4, bins2 = 8;
    double arc1_lo = 0, arc1_hi = kPi;
    double arc2_lo = 0, arc2_hi = kTwoPi;
    uint64_t samples = 1'000'000;
    double eps = 0.05;
    std::vector<double> eps_grid{0.08, 0.04, 0.02, 0.01};
    double p_exp = 4.5;
    int64_t prime_bound = 100'000;
    double target_exponent = 1.0 / 6.0;
    double radius = 0;          // explicit R (Frobenius bound) where applicable
    double t0 = 50;             // parameters below it are labeled pre-asymptotic
    bool sharp_spectrum = false;
    std::string out;            // empty = stdout
    std::string format = "csv"; // csv | json

    std::string canonical_text() const;  // sorted key = value lines
    std::string config_hash() const;     // FNV-1a of canonical_text + normalization id
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

DomainSpec domain_from_config(const ExperimentConfig& cfg, double param);

// One CountRecord per grid point, in grid order; exact and deterministic.
// The streaming form hands each record over as soon as it is computed, so a
// caller writing to disk keeps the completed prefix on abort.
void sweep_stream(const ExperimentConfig& cfg,
                  const std::function<void(const CountRecord&)>& emit);
std::vector<CountRecord> sweep(const ExperimentConfig& cfg);

struct AngularReport {
    int bins1 = 1, bins2 = 1;
    std::vector<uint64_t> cells;  // row-major bins1 x bins2
    uint64_t total = 0;           // regular points
    uint64_t singular = 0;
    double discrepancy = 0;       // max_j |col_j/total - 1/bins2|
    double product_residual = 0;  // max_ij |cell_ij/total - row_i col_j / total^2|

    uint64_t row(int i) const;
    uint64_t col(int j) const;
};

AngularReport angular_report(double t, int bins1, int bins2,
                             const std::optional<CongruenceSpec>& congruence = std::nullopt,
                             double delta = 1e-9);

struct UniformityRow {
    int64_t modulus = 1;
    std::array<int64_t, 4> coset{1, 0, 0, 1};
    uint64_t count = 0;
    double normalized_error = 0;  // |count * index * covol / volume - 1|
};

struct UniformityReport {
    int64_t R = 0;
    std::vector<UniformityRow> rows;
    std::map<int64_t, uint64_t> index_of;     // N -> [Gamma : Gamma(N)]
    std::map<int64_t, double> max_error_of;   // N -> max over cosets
    double spread = 0;                        // max_N - min_N of the above
};

UniformityReport uniformity_report(std::span<const int64_t> moduli, int64_t R);

struct SandwichResult {
    uint64_t count = 0;
    double lower = 0, upper = 0;
    double sigma_lower = 0, sigma_upper = 0;
    bool holds(double k_sigma = 3.0) const {
        return lower - k_sigma * sigma_lower <= static_cast<double>(count) &&
               static_cast<double>(count) <= upper + k_sigma * sigma_upper;
    }
};

// Monte Carlo estimates of the comparison-lemma integrals at h = e over
// certified radial envelopes of B+-(eps), bracketing the exact count.
SandwichResult sandwich_probe(int64_t R, double eps, uint64_t samples, uint64_t seed);

// Periodized bump at h: sum over lattice gamma of chi_eps(h gamma), with
// chi_eps the normalized indicator of O_eps.  Zero when h is far from the
// inverse lattice orbit of the support.
double phi_eps(const Mat2& h, double eps);

struct OutputMeta {
    std::string version = kVersion;
    std::string config_hash;
    std::string normalization;
    uint64_t seed = 0;
};

void write_csv_preamble(std::ostream& os, const OutputMeta& meta);
void write_csv_row(std::ostream& os, const CountRecord& row);
void write_csv(std::ostream& os, const OutputMeta& meta, std::span<const CountRecord> rows);
void write_json(std::ostream& os, const OutputMeta& meta, std::span<const CountRecord> rows);

struct ParsedRecords {
    OutputMeta meta;
    std::vector<CountRecord> rows;
};
// Reads sweep CSV back (meta from the comment preamble).  Mixing files with
// different normalization ids is rejected.
ParsedRecords read_csv(std::istream& is);

}  // namespace latcount
