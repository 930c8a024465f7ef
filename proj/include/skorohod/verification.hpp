#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "skorohod/cadlag_path.hpp"
#include "skorohod/linear_process.hpp"
#include "skorohod/tail_model.hpp"

namespace skorohod {

/// One-sample Kolmogorov-Smirnov statistic. Throws on empty input.
double ks_statistic(std::span<double const> samples, std::function<double(double)> const& cdf);

/// (1/m) sum exp(i z s). Throws on empty input.
std::complex<double> empirical_char(std::span<double const> samples, double z);

/// Type-7 (linear interpolation) sample quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Runs body(i) for i in [0, count) on up to `workers` threads. Results must
/// be stored by index; order of execution is unspecified.
void parallel_for(std::size_t count, unsigned workers, std::function<void(std::size_t)> const& body);

//---------------------------------------------------------------------------//
struct ProximitySettings
{
    std::vector<std::int64_t> sample_sizes{100, 1000, 10000};
    int replications = 200;
    /// Required median(n_last) / median(n_first) upper bound.
    double max_median_ratio = 0.5;
    /// Also evaluate d_m1_star on the max coordinate.
    bool m1_star = true;
};

struct MarginalSettings
{
    std::vector<std::int64_t> sample_sizes{10000};
    int replications = 5000;
    std::vector<double> char_z{0.5, 1.0, 2.0};
    double max_ks = 0.03;
    double max_char = 0.05;
};

struct LimitSettings
{
    int draws = 10000;
    double u = 0.01;
    std::vector<double> char_z{0.5, 1.0};
    double max_ks = 0.02;
    double max_char = 0.05;
};

struct ExperimentConfig
{
    TailModel model{1.5, 0.7, 0.3};
    CoefficientSpec coefficients = CoefficientSpec::explicit_list({1.0, 0.5, 0.25});
    std::uint64_t seed = 20240601;
    double tol = 1e-6;
    unsigned workers = 0;
    std::optional<ProximitySettings> proximity;
    std::optional<MarginalSettings> marginal;
    std::optional<LimitSettings> limit;
};

/// Reads the "model", "coefficients", "seed", "tol" and "verify" members of a
/// run configuration. Absent sections are disabled.
ExperimentConfig experiment_config_from_json(nlohmann::json const& j);
nlohmann::json to_json(ExperimentConfig const& c);

struct ProximityRow
{
    std::int64_t n = 0;
    int replications = 0;
    double median_dp = 0.0;
    double q90_dp = 0.0;
    double median_sum = 0.0;
    double median_max = 0.0;
    double median_m1_star_max = 0.0;
    double max_dp = 0.0;
    /// d_m1_star equalled d_m2 on the max coordinate in every replication.
    bool m1_star_identity = true;
    std::vector<double> dp;
};

struct CharDiscrepancy
{
    double z = 0.0;
    std::complex<double> empirical;
    std::complex<double> target;
    double discrepancy = 0.0;
};

struct MarginalRow
{
    std::int64_t n = 0;
    int replications = 0;
    double ks = 0.0;
    std::vector<CharDiscrepancy> chars;
};

struct LimitRow
{
    int draws = 0;
    double u = 0.0;
    double ks = 0.0;
    std::vector<CharDiscrepancy> chars;
    double atom_mean = 0.0;
    double atom_expected = 0.0;
    double atom_se = 0.0;
    double truncation_variance = 0.0;
};

struct Check
{
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ConvergenceReport
{
    std::vector<ProximityRow> proximity;
    std::vector<MarginalRow> marginal;
    std::optional<LimitRow> limit;
    std::vector<Check> checks;

    bool passed() const;
};

nlohmann::json to_json(ConvergenceReport const& r);
/// One row per (section, n, statistic).
void write_report_csv(std::ostream& os, ConvergenceReport const& r);

/// Coupled L_n and L_n^Z per replication; d_p quantiles per n. Throws
/// CoefficientError when the coefficients are not admissible.
ConvergenceReport proximity_experiment(ExperimentConfig const& config);

/// KS of W_n(1) against the extremal law and characteristic-function error of
/// V_n(1) against exp(psi(beta z)).
ConvergenceReport marginal_experiment(ExperimentConfig const& config);

/// Same statistics for draws of the truncated limit pair, plus the atom-count
/// check.
ConvergenceReport limit_experiment(ExperimentConfig const& config);

/// All configured sections merged into one report.
ConvergenceReport run_experiments(ExperimentConfig const& config);

struct Lemma21Result
{
    bool passed = true;
    std::vector<double> distances;
    std::vector<double> bounds;
};

/// Checks d_p((A + y_n, B), (A + y_limit, B)) <= sup |y_n - y_limit| for each
/// y_n, up to a rounding allowance of 1e-12 (1 + path scale).
Lemma21Result lemma21_check(PathPair const& x, std::span<CadlagPath const> y_sequence,
                            CadlagPath const& y_limit, double tol);

}  // namespace skorohod
