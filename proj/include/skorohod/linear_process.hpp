#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skorohod/cadlag_path.hpp"
#include "skorohod/tail_model.hpp"

namespace skorohod {

/// Rejected coefficient input (malformed, beta <= 0, or failing a
/// hypothesis when admissibility is required).
class CoefficientError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//---------------------------------------------------------------------------//
/*!
 * One-sided filter coefficients phi_0, phi_1, ...
 *
 * Either an explicit finite list or a parametric family: geometric
 * phi_j = c rho^j (|rho| < 1) or polynomial phi_j = c (j+1)^-s (s > 1). An
 * optional truncation order overrides the default choice for families.
 */
class CoefficientSpec
{
  public:
    enum class Kind
    {
        explicit_list,
        geometric,
        polynomial
    };

    static CoefficientSpec explicit_list(std::vector<double> values,
                                         std::optional<int> truncation = {});
    static CoefficientSpec geometric(double c, double rho, std::optional<int> truncation = {});
    static CoefficientSpec polynomial(double c, double s, std::optional<int> truncation = {});

    Kind kind() const { return kind_; }
    std::optional<int> truncation() const { return truncation_; }
    std::span<double const> values() const { return values_; }
    double c() const { return c_; }
    double rho() const { return rho_; }
    double s() const { return s_; }

    double operator[](std::int64_t j) const;

    /// Sum of phi_i over i >= q, and of |phi_i|.
    double tail_sum(std::int64_t q) const;
    double tail_abs_sum(std::int64_t q) const;

  private:
    CoefficientSpec() = default;

    Kind kind_ = Kind::explicit_list;
    std::vector<double> values_;
    double c_ = 0.0;
    double rho_ = 0.0;
    double s_ = 0.0;
    std::optional<int> truncation_;
};

nlohmann::json to_json(CoefficientSpec const& spec);
CoefficientSpec coefficients_from_json(nlohmann::json const& j);

struct CoefficientReport
{
    double beta = 0.0;
    double phi_plus = 0.0;
    double phi_minus = 0.0;
    double gamma = 0.0;
    double lambda_guard = 0.0;
    /// phi_+^alpha p + phi_-^alpha r
    double nu_scale = 0.0;
    /// Partial-sum ratios for s = 0 .. order checked explicitly.
    std::vector<double> ratios;
    /// First s at which a ratio leaves [0, 1], if any.
    std::optional<std::int64_t> ratio_violation;
    bool ratio_condition_ok = false;
    bool extremal_positivity_ok = false;
    bool beta_positive_ok = false;
    /// Filter order q used for simulation (the prewindow length).
    int order = 0;

    bool admissible() const
    {
        return ratio_condition_ok && extremal_positivity_ok && beta_positive_ok;
    }
};

nlohmann::json to_json(CoefficientReport const& r);

/// Computes beta, phi_+-, gamma, the tail guard and all hypothesis flags.
/// Throws CoefficientError when beta <= 0.
CoefficientReport validate_coefficients(CoefficientSpec const& spec, TailModel const& model);

/// Throws CoefficientError describing the first failed hypothesis.
void require_admissible(CoefficientReport const& report);

/// Smallest q >= 1 whose absolute tail sum is below the guard; explicit lists
/// report their own filter order instead.
int default_truncation(CoefficientSpec const& spec, double lambda_guard);

/// (phi_0, ..., phi_{q-1}, sum_{i>=q} phi_i). Throws CoefficientError when the
/// absolute tail from q is not below `lambda_guard`, or q < 1.
std::vector<double> truncate_coefficients(CoefficientSpec const& spec, int q, double lambda_guard);

/// Coefficients actually used to simulate the process for this spec.
std::vector<double> filter_coefficients(CoefficientSpec const& spec, CoefficientReport const& report);

//---------------------------------------------------------------------------//
/// Innovations Z_{1-prewindow}, ..., Z_n stored contiguously.
struct Innovations
{
    std::vector<double> values;
    int prewindow = 0;

    std::int64_t n() const { return static_cast<std::int64_t>(values.size()) - prewindow; }
    double at(std::int64_t i) const { return values[static_cast<std::size_t>(i - 1 + prewindow)]; }
    /// Z_1, ..., Z_n.
    std::span<double const> observed() const
    {
        return std::span<double const>(values).subspan(static_cast<std::size_t>(prewindow));
    }
};

Innovations simulate_innovations(TailModel const& model, std::int64_t n, int prewindow,
                                 std::uint64_t seed);

/// X_i = sum_j c_j Z_{i-j} for i = 1..n. Throws std::invalid_argument if the
/// prewindow is shorter than the filter order.
std::vector<double> moving_average(Innovations const& z, std::span<double const> coeffs);

/// V_n: step path with value (sum_{i<=k} X_i - k b_n) / a_n on [k/n, (k+1)/n).
CadlagPath partial_sum_path(std::span<double const> x, double a_n, double b_n);

/// W_n: step path 0 v max_{i<=k} X_i / a_n on [k/n, (k+1)/n), 0 before 1/n.
CadlagPath partial_max_path(std::span<double const> x, double a_n);

/// (V_n^Z, W_n^Z) built from Z_1..Z_n.
PathPair reference_paths(std::span<double const> z, CoefficientReport const& report, double a_n,
                         double b_n);

/// L_n and L_n^Z from one innovation stream.
struct CoupledPaths
{
    PathPair process;
    PathPair reference;
};

CoupledPaths coupled_paths(Innovations const& z, std::span<double const> coeffs,
                           CoefficientReport const& report, TailModel const& model);

/// Writes "index,value" rows with indices first_index, first_index + 1, ...
void write_indexed_csv(std::ostream& os, std::span<double const> values, std::int64_t first_index);

}  // namespace skorohod
