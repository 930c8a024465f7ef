#include "skorohod/linear_process.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace skorohod {
namespace {

constexpr double ratio_slack = 1e-12;
constexpr int max_order = 1'000'000;

// sum_{k >= N} k^-s for s > 1, N >= 1.
double hurwitz_tail(double s, std::int64_t N)
{
    std::int64_t const M = std::max<std::int64_t>(N, 64);
    double sum = 0.0;
    for (std::int64_t k = N; k < M; ++k)
    {
        sum += std::pow(static_cast<double>(k), -s);
    }
    double m = static_cast<double>(M);
    double em = std::pow(m, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(m, -s)
                + s / 12.0 * std::pow(m, -s - 1.0)
                - s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(m, -s - 3.0)
                + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0
                      * std::pow(m, -s - 5.0);
    return sum + em;
}

void check_truncation(std::optional<int> q)
{
    if (q && *q < 1)
    {
        throw CoefficientError("coefficients: truncation order must be >= 1");
    }
}

}  // namespace

CoefficientSpec CoefficientSpec::explicit_list(std::vector<double> values,
                                               std::optional<int> truncation)
{
    if (values.empty())
    {
        throw CoefficientError("coefficients: explicit list is empty");
    }
    for (double v : values)
    {
        if (!std::isfinite(v))
        {
            throw CoefficientError("coefficients: explicit list has a non-finite value");
        }
    }
    check_truncation(truncation);
    CoefficientSpec spec;
    spec.kind_ = Kind::explicit_list;
    spec.values_ = std::move(values);
    spec.truncation_ = truncation;
    return spec;
}

CoefficientSpec CoefficientSpec::geometric(double c, double rho, std::optional<int> truncation)
{
    if (!std::isfinite(c) || !(std::abs(rho) < 1.0))
    {
        throw CoefficientError("coefficients: geometric family needs finite c and |rho| < 1");
    }
    check_truncation(truncation);
    CoefficientSpec spec;
    spec.kind_ = Kind::geometric;
    spec.c_ = c;
    spec.rho_ = rho;
    spec.truncation_ = truncation;
    return spec;
}

CoefficientSpec CoefficientSpec::polynomial(double c, double s, std::optional<int> truncation)
{
    if (!std::isfinite(c) || !(s > 1.0) || !std::isfinite(s))
    {
        throw CoefficientError("coefficients: polynomial family needs finite c and s > 1");
    }
    check_truncation(truncation);
    CoefficientSpec spec;
    spec.kind_ = Kind::polynomial;
    spec.c_ = c;
    spec.s_ = s;
    spec.truncation_ = truncation;
    return spec;
}

double CoefficientSpec::operator[](std::int64_t j) const
{
    if (j < 0)
    {
        return 0.0;
    }
    switch (kind_)
    {
        case Kind::explicit_list:
            return j < static_cast<std::int64_t>(values_.size()) ? values_[static_cast<std::size_t>(j)]
                                                                 : 0.0;
        case Kind::geometric:
            return c_ * std::pow(rho_, static_cast<double>(j));
        case Kind::polynomial:
            return c_ * std::pow(static_cast<double>(j + 1), -s_);
    }
    return 0.0;
}

double CoefficientSpec::tail_sum(std::int64_t q) const
{
    q = std::max<std::int64_t>(q, 0);
    switch (kind_)
    {
        case Kind::explicit_list: {
            double sum = 0.0;
            for (auto j = static_cast<std::size_t>(q); j < values_.size(); ++j)
            {
                sum += values_[j];
            }
            return sum;
        }
        case Kind::geometric:
            return c_ * std::pow(rho_, static_cast<double>(q)) / (1.0 - rho_);
        case Kind::polynomial:
            return c_ * hurwitz_tail(s_, q + 1);
    }
    return 0.0;
}

double CoefficientSpec::tail_abs_sum(std::int64_t q) const
{
    q = std::max<std::int64_t>(q, 0);
    switch (kind_)
    {
        case Kind::explicit_list: {
            double sum = 0.0;
            for (auto j = static_cast<std::size_t>(q); j < values_.size(); ++j)
            {
                sum += std::abs(values_[j]);
            }
            return sum;
        }
        case Kind::geometric:
            return std::abs(c_) * std::pow(std::abs(rho_), static_cast<double>(q))
                   / (1.0 - std::abs(rho_));
        case Kind::polynomial:
            return std::abs(c_) * hurwitz_tail(s_, q + 1);
    }
    return 0.0;
}

nlohmann::json to_json(CoefficientSpec const& spec)
{
    nlohmann::json j;
    switch (spec.kind())
    {
        case CoefficientSpec::Kind::explicit_list:
            j["kind"] = "explicit";
            j["values"] = std::vector<double>(spec.values().begin(), spec.values().end());
            break;
        case CoefficientSpec::Kind::geometric:
            j["kind"] = "geometric";
            j["c"] = spec.c();
            j["rho"] = spec.rho();
            break;
        case CoefficientSpec::Kind::polynomial:
            j["kind"] = "polynomial";
            j["c"] = spec.c();
            j["s"] = spec.s();
            break;
    }
    if (spec.truncation())
    {
        j["truncation"] = *spec.truncation();
    }
    return j;
}

CoefficientSpec coefficients_from_json(nlohmann::json const& j)
{
    if (!j.is_object())
    {
        throw ParseError("coefficients must be an object with a 'kind' field");
    }
    auto kind_it = j.find("kind");
    if (kind_it == j.end() || !kind_it->is_string())
    {
        throw ParseError("coefficients field 'kind' missing or not a string");
    }
    auto number = [&j](char const* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_number())
        {
            throw ParseError(std::string("coefficients field '") + key + "' missing or not a number");
        }
        return it->get<double>();
    };
    std::optional<int> truncation;
    if (auto it = j.find("truncation"); it != j.end())
    {
        if (!it->is_number_integer())
        {
            throw ParseError("coefficients field 'truncation' is not an integer");
        }
        truncation = it->get<int>();
    }

    auto const kind = kind_it->get<std::string>();
    if (kind == "explicit")
    {
        auto it = j.find("values");
        if (it == j.end() || !it->is_array() || it->empty())
        {
            throw ParseError("coefficients field 'values' missing or not a nonempty array");
        }
        std::vector<double> values;
        for (auto const& v : *it)
        {
            if (!v.is_number())
            {
                throw ParseError("coefficients field 'values' has a non-numeric entry");
            }
            values.push_back(v.get<double>());
        }
        return CoefficientSpec::explicit_list(std::move(values), truncation);
    }
    if (kind == "geometric")
    {
        return CoefficientSpec::geometric(number("c"), number("rho"), truncation);
    }
    if (kind == "polynomial")
    {
        return CoefficientSpec::polynomial(number("c"), number("s"), truncation);
    }
    throw ParseError("coefficients field 'kind' must be explicit, geometric or polynomial");
}

nlohmann::json to_json(CoefficientReport const& r)
{
    nlohmann::json j{{"beta", r.beta},
                     {"phi_plus", r.phi_plus},
                     {"phi_minus", r.phi_minus},
                     {"gamma", r.gamma},
                     {"lambda_guard", r.lambda_guard},
                     {"nu_scale", r.nu_scale},
                     {"ratio_condition_ok", r.ratio_condition_ok},
                     {"extremal_positivity_ok", r.extremal_positivity_ok},
                     {"beta_positive_ok", r.beta_positive_ok},
                     {"order", r.order}};
    if (r.ratio_violation)
    {
        j["ratio_violation_at"] = *r.ratio_violation;
    }
    return j;
}

int default_truncation(CoefficientSpec const& spec, double lambda_guard)
{
    if (spec.kind() == CoefficientSpec::Kind::explicit_list)
    {
        return static_cast<int>(spec.values().size()) - 1;
    }
    for (int q = 1; q <= max_order; ++q)
    {
        if (spec.tail_abs_sum(q) < lambda_guard)
        {
            return q;
        }
    }
    throw CoefficientError("coefficients: no truncation order up to 10^6 meets the tail guard");
}

CoefficientReport validate_coefficients(CoefficientSpec const& spec, TailModel const& model)
{
    CoefficientReport rep;
    rep.beta = spec.tail_sum(0);
    if (!(rep.beta > 0.0))
    {
        throw CoefficientError(
            "coefficients: beta = sum of phi_j must be positive (beta <= 0 is not supported)");
    }
    rep.beta_positive_ok = true;

    if (spec.kind() == CoefficientSpec::Kind::explicit_list)
    {
        for (double v : spec.values())
        {
            rep.phi_plus = std::max(rep.phi_plus, v);
            rep.phi_minus = std::max(rep.phi_minus, -v);
        }
    }
    else
    {
        // Both families decay in modulus, so the first two terms carry the extremes.
        for (int j = 0; j < 2; ++j)
        {
            rep.phi_plus = std::max(rep.phi_plus, spec[j]);
            rep.phi_minus = std::max(rep.phi_minus, -spec[j]);
        }
    }
    rep.gamma = std::max(rep.phi_plus, rep.phi_minus);
    rep.lambda_guard = rep.phi_plus > 0.0 && rep.phi_minus > 0.0
                           ? std::min(rep.phi_plus, rep.phi_minus)
                           : rep.gamma;
    rep.nu_scale = std::pow(rep.phi_plus, model.alpha()) * model.p()
                   + std::pow(rep.phi_minus, model.alpha()) * model.r();
    rep.extremal_positivity_ok = rep.phi_plus * model.p() + rep.phi_minus * model.r() > 0.0;

    if (spec.kind() == CoefficientSpec::Kind::explicit_list)
    {
        int const length = static_cast<int>(spec.values().size());
        rep.order = spec.truncation() && *spec.truncation() < length ? *spec.truncation()
                                                                      : length - 1;
    }
    else
    {
        rep.order = spec.truncation() ? *spec.truncation()
                                      : default_truncation(spec, rep.lambda_guard);
    }

    std::int64_t const checked = spec.kind() == CoefficientSpec::Kind::explicit_list
                                     ? static_cast<std::int64_t>(spec.values().size()) - 1
                                     : rep.order;
    double partial = 0.0;
    for (std::int64_t s = 0; s <= checked; ++s)
    {
        partial += spec[s];
        double ratio = partial / rep.beta;
        rep.ratios.push_back(ratio);
        if (!rep.ratio_violation && (ratio < -ratio_slack || ratio > 1.0 + ratio_slack))
        {
            rep.ratio_violation = s;
        }
    }
    if (!rep.ratio_violation)
    {
        // Beyond the checked range the ratio is 1 - tail_sum(s+1)/beta.
        if (spec.kind() == CoefficientSpec::Kind::geometric && spec.rho() < 0.0)
        {
            std::int64_t s = checked + 1;
            if ((s + 1) % 2 == 0)
            {
                ++s;
            }
            rep.ratio_violation = s;
        }
    }
    rep.ratio_condition_ok = !rep.ratio_violation.has_value();
    return rep;
}

void require_admissible(CoefficientReport const& report)
{
    if (!report.beta_positive_ok)
    {
        throw CoefficientError("coefficients: beta must be positive");
    }
    if (!report.ratio_condition_ok)
    {
        std::ostringstream os;
        os << "coefficients violate the partial-sum ratio condition "
              "0 <= (phi_0 + ... + phi_s) / beta <= 1 for every s >= 0; it fails at s = "
           << *report.ratio_violation;
        throw CoefficientError(os.str());
    }
    if (!report.extremal_positivity_ok)
    {
        throw CoefficientError(
            "coefficients and tail model violate phi_plus p + phi_minus r > 0; the extremal limit "
            "is degenerate");
    }
}

std::vector<double> truncate_coefficients(CoefficientSpec const& spec, int q, double lambda_guard)
{
    if (q < 1)
    {
        throw CoefficientError("truncation order must be >= 1");
    }
    if (!(spec.tail_abs_sum(q) < lambda_guard))
    {
        std::ostringstream os;
        os << "truncation order " << q << " leaves absolute tail " << spec.tail_abs_sum(q)
           << " not below the guard " << lambda_guard;
        throw CoefficientError(os.str());
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(q) + 1);
    for (int j = 0; j < q; ++j)
    {
        out.push_back(spec[j]);
    }
    out.push_back(spec.tail_sum(q));
    return out;
}

std::vector<double> filter_coefficients(CoefficientSpec const& spec, CoefficientReport const& report)
{
    if (spec.kind() == CoefficientSpec::Kind::explicit_list
        && report.order + 1 == static_cast<int>(spec.values().size()))
    {
        return {spec.values().begin(), spec.values().end()};
    }
    return truncate_coefficients(spec, report.order, report.lambda_guard);
}

//---------------------------------------------------------------------------//
Innovations simulate_innovations(TailModel const& model, std::int64_t n, int prewindow,
                                 std::uint64_t seed)
{
    if (n < 0 || prewindow < 0)
    {
        throw std::invalid_argument("simulate_innovations: n and prewindow must be nonnegative");
    }
    Rng rng(seed);
    Innovations z;
    z.prewindow = prewindow;
    z.values.resize(static_cast<std::size_t>(n + prewindow));
    for (auto& v : z.values)
    {
        v = sample_innovation(model, rng);
    }
    return z;
}

std::vector<double> moving_average(Innovations const& z, std::span<double const> coeffs)
{
    if (coeffs.empty())
    {
        throw std::invalid_argument("moving_average: empty filter");
    }
    auto const q = static_cast<std::int64_t>(coeffs.size()) - 1;
    if (z.prewindow < q)
    {
        throw std::invalid_argument("moving_average: prewindow shorter than the filter order");
    }
    std::int64_t const n = z.n();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::int64_t i = 1; i <= n; ++i)
    {
        double acc = 0.0;
        for (std::int64_t j = 0; j <= q; ++j)
        {
            acc += coeffs[static_cast<std::size_t>(j)] * z.at(i - j);
        }
        x[static_cast<std::size_t>(i - 1)] = acc;
    }
    return x;
}

namespace {

std::vector<double> unit_grid(std::size_t n)
{
    std::vector<double> t(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
    {
        t[k] = static_cast<double>(k) / static_cast<double>(n);
    }
    return t;
}

CadlagPath step_from_levels(std::vector<double> const& levels)
{
    // levels[k] is the value on [k/n, (k+1)/n); levels[0] = 0.
    std::size_t const n = levels.size() - 1;
    if (n == 0)
    {
        return CadlagPath::constant(levels[0]);
    }
    std::vector<double> left(n + 1);
    left[0] = levels[0];
    for (std::size_t k = 1; k <= n; ++k)
    {
        left[k] = levels[k - 1];
    }
    return CadlagPath(unit_grid(n), std::move(left), levels);
}

}  // namespace

CadlagPath partial_sum_path(std::span<double const> x, double a_n, double b_n)
{
    if (!(a_n > 0.0))
    {
        throw std::invalid_argument("partial_sum_path: a_n must be positive");
    }
    std::vector<double> levels(x.size() + 1, 0.0);
    double sum = 0.0;
    for (std::size_t k = 1; k <= x.size(); ++k)
    {
        sum += x[k - 1];
        levels[k] = (sum - static_cast<double>(k) * b_n) / a_n;
    }
    return step_from_levels(levels);
}

CadlagPath partial_max_path(std::span<double const> x, double a_n)
{
    if (!(a_n > 0.0))
    {
        throw std::invalid_argument("partial_max_path: a_n must be positive");
    }
    std::vector<double> levels(x.size() + 1, 0.0);
    double m = 0.0;
    for (std::size_t k = 1; k <= x.size(); ++k)
    {
        m = std::max(m, x[k - 1]);
        levels[k] = m / a_n;
    }
    return step_from_levels(levels);
}

PathPair reference_paths(std::span<double const> z, CoefficientReport const& report, double a_n,
                         double b_n)
{
    std::vector<double> scaled(z.size());
    std::vector<double> weighted(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
    {
        scaled[i] = report.beta * z[i];
        weighted[i] = z[i] > 0.0 ? report.phi_plus * z[i]
                      : z[i] < 0.0 ? report.phi_minus * -z[i]
                                   : 0.0;
    }
    return {partial_sum_path(scaled, a_n, b_n), partial_max_path(weighted, a_n)};
}

CoupledPaths coupled_paths(Innovations const& z, std::span<double const> coeffs,
                           CoefficientReport const& report, TailModel const& model)
{
    std::int64_t const n = z.n();
    double const a_n = norming_a_n(model, std::max<std::int64_t>(n, 1));
    double const b_n = centering_b_n(model, report.beta);
    auto x = moving_average(z, coeffs);
    return {{partial_sum_path(x, a_n, b_n), partial_max_path(x, a_n)},
            reference_paths(z.observed(), report, a_n, b_n)};
}

void write_indexed_csv(std::ostream& os, std::span<double const> values, std::int64_t first_index)
{
    auto const old_precision = os.precision(17);
    os << "index,value\n";
    for (std::size_t k = 0; k < values.size(); ++k)
    {
        os << first_index + static_cast<std::int64_t>(k) << ',' << values[k] << '\n';
    }
    os.precision(old_precision);
}

}  // namespace skorohod
