#include "skorohod/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "skorohod/limit_process.hpp"
#include "skorohod/metrics.hpp"
#include "skorohod/random.hpp"

namespace skorohod {

double ks_statistic(std::span<double const> samples, std::function<double(double)> const& cdf)
{
    if (samples.empty())
    {
        throw std::invalid_argument("ks_statistic: no samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    double const m = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        double f = cdf(sorted[i]);
        d = std::max(d, static_cast<double>(i + 1) / m - f);
        d = std::max(d, f - static_cast<double>(i) / m);
    }
    return d;
}

std::complex<double> empirical_char(std::span<double const> samples, double z)
{
    if (samples.empty())
    {
        throw std::invalid_argument("empirical_char: no samples");
    }
    double re = 0.0;
    double im = 0.0;
    for (double s : samples)
    {
        re += std::cos(z * s);
        im += std::sin(z * s);
    }
    double const m = static_cast<double>(samples.size());
    return {re / m, im / m};
}

double quantile(std::vector<double> values, double q)
{
    if (values.empty())
    {
        throw std::invalid_argument("quantile: no values");
    }
    std::sort(values.begin(), values.end());
    double h = q * static_cast<double>(values.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

void parallel_for(std::size_t count, unsigned workers, std::function<void(std::size_t)> const& body)
{
    if (workers == 0)
    {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
        {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++)
        {
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
    {
        pool.emplace_back(run);
    }
    for (auto& t : pool)
    {
        t.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

//---------------------------------------------------------------------------//
namespace {

constexpr std::uint64_t proximity_tag = 1;
constexpr std::uint64_t marginal_tag = 2;
constexpr std::uint64_t limit_tag = 3;

template<class T>
T get_or(nlohmann::json const& j, char const* key, T fallback, char const* section)
{
    auto it = j.find(key);
    if (it == j.end())
    {
        return fallback;
    }
    try
    {
        return it->get<T>();
    }
    catch (nlohmann::json::exception const&)
    {
        throw ParseError(std::string(section) + " field '" + key + "' has the wrong type");
    }
}

void require_config(bool ok, std::string const& message)
{
    if (!ok)
    {
        throw ParseError(message);
    }
}

std::vector<std::int64_t> sizes_from(nlohmann::json const& j, std::vector<std::int64_t> fallback,
                                     char const* section)
{
    auto sizes = get_or(j, "sample_sizes", fallback, section);
    require_config(!sizes.empty(), std::string(section) + " field 'sample_sizes' is empty");
    for (std::size_t k = 0; k < sizes.size(); ++k)
    {
        require_config(sizes[k] > 0 && (k == 0 || sizes[k] > sizes[k - 1]),
                       std::string(section)
                           + " field 'sample_sizes' must be positive and strictly increasing");
    }
    return sizes;
}

CharDiscrepancy char_discrepancy(std::span<double const> samples, double z, LevyTriple const& triple,
                                 double beta)
{
    CharDiscrepancy c;
    c.z = z;
    c.empirical = empirical_char(samples, z);
    c.target = std::exp(levy_exponent(triple, beta * z));
    c.discrepancy = std::abs(c.empirical - c.target);
    return c;
}

std::function<double(double)> extremal_law(double nu_scale, double alpha)
{
    return [=](double x) { return x > 0.0 ? extremal_cdf(nu_scale, alpha, 1.0, x) : 0.0; };
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

nlohmann::json complex_json(std::complex<double> c)
{
    return {c.real(), c.imag()};
}

nlohmann::json chars_json(std::vector<CharDiscrepancy> const& chars)
{
    nlohmann::json out = nlohmann::json::array();
    for (auto const& c : chars)
    {
        out.push_back({{"z", c.z},
                       {"empirical", complex_json(c.empirical)},
                       {"target", complex_json(c.target)},
                       {"discrepancy", c.discrepancy}});
    }
    return out;
}

}  // namespace

ExperimentConfig experiment_config_from_json(nlohmann::json const& j)
{
    require_config(j.is_object(), "configuration must be a JSON object");
    ExperimentConfig c;
    if (auto it = j.find("model"); it != j.end())
    {
        c.model = tail_model_from_json(*it);
    }
    if (auto it = j.find("coefficients"); it != j.end())
    {
        c.coefficients = coefficients_from_json(*it);
    }
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed, "config");
    c.tol = get_or(j, "tol", c.tol, "config");
    require_config(c.tol > 0.0, "config field 'tol' must be positive");
    c.workers = get_or(j, "workers", c.workers, "config");

    auto v = j.find("verify");
    if (v == j.end())
    {
        return c;
    }
    require_config(v->is_object(), "config field 'verify' must be an object");
    if (auto it = v->find("proximity"); it != v->end())
    {
        ProximitySettings s;
        s.sample_sizes = sizes_from(*it, s.sample_sizes, "verify.proximity");
        s.replications = get_or(*it, "replications", s.replications, "verify.proximity");
        s.max_median_ratio = get_or(*it, "max_median_ratio", s.max_median_ratio, "verify.proximity");
        s.m1_star = get_or(*it, "m1_star", s.m1_star, "verify.proximity");
        require_config(s.replications >= 1, "verify.proximity field 'replications' must be >= 1");
        c.proximity = s;
    }
    if (auto it = v->find("marginal"); it != v->end())
    {
        MarginalSettings s;
        s.sample_sizes = sizes_from(*it, s.sample_sizes, "verify.marginal");
        s.replications = get_or(*it, "replications", s.replications, "verify.marginal");
        s.char_z = get_or(*it, "char_z", s.char_z, "verify.marginal");
        s.max_ks = get_or(*it, "max_ks", s.max_ks, "verify.marginal");
        s.max_char = get_or(*it, "max_char", s.max_char, "verify.marginal");
        require_config(s.replications >= 1, "verify.marginal field 'replications' must be >= 1");
        c.marginal = s;
    }
    if (auto it = v->find("limit"); it != v->end())
    {
        LimitSettings s;
        s.draws = get_or(*it, "draws", s.draws, "verify.limit");
        s.u = get_or(*it, "u", s.u, "verify.limit");
        s.char_z = get_or(*it, "char_z", s.char_z, "verify.limit");
        s.max_ks = get_or(*it, "max_ks", s.max_ks, "verify.limit");
        s.max_char = get_or(*it, "max_char", s.max_char, "verify.limit");
        require_config(s.draws >= 1, "verify.limit field 'draws' must be >= 1");
        require_config(s.u > 0.0 && s.u < 1.0, "verify.limit field 'u' must lie in (0, 1)");
        c.limit = s;
    }
    return c;
}

nlohmann::json to_json(ExperimentConfig const& c)
{
    nlohmann::json j{{"model", to_json(c.model)},
                     {"coefficients", to_json(c.coefficients)},
                     {"seed", c.seed},
                     {"tol", c.tol},
                     {"workers", c.workers}};
    nlohmann::json v = nlohmann::json::object();
    if (c.proximity)
    {
        v["proximity"] = {{"sample_sizes", c.proximity->sample_sizes},
                          {"replications", c.proximity->replications},
                          {"max_median_ratio", c.proximity->max_median_ratio},
                          {"m1_star", c.proximity->m1_star}};
    }
    if (c.marginal)
    {
        v["marginal"] = {{"sample_sizes", c.marginal->sample_sizes},
                         {"replications", c.marginal->replications},
                         {"char_z", c.marginal->char_z},
                         {"max_ks", c.marginal->max_ks},
                         {"max_char", c.marginal->max_char}};
    }
    if (c.limit)
    {
        v["limit"] = {{"draws", c.limit->draws},
                      {"u", c.limit->u},
                      {"char_z", c.limit->char_z},
                      {"max_ks", c.limit->max_ks},
                      {"max_char", c.limit->max_char}};
    }
    j["verify"] = v;
    return j;
}

bool ConvergenceReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](Check const& c) { return c.passed; });
}

//---------------------------------------------------------------------------//
ConvergenceReport proximity_experiment(ExperimentConfig const& config)
{
    ProximitySettings const settings = config.proximity.value_or(ProximitySettings{});
    auto const& model = config.model;
    auto const report = validate_coefficients(config.coefficients, model);
    require_admissible(report);
    auto const coeffs = filter_coefficients(config.coefficients, report);

    ConvergenceReport out;
    for (std::int64_t n : settings.sample_sizes)
    {
        auto const reps = static_cast<std::size_t>(settings.replications);
        std::vector<double> d_sum(reps), d_max(reps), d_m1(reps);
        std::vector<char> identity(reps, 1);
        parallel_for(reps, config.workers, [&](std::size_t r) {
            auto seed = derive_seed(config.seed, {proximity_tag, static_cast<std::uint64_t>(n), r});
            auto z = simulate_innovations(model, n, report.order, seed);
            auto paths = coupled_paths(z, coeffs, report, model);
            d_sum[r] = d_m2(paths.process.first, paths.reference.first, config.tol);
            d_max[r] = d_m2(paths.reference.second, paths.process.second, config.tol);
            if (settings.m1_star)
            {
                d_m1[r] = d_m1_star(paths.reference.second, paths.process.second, config.tol);
                identity[r] = d_m1[r] == d_max[r];
            }
        });

        ProximityRow row;
        row.n = n;
        row.replications = settings.replications;
        row.dp.resize(reps);
        for (std::size_t r = 0; r < reps; ++r)
        {
            row.dp[r] = std::max(d_sum[r], d_max[r]);
            row.m1_star_identity = row.m1_star_identity && identity[r];
        }
        row.median_dp = quantile(row.dp, 0.5);
        row.q90_dp = quantile(row.dp, 0.9);
        row.max_dp = *std::max_element(row.dp.begin(), row.dp.end());
        row.median_sum = quantile(d_sum, 0.5);
        row.median_max = quantile(d_max, 0.5);
        row.median_m1_star_max = settings.m1_star ? quantile(d_m1, 0.5) : 0.0;
        out.proximity.push_back(std::move(row));
    }

    auto const& rows = out.proximity;
    bool all_zero = std::all_of(rows.begin(), rows.end(),
                                [](ProximityRow const& r) { return r.max_dp == 0.0; });
    bool decreasing = true;
    for (std::size_t k = 1; k < rows.size(); ++k)
    {
        decreasing = decreasing && rows[k].median_dp < rows[k - 1].median_dp;
    }
    bool halved = rows.back().median_dp <= settings.max_median_ratio * rows.front().median_dp;
    std::ostringstream detail;
    detail << "medians:";
    for (auto const& r : rows)
    {
        detail << " n=" << r.n << ":" << fmt(r.median_dp);
    }
    if (all_zero)
    {
        out.checks.push_back({"proximity_medians", true, detail.str() + " (all distances zero)"});
    }
    else
    {
        out.checks.push_back({"proximity_medians", decreasing && halved, detail.str()});
    }
    if (settings.m1_star)
    {
        bool identity = std::all_of(rows.begin(), rows.end(),
                                    [](ProximityRow const& r) { return r.m1_star_identity; });
        out.checks.push_back({"m1_star_identity_max", identity,
                              "d_m1_star equals d_m2 on the max coordinate"});
    }
    return out;
}

ConvergenceReport marginal_experiment(ExperimentConfig const& config)
{
    MarginalSettings const settings = config.marginal.value_or(MarginalSettings{});
    auto const& model = config.model;
    auto const report = validate_coefficients(config.coefficients, model);
    require_admissible(report);
    auto const coeffs = filter_coefficients(config.coefficients, report);
    auto const triple = LevyTriple::of(model);

    ConvergenceReport out;
    for (std::int64_t n : settings.sample_sizes)
    {
        auto const reps = static_cast<std::size_t>(settings.replications);
        double const a_n = norming_a_n(model, n);
        double const b_n = centering_b_n(model, report.beta);
        std::vector<double> v1(reps), w1(reps);
        parallel_for(reps, config.workers, [&](std::size_t r) {
            auto seed = derive_seed(config.seed, {marginal_tag, static_cast<std::uint64_t>(n), r});
            auto z = simulate_innovations(model, n, report.order, seed);
            auto x = moving_average(z, coeffs);
            double sum = 0.0;
            double mx = 0.0;
            for (double xi : x)
            {
                sum += xi;
                mx = std::max(mx, xi);
            }
            v1[r] = (sum - static_cast<double>(n) * b_n) / a_n;
            w1[r] = mx / a_n;
        });

        MarginalRow row;
        row.n = n;
        row.replications = settings.replications;
        row.ks = ks_statistic(w1, extremal_law(report.nu_scale, model.alpha()));
        for (double z : settings.char_z)
        {
            row.chars.push_back(char_discrepancy(v1, z, triple, report.beta));
        }
        out.marginal.push_back(std::move(row));
    }

    auto const& last = out.marginal.back();
    out.checks.push_back({"marginal_ks", last.ks <= settings.max_ks,
                          "KS of W_n(1) at n=" + std::to_string(last.n) + ": " + fmt(last.ks)
                              + " (limit " + fmt(settings.max_ks) + ")"});
    bool chars_ok = true;
    std::ostringstream detail;
    detail << "char discrepancy of V_n(1) at n=" << last.n << ":";
    for (auto const& c : last.chars)
    {
        chars_ok = chars_ok && c.discrepancy <= settings.max_char;
        detail << " z=" << c.z << ":" << fmt(c.discrepancy);
    }
    detail << " (limit " << fmt(settings.max_char) << ")";
    out.checks.push_back({"marginal_char", chars_ok, detail.str()});
    return out;
}

ConvergenceReport limit_experiment(ExperimentConfig const& config)
{
    LimitSettings const settings = config.limit.value_or(LimitSettings{});
    auto const& model = config.model;
    auto const report = validate_coefficients(config.coefficients, model);
    require_admissible(report);
    auto const triple = LevyTriple::of(model);

    auto const draws = static_cast<std::size_t>(settings.draws);
    std::vector<double> v1(draws), w1(draws), counts(draws);
    parallel_for(draws, config.workers, [&](std::size_t r) {
        Rng rng(derive_seed(config.seed, {limit_tag, r}));
        auto sample = limit_pair_sample(model, report, settings.u, rng);
        v1[r] = sample.paths.first(1.0);
        w1[r] = sample.paths.second(1.0);
        counts[r] = static_cast<double>(sample.atoms.atoms.size());
    });

    LimitRow row;
    row.draws = settings.draws;
    row.u = settings.u;
    row.ks = ks_statistic(w1, extremal_law(report.nu_scale, model.alpha()));
    for (double z : settings.char_z)
    {
        row.chars.push_back(char_discrepancy(v1, z, triple, report.beta));
    }
    double total = 0.0;
    for (double c : counts)
    {
        total += c;
    }
    row.atom_mean = total / static_cast<double>(draws);
    row.atom_expected = std::pow(settings.u, -model.alpha());
    row.atom_se = std::sqrt(row.atom_expected / static_cast<double>(draws));
    row.truncation_variance = truncation_variance(model, report.beta, settings.u);

    ConvergenceReport out;
    out.checks.push_back({"limit_ks", row.ks <= settings.max_ks,
                          "KS of W(1): " + fmt(row.ks) + " (limit " + fmt(settings.max_ks) + ")"});
    bool chars_ok = true;
    std::ostringstream detail;
    detail << "char discrepancy of V(1):";
    for (auto const& c : row.chars)
    {
        chars_ok = chars_ok && c.discrepancy <= settings.max_char;
        detail << " z=" << c.z << ":" << fmt(c.discrepancy);
    }
    detail << " (limit " << fmt(settings.max_char) << ")";
    out.checks.push_back({"limit_char", chars_ok, detail.str()});
    double gap = std::abs(row.atom_mean - row.atom_expected);
    out.checks.push_back({"limit_atom_count", gap <= 3.0 * row.atom_se,
                          "mean " + fmt(row.atom_mean) + " vs " + fmt(row.atom_expected)
                              + " (3 se = " + fmt(3.0 * row.atom_se) + ")"});
    out.limit = row;
    return out;
}

ConvergenceReport run_experiments(ExperimentConfig const& config)
{
    ConvergenceReport out;
    auto merge = [&out](ConvergenceReport part) {
        for (auto& r : part.proximity)
        {
            out.proximity.push_back(std::move(r));
        }
        for (auto& r : part.marginal)
        {
            out.marginal.push_back(std::move(r));
        }
        if (part.limit)
        {
            out.limit = std::move(part.limit);
        }
        for (auto& c : part.checks)
        {
            out.checks.push_back(std::move(c));
        }
    };
    if (config.proximity)
    {
        merge(proximity_experiment(config));
    }
    if (config.marginal)
    {
        merge(marginal_experiment(config));
    }
    if (config.limit)
    {
        merge(limit_experiment(config));
    }
    return out;
}

nlohmann::json to_json(ConvergenceReport const& r)
{
    nlohmann::json j;
    j["passed"] = r.passed();
    j["proximity"] = nlohmann::json::array();
    for (auto const& row : r.proximity)
    {
        j["proximity"].push_back({{"n", row.n},
                                  {"replications", row.replications},
                                  {"median_dp", row.median_dp},
                                  {"q90_dp", row.q90_dp},
                                  {"max_dp", row.max_dp},
                                  {"median_sum", row.median_sum},
                                  {"median_max", row.median_max},
                                  {"median_m1_star_max", row.median_m1_star_max},
                                  {"m1_star_identity", row.m1_star_identity}});
    }
    j["marginal"] = nlohmann::json::array();
    for (auto const& row : r.marginal)
    {
        j["marginal"].push_back({{"n", row.n},
                                 {"replications", row.replications},
                                 {"ks", row.ks},
                                 {"char", chars_json(row.chars)}});
    }
    if (r.limit)
    {
        auto const& l = *r.limit;
        j["limit"] = {{"draws", l.draws},
                      {"u", l.u},
                      {"ks", l.ks},
                      {"char", chars_json(l.chars)},
                      {"atom_mean", l.atom_mean},
                      {"atom_expected", l.atom_expected},
                      {"atom_se", l.atom_se},
                      {"truncation_variance", l.truncation_variance}};
    }
    j["checks"] = nlohmann::json::array();
    for (auto const& c : r.checks)
    {
        j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return j;
}

void write_report_csv(std::ostream& os, ConvergenceReport const& r)
{
    auto const old_precision = os.precision(17);
    os << "section,n,statistic,value\n";
    for (auto const& row : r.proximity)
    {
        os << "proximity," << row.n << ",median_dp," << row.median_dp << '\n';
        os << "proximity," << row.n << ",q90_dp," << row.q90_dp << '\n';
        os << "proximity," << row.n << ",max_dp," << row.max_dp << '\n';
        os << "proximity," << row.n << ",median_sum," << row.median_sum << '\n';
        os << "proximity," << row.n << ",median_max," << row.median_max << '\n';
        os << "proximity," << row.n << ",median_m1_star_max," << row.median_m1_star_max << '\n';
    }
    for (auto const& row : r.marginal)
    {
        os << "marginal," << row.n << ",ks," << row.ks << '\n';
        for (auto const& c : row.chars)
        {
            os << "marginal," << row.n << ",char_z" << c.z << ',' << c.discrepancy << '\n';
        }
    }
    if (r.limit)
    {
        auto const& l = *r.limit;
        os << "limit,,ks," << l.ks << '\n';
        for (auto const& c : l.chars)
        {
            os << "limit,,char_z" << c.z << ',' << c.discrepancy << '\n';
        }
        os << "limit,,atom_mean," << l.atom_mean << '\n';
        os << "limit,,atom_expected," << l.atom_expected << '\n';
        os << "limit,,truncation_variance," << l.truncation_variance << '\n';
    }
    os.precision(old_precision);
}

//---------------------------------------------------------------------------//
Lemma21Result lemma21_check(PathPair const& x, std::span<CadlagPath const> y_sequence,
                            CadlagPath const& y_limit, double tol)
{
    Lemma21Result out;
    CadlagPath const base = add_continuous(x.first, y_limit);
    double scale = 0.0;
    for (double v : base.right_values())
    {
        scale = std::max(scale, std::abs(v));
    }
    for (double v : base.left_values())
    {
        scale = std::max(scale, std::abs(v));
    }
    double const allowance = 1e-12 * (1.0 + scale);
    for (auto const& y : y_sequence)
    {
        double bound = d_uniform(y, y_limit);
        double d = d_p({add_continuous(x.first, y), x.second}, {base, x.second}, tol);
        out.bounds.push_back(bound);
        out.distances.push_back(d);
        out.passed = out.passed && d <= bound + allowance;
    }
    return out;
}

}  // namespace skorohod
