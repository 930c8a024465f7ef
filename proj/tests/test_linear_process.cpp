#include <doctest.h>

#include <cmath>
#include <sstream>

#include "skorohod/linear_process.hpp"
#include "skorohod/metrics.hpp"

using namespace skorohod;

namespace {

TailModel const model(1.5, 0.7, 0.3);

Innovations spike(std::int64_t n, int prewindow, std::int64_t at, double k)
{
    Innovations z;
    z.prewindow = prewindow;
    z.values.assign(static_cast<std::size_t>(n + prewindow), 0.0);
    z.values[static_cast<std::size_t>(at - 1 + prewindow)] = k;
    return z;
}

}  // namespace

TEST_CASE("coefficient validation examples")
{
    auto r = validate_coefficients(CoefficientSpec::explicit_list({0.5, 0.5}), model);
    CHECK(r.beta == 1.0);
    REQUIRE(r.ratios.size() == 2);
    CHECK(r.ratios[0] == 0.5);
    CHECK(r.ratios[1] == 1.0);
    CHECK(r.ratio_condition_ok);
    CHECK(r.phi_plus == 0.5);
    CHECK(r.phi_minus == 0.0);

    auto bad = validate_coefficients(CoefficientSpec::explicit_list({1.0, -0.5}), model);
    CHECK(bad.beta == 0.5);
    CHECK(bad.ratios[0] == 2.0);
    CHECK_FALSE(bad.ratio_condition_ok);
    CHECK(*bad.ratio_violation == 0);
    CHECK_THROWS_WITH_AS(require_admissible(bad), doctest::Contains("partial-sum ratio"),
                         CoefficientError);

    auto c = validate_coefficients(CoefficientSpec::explicit_list({1.0, 0.5, 0.25}), model);
    CHECK(c.beta == 1.75);
    CHECK(c.ratios[0] == doctest::Approx(4.0 / 7.0));
    CHECK(c.ratios[1] == doctest::Approx(6.0 / 7.0));
    CHECK(c.ratios[2] == doctest::Approx(1.0));
    CHECK(c.ratio_condition_ok);
    CHECK(c.phi_plus == 1.0);
    CHECK(c.phi_minus == 0.0);
    CHECK(c.gamma == 1.0);
    CHECK(c.lambda_guard == 1.0);
    CHECK(c.nu_scale == doctest::Approx(0.7));
    CHECK(c.order == 2);
    CHECK(c.admissible());
}

TEST_CASE("coefficient hypotheses")
{
    CHECK_THROWS_AS(validate_coefficients(CoefficientSpec::explicit_list({-1.0, 0.5}), model),
                    CoefficientError);
    CHECK_THROWS_AS(validate_coefficients(CoefficientSpec::explicit_list({0.0}), model),
                    CoefficientError);

    // Only negative innovations and no negative coefficient: degenerate extremes.
    auto r = validate_coefficients(CoefficientSpec::explicit_list({1.0, 0.5}), TailModel(1.5, 0.0, 1.0));
    CHECK_FALSE(r.extremal_positivity_ok);
    CHECK_THROWS_AS(require_admissible(r), CoefficientError);

    auto mixed = validate_coefficients(CoefficientSpec::explicit_list({1.0, 0.5, -0.25}), model);
    CHECK(mixed.phi_minus == 0.25);
    CHECK(mixed.lambda_guard == 0.25);
    CHECK(mixed.gamma == 1.0);

    auto alt = validate_coefficients(CoefficientSpec::geometric(1.0, -0.5), model);
    CHECK_FALSE(alt.ratio_condition_ok);
    auto poly = validate_coefficients(CoefficientSpec::polynomial(1.0, 2.0), model);
    CHECK(poly.ratio_condition_ok);
    CHECK(poly.beta == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
}

TEST_CASE("family tails")
{
    auto g = CoefficientSpec::geometric(1.0, 0.5);
    CHECK(g.tail_sum(3) == doctest::Approx(0.25));
    CHECK(g.tail_sum(0) == doctest::Approx(2.0));
    auto p = CoefficientSpec::polynomial(2.0, 3.0);
    double direct = 0.0;
    for (int k = 0; k < 2000000; ++k)
        direct += 2.0 * std::pow(k + 1.0, -3.0);
    CHECK(p.tail_sum(0) == doctest::Approx(direct).epsilon(1e-11));
    double tail5 = direct;
    for (int k = 0; k < 5; ++k)
        tail5 -= p[k];
    CHECK(p.tail_sum(5) == doctest::Approx(tail5).epsilon(1e-10));
    CHECK(p.tail_abs_sum(5) == p.tail_sum(5));
}

TEST_CASE("truncation")
{
    auto e = CoefficientSpec::explicit_list({1.0, 0.5, 0.25});
    auto t = truncate_coefficients(e, 3, 1.0);
    CHECK(t == std::vector<double>{1.0, 0.5, 0.25, 0.0});

    auto g = CoefficientSpec::geometric(1.0, 0.5);
    auto tg = truncate_coefficients(g, 3, 1.0);
    REQUIRE(tg.size() == 4);
    CHECK(tg[0] == 1.0);
    CHECK(tg[1] == 0.5);
    CHECK(tg[2] == 0.25);
    CHECK(tg[3] == doctest::Approx(0.25));
    double beta = tg[0] + tg[1] + tg[2] + tg[3];
    CHECK(beta == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(truncate_coefficients(g, 1, 1.0), CoefficientError);
    CHECK_THROWS_AS(truncate_coefficients(g, 0, 1.0), CoefficientError);

    auto r = validate_coefficients(g, model);
    CHECK(r.order == default_truncation(g, r.lambda_guard));
    CHECK(g.tail_abs_sum(r.order) < r.lambda_guard);
    CHECK(g.tail_abs_sum(r.order - 1) >= r.lambda_guard);
    auto f = filter_coefficients(g, r);
    CHECK(f.size() == static_cast<std::size_t>(r.order) + 1);
}

TEST_CASE("JSON coefficient specs")
{
    auto j = nlohmann::json::parse(R"({"kind":"geometric","c":1.0,"rho":0.5,"truncation":4})");
    auto g = coefficients_from_json(j);
    CHECK(g.kind() == CoefficientSpec::Kind::geometric);
    CHECK(g.truncation() == 4);
    CHECK(to_json(coefficients_from_json(to_json(g))) == to_json(g));
    CHECK_THROWS_WITH_AS(coefficients_from_json(nlohmann::json::parse(R"({"kind":"geometric","c":1})")),
                         doctest::Contains("rho"), ParseError);
    CHECK_THROWS_AS(coefficients_from_json(nlohmann::json::parse(R"({"kind":"bogus"})")), ParseError);
    CHECK_THROWS_AS(coefficients_from_json(nlohmann::json::parse(R"({"kind":"explicit","values":[]})")),
                    ParseError);
}

TEST_CASE("innovation simulation")
{
    auto a = simulate_innovations(model, 50, 3, 42);
    auto b = simulate_innovations(model, 50, 3, 42);
    CHECK(a.values == b.values);
    CHECK(a.n() == 50);
    CHECK(simulate_innovations(model, 0, 2, 1).values.size() == 2);
    auto c = simulate_innovations(model, 50, 3, 43);
    CHECK(c.values != a.values);

    auto big = simulate_innovations(model, 10000, 0, 7);
    int over = 0;
    for (double z : big.values)
        over += std::abs(z) > 10.0;
    double p = std::pow(10.0, -1.5);
    CHECK(std::abs(over / 1e4 - p) <= 3.0 * std::sqrt(p * (1 - p) / 1e4));
}

TEST_CASE("moving average")
{
    auto z = simulate_innovations(model, 20, 0, 5);
    std::vector<double> identity{1.0};
    CHECK(moving_average(z, identity) == z.values);

    auto s = spike(10, 2, 4, 4.0);
    std::vector<double> coeffs{1.0, 0.5, 0.25};
    auto x = moving_average(s, coeffs);
    std::vector<double> expected(10, 0.0);
    expected[3] = 4.0;
    expected[4] = 2.0;
    expected[5] = 1.0;
    CHECK(x == expected);

    CHECK_THROWS_AS(moving_average(simulate_innovations(model, 5, 1, 1), coeffs), std::invalid_argument);
}

TEST_CASE("partial sum and max paths")
{
    std::vector<double> zeros(4, 0.0);
    CHECK(d_uniform(partial_sum_path(zeros, 1.0, 0.0), CadlagPath()) == 0.0);

    double a = 3.0;
    std::vector<double> two{a, a};
    auto v = partial_sum_path(two, a, 0.0);
    CHECK(v(0.25) == 0.0);
    CHECK(v(0.5) == 1.0);
    CHECK(v(1.0) == 2.0);

    std::vector<double> x{1.0, -1.0, 2.0, 0.0};
    auto w = partial_sum_path(x, 2.0, 0.5);
    CHECK(w(0.25) == 0.25);
    CHECK(w(0.5) == -0.5);
    CHECK(w(0.75) == 0.25);
    CHECK(w(1.0) == 0.0);
    CHECK(w(0.1) == 0.0);

    std::vector<double> m{1.0, 3.0, 2.0};
    auto mx = partial_max_path(m, 1.0);
    CHECK(mx(0.0) == 0.0);
    CHECK(mx(1.0 / 3.0) == 1.0);
    CHECK(mx(2.0 / 3.0) == 3.0);
    CHECK(mx(1.0) == 3.0);
    CHECK(mx.is_nondecreasing());

    std::vector<double> same(5, 2.0);
    auto c = partial_max_path(same, 4.0);
    CHECK(c(0.1) == 0.0);
    CHECK(c(0.2) == 0.5);
    CHECK(c(1.0) == 0.5);

    auto zz = simulate_innovations(model, 300, 0, 9);
    auto p = partial_sum_path(zz.values, 5.0, 0.3);
    double total = 0.0;
    for (double q : zz.values)
        total += q;
    CHECK(p(1.0) == doctest::Approx((total - 300 * 0.3) / 5.0));
    CHECK(partial_max_path(zz.values, 5.0).is_nondecreasing());
}

TEST_CASE("reference paths")
{
    CoefficientReport r;
    r.beta = 1.75;
    r.phi_plus = 1.0;
    r.phi_minus = 0.5;
    std::vector<double> z{2.0, -5.0, 1.0};
    auto ref = reference_paths(z, r, 1.0, 0.0);
    CHECK(ref.second(1.0 / 3.0) == 2.0);
    CHECK(ref.second(2.0 / 3.0) == 2.5);
    CHECK(ref.second(1.0) == 2.5);
    CHECK(ref.first(1.0) == doctest::Approx(1.75 * -2.0));

    r.phi_minus = 0.0;
    std::vector<double> neg{-1.0, -3.0};
    CHECK(reference_paths(neg, r, 1.0, 0.0).second == partial_max_path(std::vector<double>{0.0, 0.0}, 1.0));

    CoefficientReport unit;
    unit.beta = 1.0;
    unit.phi_plus = 1.0;
    std::vector<double> pos{0.5, 3.0, 1.0};
    auto u = reference_paths(pos, unit, 2.0, 0.0);
    CHECK(u.first == partial_sum_path(pos, 2.0, 0.0));
    CHECK(u.second == partial_max_path(pos, 2.0));
}

TEST_CASE("identity filter makes the coupled pairs equal")
{
    auto spec = CoefficientSpec::explicit_list({1.0});
    auto r = validate_coefficients(spec, model);
    auto coeffs = filter_coefficients(spec, r);
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        auto z = simulate_innovations(model, 500, r.order, seed);
        auto c = coupled_paths(z, coeffs, r, model);
        CHECK(c.process == c.reference);
    }
}

TEST_CASE("spike block property")
{
    std::vector<double> coeffs{1.0, -0.6, 0.3, 0.2};
    auto r = validate_coefficients(CoefficientSpec::explicit_list(coeffs), model);
    for (double k : {7.0, -7.0})
    {
        auto s = spike(40, 3, 10, k);
        auto x = moving_average(s, coeffs);
        double mx = *std::max_element(x.begin(), x.end());
        double expected = std::abs(k) * (k > 0 ? r.phi_plus : r.phi_minus);
        CHECK(mx == expected);
    }
}

TEST_CASE("truncation consistency for a geometric filter")
{
    auto g = CoefficientSpec::geometric(1.0, 0.6);
    int const q = 4;
    auto f1 = truncate_coefficients(g, q, 10.0);
    auto f2 = truncate_coefficients(g, q + 5, 10.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        auto z = simulate_innovations(model, 200, q + 5, seed);
        auto x1 = moving_average(z, f1);
        auto x2 = moving_average(z, f2);
        double zmax = 0.0;
        for (double v : z.values)
            zmax = std::max(zmax, std::abs(v));
        double bound = (g.tail_abs_sum(q) + std::abs(g.tail_sum(q))) * zmax;
        for (std::size_t i = 0; i < x1.size(); ++i)
            CHECK(std::abs(x1[i] - x2[i]) <= bound);
    }
}

TEST_CASE("indexed CSV")
{
    std::ostringstream os;
    std::vector<double> v{1.5, -2.0};
    write_indexed_csv(os, v, -1);
    CHECK(os.str() == "index,value\n-1,1.5\n0,-2\n");
}
