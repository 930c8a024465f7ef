#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "skorohod/cadlag_path.hpp"

using namespace skorohod;

namespace {

CadlagPath unit_step(double a)
{
    double t[] = {a};
    double v[] = {1.0};
    return CadlagPath::step(0.0, t, v);
}

}  // namespace

TEST_CASE("path construction and evaluation")
{
    auto x = unit_step(0.5);
    CHECK(x(0.0) == 0.0);
    CHECK(x(0.49) == 0.0);
    CHECK(x(0.5) == 1.0);
    CHECK(x(1.0) == 1.0);
    CHECK(x.left_limit(0.5) == 0.0);
    CHECK(x.is_step());
    CHECK(x.is_nondecreasing());
    CHECK_FALSE(x.is_continuous());

    Point nodes[] = {{0.0, 0.0}, {0.25, 1.0}, {1.0, -0.5}};
    auto y = CadlagPath::linear(nodes);
    CHECK(y(0.125) == doctest::Approx(0.5));
    CHECK(y(0.625) == doctest::Approx(0.25));
    CHECK(y.is_continuous());
    CHECK_FALSE(y.is_monotone());
}

TEST_CASE("path invariants are enforced")
{
    CHECK_THROWS_AS(CadlagPath({0.0}, {0.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(CadlagPath({0.0, 0.5}, {0.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(CadlagPath({0.0, 0.6, 0.5, 1.0}, {0, 0, 0, 0}, {0, 0, 0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CadlagPath({0.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(CadlagPath({0.0, 1.0}, {0.0, NAN}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("completed graph of the zero path")
{
    auto g = completed_graph(CadlagPath());
    REQUIRE(g.segments.size() == 1);
    CHECK(g.segments[0] == PlanarSegment{{0, 0}, {1, 0}});
}

TEST_CASE("completed graph of a unit step")
{
    auto g = completed_graph(unit_step(0.5));
    REQUIRE(g.segments.size() == 3);
    CHECK(g.segments[0] == PlanarSegment{{0, 0}, {0.5, 0}});
    CHECK(g.segments[1] == PlanarSegment{{0.5, 0}, {0.5, 1}});
    CHECK(g.segments[2] == PlanarSegment{{0.5, 1}, {1, 1}});
}

TEST_CASE("completed graph of a jump followed by a ramp")
{
    CadlagPath x({0.0, 0.5, 1.0}, {0.0, 0.0, 1.5}, {0.0, 1.0, 1.5});
    auto g = completed_graph(x);
    REQUIRE(g.segments.size() == 3);
    CHECK(g.segments[1] == PlanarSegment{{0.5, 0}, {0.5, 1}});
    CHECK(g.segments[2] == PlanarSegment{{0.5, 1}, {1, 1.5}});
    for (double tau : {0.0, 0.3, 0.7, 1.0})
    {
        auto p = g.segments[2].at(tau);
        CHECK(p.v == doctest::Approx(x(p.t)));
    }
}

TEST_CASE("completed graph is a connected chain with vertical fillers")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial)
    {
        auto x = oracle::random_step(rng, 8, -2.0, 2.0);
        auto g = completed_graph(x);
        REQUIRE_FALSE(g.segments.empty());
        CHECK(g.segments.front().a == Point{0.0, x(0.0)});
        CHECK(g.segments.back().b == Point{1.0, x(1.0)});
        for (std::size_t k = 1; k < g.segments.size(); ++k)
            CHECK(g.segments[k - 1].b == g.segments[k].a);
        auto bp = x.breakpoints();
        for (std::size_t k = 1; k < bp.size(); ++k)
        {
            double l = x.left_values()[k];
            double r = x.right_values()[k];
            if (l == r)
                continue;
            PlanarSegment filler{{bp[k], l}, {bp[k], r}};
            bool found = std::find(g.segments.begin(), g.segments.end(), filler) != g.segments.end();
            CHECK(found);
        }
    }
}

TEST_CASE("add_continuous")
{
    auto x = unit_step(0.5);
    CHECK(add_continuous(x, CadlagPath()) == x);

    Point diag[] = {{0.0, 0.0}, {1.0, 1.0}};
    auto d = add_continuous(CadlagPath(), CadlagPath::linear(diag));
    CHECK(d(0.3) == doctest::Approx(0.3));
    CHECK(d.is_continuous());

    Point ramp[] = {{0.0, 0.0}, {1.0, 2.0}};
    auto s = add_continuous(x, CadlagPath::linear(ramp));
    CHECK(s(0.25) == doctest::Approx(0.5));
    CHECK(s.left_limit(0.5) == doctest::Approx(1.0));
    CHECK(s(0.5) == doctest::Approx(2.0));
    CHECK(s(0.75) == doctest::Approx(2.5));

    CHECK_THROWS_AS(add_continuous(x, x), std::invalid_argument);
}

TEST_CASE("JSON round trip and field-named errors")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto x = oracle::random_step(rng, 6, -1.0, 1.0);
        auto back = path_from_json(nlohmann::json::parse(to_json(x).dump()));
        CHECK(back == x);
        PathPair pair{x, oracle::random_linear(rng, 5, 1.0)};
        CHECK(pair_from_json(nlohmann::json::parse(to_json(pair).dump())) == pair);
    }

    auto j = to_json(unit_step(0.5));
    j.erase("left");
    try
    {
        path_from_json(j);
        FAIL("expected ParseError");
    }
    catch (ParseError const& e)
    {
        CHECK(std::string(e.what()).find("left") != std::string::npos);
    }
    nlohmann::json pj{{"first", to_json(unit_step(0.5))}, {"second", {{"breakpoints", "x"}}}};
    try
    {
        pair_from_json(pj);
        FAIL("expected ParseError");
    }
    catch (ParseError const& e)
    {
        CHECK(std::string(e.what()).find("second") != std::string::npos);
    }
}

TEST_CASE("sampled CSV export")
{
    std::ostringstream os;
    write_sampled_csv(os, unit_step(0.5), 3);
    CHECK(os.str() == "t,value\n0,0\n0.5,1\n1,1\n");
}
