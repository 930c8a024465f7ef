#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cli.hpp"
#include "skorohod/cadlag_path.hpp"

using namespace skorohod;
namespace fs = std::filesystem;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "skorohod");
    std::vector<char const*> argv;
    for (auto const& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(std::string const& name)
{
    auto dir = fs::temp_directory_path() / ("skorohod_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(fs::path const& p, std::string const& text)
{
    std::ofstream(p) << text;
}

std::string read_file(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string const step_a = R"({"breakpoints":[0,0.5,1],"left":[0,0,1],"right":[0,1,1]})";
std::string const step_b = R"({"breakpoints":[0,0.6,1],"left":[0,0,1],"right":[0,1,1]})";

std::string const base_config = R"({
  "schema_version": 1,
  "model": {"alpha": 1.5, "p": 0.7, "r": 0.3},
  "coefficients": {"kind": "explicit", "values": [1, 0.5, 0.25]},
  "seed": 3,
  "simulate": {"n": 10, "replications": 1, "limit": true, "u": 0.2, "csv_points": 5}
})";

}  // namespace

TEST_CASE("metric subcommand")
{
    auto dir = scratch("metric");
    write_file(dir / "a.json", step_a);
    write_file(dir / "b.json", step_b);
    auto a = (dir / "a.json").string();
    auto b = (dir / "b.json").string();

    for (std::string m : {"uniform", "m2", "m1star"})
    {
        auto r = invoke({"metric", a, a, "--metric", m});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("0 ", 0) == 0);
    }
    auto r = invoke({"metric", a, b, "--metric", "m2", "--tol", "1e-9"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(0.1).epsilon(1e-8));
    CHECK(r.out.find("tol 1e-09") != std::string::npos);

    write_file(dir / "pa.json", R"({"first":)" + step_a + R"(,"second":)" + step_a + "}");
    auto pa = (dir / "pa.json").string();
    CHECK(invoke({"metric", pa, pa, "--metric", "p"}).code == 0);

    write_file(dir / "bad.json", R"({"breakpoints":[0,1],"left":[0,0]})");
    auto bad = invoke({"metric", a, (dir / "bad.json").string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("right") != std::string::npos);

    write_file(dir / "broken.json", "{not json");
    CHECK(invoke({"metric", a, (dir / "broken.json").string()}).code == 2);
    CHECK(invoke({"metric", a, b, "--tol", "0"}).code == 3);
    CHECK(invoke({"metric", a, b, "--tol", "-1"}).code == 3);
    CHECK(invoke({"metric", a, b, "--metric", "j1"}).code == 2);
    CHECK(invoke({"bogus"}).code == 2);
}

TEST_CASE("simulate is byte-reproducible and round-trips")
{
    auto dir = scratch("simulate");
    write_file(dir / "config.json", base_config);
    auto cfg = (dir / "config.json").string();
    auto r1 = invoke({"simulate", "--config", cfg, "--out", (dir / "run1").string()});
    auto r2 = invoke({"simulate", "--config", cfg, "--out", (dir / "run2").string()});
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);

    auto manifest = nlohmann::json::parse(read_file(dir / "run1" / "manifest.json"));
    CHECK(manifest["seed"] == 3);
    CHECK(manifest["artifact_version"] == cli::artifact_version);
    REQUIRE(manifest["files"].size() > 0);
    bool saw_atoms = false;
    for (auto const& f : manifest["files"])
    {
        auto name = f["name"].get<std::string>();
        CHECK(read_file(dir / "run1" / name) == read_file(dir / "run2" / name));
        CHECK(f["bytes"] == read_file(dir / "run1" / name).size());
        saw_atoms = saw_atoms || name == "atoms_0.csv";
        if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
        {
            auto j = nlohmann::json::parse(read_file(dir / "run1" / name));
            CHECK(nlohmann::json::parse(j.dump()) == j);
            if (name.rfind("process_pair", 0) == 0 || name.rfind("limit_pair", 0) == 0)
            {
                auto p = pair_from_json(j);
                CHECK(to_json(p)["first"] == j["first"]);
            }
        }
    }
    CHECK(saw_atoms);
    CHECK(fs::exists(dir / "run1" / "limit_pair_0.json"));
    CHECK(fs::exists(dir / "run1" / "W_n_0.csv"));

    auto r3 = invoke({"simulate", "--config", cfg, "--out", (dir / "run3").string(), "--seed", "4"});
    CHECK(r3.code == 0);
    CHECK(read_file(dir / "run1" / "x_0.csv") != read_file(dir / "run3" / "x_0.csv"));
}

TEST_CASE("simulate rejects bad coefficients and unwritable outputs")
{
    auto dir = scratch("simulate_errors");
    auto cfg = nlohmann::json::parse(base_config);
    cfg["coefficients"]["values"] = {1.0, -0.5};
    write_file(dir / "bad.json", cfg.dump());
    auto r = invoke({"simulate", "--config", (dir / "bad.json").string(), "--out", (dir / "o").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("partial-sum ratio") != std::string::npos);

    write_file(dir / "good.json", base_config);
    write_file(dir / "blocker", "file");
    auto io = invoke({"simulate", "--config", (dir / "good.json").string(), "--out",
                      (dir / "blocker" / "sub").string()});
    CHECK(io.code == 4);

    auto missing = invoke({"simulate", "--config", (dir / "nope.json").string(), "--out", (dir / "o").string()});
    CHECK(missing.code == 2);

    cfg = nlohmann::json::parse(base_config);
    cfg["schema_version"] = 7;
    write_file(dir / "version.json", cfg.dump());
    CHECK(invoke({"simulate", "--config", (dir / "version.json").string(), "--out", (dir / "o").string()}).code
          == 2);
}

TEST_CASE("verify exit codes")
{
    auto dir = scratch("verify");
    auto cfg = nlohmann::json::parse(base_config);
    cfg["coefficients"]["values"] = {1.0};
    cfg["verify"] = {{"proximity", {{"sample_sizes", {20, 40}}, {"replications", 5}}}};
    write_file(dir / "identity.json", cfg.dump());
    auto ok = invoke({"verify", "--config", (dir / "identity.json").string(), "--out", (dir / "a").string()});
    CHECK(ok.code == 0);
    auto report = nlohmann::json::parse(read_file(dir / "a" / "report.json"));
    for (auto const& row : report["proximity"])
        CHECK(row["max_dp"] == 0.0);
    CHECK(fs::exists(dir / "a" / "report.csv"));
    CHECK(fs::exists(dir / "a" / "manifest.json"));

    cfg = nlohmann::json::parse(base_config);
    cfg["verify"] = {{"marginal", {{"sample_sizes", {50}}, {"replications", 2}}}};
    write_file(dir / "tiny.json", cfg.dump());
    auto fail = invoke({"verify", "--config", (dir / "tiny.json").string(), "--out", (dir / "b").string()});
    CHECK(fail.code == 1);
    CHECK(fs::exists(dir / "b" / "report.json"));

    CHECK(invoke({"verify", "--config", (dir / "tiny.json").string(), "--out", (dir / "c").string(), "--tol",
                  "0"})
              .code
          == 3);
    CHECK(invoke({"verify", "--config", (dir / "tiny.json").string()}).code == 2);
}

TEST_CASE("config hash ignores field order")
{
    auto a = nlohmann::json::parse(R"({"seed": 1, "model": {"alpha": 1.5, "p": 0.7, "r": 0.3}})");
    auto b = nlohmann::json::parse(R"({"model": {"r": 0.3, "p": 0.7, "alpha": 1.5}, "seed": 1})");
    CHECK(cli::config_hash(a) == cli::config_hash(b));
    b["seed"] = 2;
    CHECK(cli::config_hash(a) != cli::config_hash(b));
}
