#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "skorohod/cadlag_path.hpp"
#include "skorohod/limit_process.hpp"
#include "skorohod/linear_process.hpp"
#include "skorohod/metrics.hpp"
#include "skorohod/random.hpp"
#include "skorohod/tail_model.hpp"
#include "skorohod/verification.hpp"

namespace skorohod::cli {
namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t simulate_process_tag = 4;
constexpr std::uint64_t simulate_limit_tag = 5;

nlohmann::json read_json(std::string const& file)
{
    std::ifstream in(file);
    if (!in)
    {
        throw ParseError("cannot open '" + file + "'");
    }
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        throw ParseError("'" + file + "' is not valid JSON: " + e.what());
    }
}

/// Collects output files and timings for the run manifest.
class OutputDir
{
  public:
    explicit OutputDir(std::string dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_))
        {
            throw IoError("cannot create output directory '" + dir_.string() + "'");
        }
    }

    void write(std::string const& name, std::function<void(std::ostream&)> const& body)
    {
        std::ostringstream buffer;
        body(buffer);
        auto const text = buffer.str();
        std::ofstream out(dir_ / name, std::ios::binary);
        out << text;
        out.close();
        if (!out)
        {
            throw IoError("cannot write '" + (dir_ / name).string() + "'");
        }
        files_.push_back({{"name", name}, {"bytes", text.size()}});
    }

    void write_json(std::string const& name, nlohmann::json const& j)
    {
        write(name, [&j](std::ostream& os) { os << j.dump(2) << '\n'; });
    }

    void time(std::string const& label, double seconds) { timings_[label] = seconds; }

    void write_manifest(nlohmann::json const& config, std::uint64_t seed)
    {
        nlohmann::json m{{"artifact_version", artifact_version},
                         {"config_hash", config_hash(config)},
                         {"seed", seed},
                         {"files", files_},
                         {"timings_seconds", timings_}};
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << m.dump(2) << '\n';
        out.close();
        if (!out)
        {
            throw IoError("cannot write the run manifest");
        }
    }

  private:
    fs::path dir_;
    nlohmann::json files_ = nlohmann::json::array();
    nlohmann::json timings_ = nlohmann::json::object();
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct CommonOptions
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<double> tol;
};

nlohmann::json effective_config(CommonOptions const& opt)
{
    auto j = read_json(opt.config);
    if (!j.is_object())
    {
        throw ParseError("configuration must be a JSON object");
    }
    if (auto it = j.find("schema_version"); it != j.end() && (!it->is_number_integer() || *it != 1))
    {
        throw ParseError("config field 'schema_version' must be 1");
    }
    if (opt.seed)
    {
        j["seed"] = *opt.seed;
    }
    if (opt.workers)
    {
        j["workers"] = *opt.workers;
    }
    if (opt.tol)
    {
        if (!(*opt.tol > 0.0))
        {
            throw ParameterError("--tol must be positive");
        }
        j["tol"] = *opt.tol;
    }
    return j;
}

//---------------------------------------------------------------------------//
int cmd_metric(std::string const& file_a, std::string const& file_b, std::string const& metric,
               double tol, std::ostream& out)
{
    if (!(tol > 0.0) || !std::isfinite(tol))
    {
        throw ParameterError("--tol must be a positive number");
    }
    auto ja = read_json(file_a);
    auto jb = read_json(file_b);
    double d = 0.0;
    if (metric == "p")
    {
        d = d_p(pair_from_json(ja), pair_from_json(jb), tol);
    }
    else
    {
        auto a = path_from_json(ja);
        auto b = path_from_json(jb);
        if (metric == "uniform")
        {
            d = d_uniform(a, b);
        }
        else if (metric == "m2")
        {
            d = d_m2(a, b, tol);
        }
        else
        {
            d = d_m1_star(a, b, tol);
        }
    }
    out << std::setprecision(15) << d << " (metric " << metric << ", tol " << tol << ")\n";
    return exit_pass;
}

int cmd_simulate(CommonOptions const& opt, std::ostream& out)
{
    auto const start = std::chrono::steady_clock::now();
    auto const config = effective_config(opt);
    auto const experiment = experiment_config_from_json(config);
    nlohmann::json sim = config.value("simulate", nlohmann::json::object());
    if (!sim.is_object())
    {
        throw ParseError("config field 'simulate' must be an object");
    }
    auto const n = sim.value("n", std::int64_t{1000});
    auto const reps = sim.value("replications", 1);
    bool const process = sim.value("process", true);
    bool const limit = sim.value("limit", false);
    double const u = sim.value("u", 0.01);
    auto const csv_points = sim.value("csv_points", std::size_t{0});
    if (n < 1 || reps < 1)
    {
        throw ParseError("simulate fields 'n' and 'replications' must be >= 1");
    }
    if (csv_points == 1)
    {
        throw ParseError("simulate field 'csv_points' must be 0 or >= 2");
    }

    auto const& model = experiment.model;
    auto const report = validate_coefficients(experiment.coefficients, model);
    require_admissible(report);
    auto const coeffs = filter_coefficients(experiment.coefficients, report);

    OutputDir dir(opt.out);
    dir.write_json("coefficients.json",
                   {{"spec", to_json(experiment.coefficients)},
                    {"report", to_json(report)},
                    {"filter", coeffs}});
    auto sampled = [&](std::string const& stem, CadlagPath const& path) {
        if (csv_points >= 2)
        {
            dir.write(stem + ".csv", [&](std::ostream& os) { write_sampled_csv(os, path, csv_points); });
        }
    };

    for (int r = 0; r < reps; ++r)
    {
        auto const tag = std::to_string(r);
        if (process)
        {
            auto const t0 = std::chrono::steady_clock::now();
            auto seed = derive_seed(experiment.seed, {simulate_process_tag,
                                                      static_cast<std::uint64_t>(n),
                                                      static_cast<std::uint64_t>(r)});
            auto z = simulate_innovations(model, n, report.order, seed);
            auto x = moving_average(z, coeffs);
            auto paths = coupled_paths(z, coeffs, report, model);
            dir.write("innovations_" + tag + ".csv", [&](std::ostream& os) {
                write_indexed_csv(os, z.values, 1 - z.prewindow);
            });
            dir.write("x_" + tag + ".csv", [&](std::ostream& os) { write_indexed_csv(os, x, 1); });
            dir.write_json("process_pair_" + tag + ".json", to_json(paths.process));
            dir.write_json("reference_pair_" + tag + ".json", to_json(paths.reference));
            sampled("V_n_" + tag, paths.process.first);
            sampled("W_n_" + tag, paths.process.second);
            sampled("V_n_Z_" + tag, paths.reference.first);
            sampled("W_n_Z_" + tag, paths.reference.second);
            dir.time("process_" + tag, seconds_since(t0));
        }
        if (limit)
        {
            auto const t0 = std::chrono::steady_clock::now();
            Rng rng(derive_seed(experiment.seed, {simulate_limit_tag, static_cast<std::uint64_t>(r)}));
            auto sample = limit_pair_sample(model, report, u, rng);
            dir.write("atoms_" + tag + ".csv",
                      [&](std::ostream& os) { write_atoms_csv(os, sample.atoms); });
            auto j = to_json(sample.paths);
            j["u"] = u;
            j["truncation_variance"] = sample.truncation_variance;
            dir.write_json("limit_pair_" + tag + ".json", j);
            sampled("limit_V_" + tag, sample.paths.first);
            sampled("limit_W_" + tag, sample.paths.second);
            dir.time("limit_" + tag, seconds_since(t0));
        }
    }
    dir.time("total", seconds_since(start));
    dir.write_manifest(config, experiment.seed);
    out << "wrote " << opt.out << '\n';
    return exit_pass;
}

int cmd_verify(CommonOptions const& opt, std::ostream& out)
{
    auto const start = std::chrono::steady_clock::now();
    auto const config = effective_config(opt);
    auto const experiment = experiment_config_from_json(config);
    if (!experiment.proximity && !experiment.marginal && !experiment.limit)
    {
        throw ParseError("config field 'verify' enables no experiment");
    }
    auto const report = validate_coefficients(experiment.coefficients, experiment.model);
    require_admissible(report);

    OutputDir dir(opt.out);
    auto const result = run_experiments(experiment);
    dir.write_json("report.json", to_json(result));
    dir.write("report.csv", [&](std::ostream& os) { write_report_csv(os, result); });
    dir.time("total", seconds_since(start));
    dir.write_manifest(config, experiment.seed);

    for (auto const& c : result.checks)
    {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
    return result.passed() ? exit_pass : exit_statistical_failure;
}

}  // namespace

std::string config_hash(nlohmann::json const& config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : config.dump())
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Skorohod M2 metrics and heavy-tailed linear process limit checks"};
    app.require_subcommand(1);

    std::string file_a, file_b, metric = "m2";
    double metric_tol = 1e-6;
    auto* metric_cmd = app.add_subcommand("metric", "Distance between two path (or pair) JSON files");
    metric_cmd->add_option("a", file_a, "First path file")->required();
    metric_cmd->add_option("b", file_b, "Second path file")->required();
    metric_cmd->add_option("--metric", metric, "uniform, m2, p or m1star")
        ->check(CLI::IsMember({"uniform", "m2", "p", "m1star"}));
    metric_cmd->add_option("--tol", metric_tol, "Metric tolerance");

    CommonOptions common;
    auto add_common = [&common](CLI::App* cmd) {
        cmd->add_option("--config", common.config, "Run configuration (JSON)")->required();
        cmd->add_option("--out", common.out, "Output directory")->required();
        cmd->add_option("--seed", common.seed, "Override the master seed");
        cmd->add_option("--workers", common.workers, "Worker threads (0 = all cores)");
        cmd->add_option("--tol", common.tol, "Metric tolerance");
    };
    auto* simulate_cmd = app.add_subcommand("simulate", "Write innovations, processes and paths");
    add_common(simulate_cmd);
    auto* verify_cmd = app.add_subcommand("verify", "Run the configured convergence experiments");
    add_common(verify_cmd);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_input_error;
    }

    try
    {
        if (metric_cmd->parsed())
        {
            return cmd_metric(file_a, file_b, metric, metric_tol, out);
        }
        if (simulate_cmd->parsed())
        {
            return cmd_simulate(common, out);
        }
        return cmd_verify(common, out);
    }
    catch (ParameterError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_parameter_error;
    }
    catch (IoError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_io_error;
    }
    catch (ParseError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    catch (nlohmann::json::exception const& e)
    {
        err << "error: malformed configuration: " << e.what() << '\n';
        return exit_input_error;
    }
    catch (std::invalid_argument const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_parameter_error;
    }
}

}  // namespace skorohod::cli
