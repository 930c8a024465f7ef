#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

namespace skorohod::cli {

enum ExitCode : int
{
    exit_pass = 0,
    exit_statistical_failure = 1,
    exit_input_error = 2,
    exit_parameter_error = 3,
    exit_io_error = 4
};

inline constexpr char const* artifact_version = "0.1.0";

/// FNV-1a of the canonical (key-sorted) dump; independent of field order.
std::string config_hash(nlohmann::json const& config);

/// Entry point shared by the executable and the tests.
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skorohod::cli
