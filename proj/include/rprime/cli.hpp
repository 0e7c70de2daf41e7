#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rprime
{

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode
{
    exit_ok = 0,
    exit_usage = 1,
    exit_domain = 2,
    exit_verify_failed = 3,
};

/// Parses `args` (without the program name) and runs one subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses `10`, `1e5`, `10^3`, `2^22` or a decimal. Throws Usage on anything else.
double parse_x_value(const std::string& text);

} // namespace rprime
