#pragma once

#include "coulomb/domains.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace coulomb::cli {

/// Outcome of one command. The record always carries the keys command, inputs,
/// value, values, method, tolerance and provenance; failures add an error object.
struct CommandResult {
    int exit_code = 0;
    nlohmann::json record;
    /// What the command prints: the JSON record with --json, key/value lines otherwise.
    std::string output;
};

/// Runs one subcommand. argv excludes the program name.
CommandResult run_command(const std::vector<std::string>& argv);

/// Geometry mini-language: name:key=val,key=val with vector values written
/// with 'x' separators, e.g. ball:d=3,R=1,N=1 or cuboid:lo=0x0x0,hi=1x1x2.
domains::UniformDomain parse_domain(const std::string& text);

/// Comma-separated coordinates.
std::vector<double> parse_point(const std::string& text);

/// Printed form of a double with 17 significant digits.
std::string format_double(double v);

} // namespace coulomb::cli
