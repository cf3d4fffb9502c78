#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "sdnet/io.hpp"

namespace sdnet::cli {

enum ExitStatus : int { kSuccess = 0, kValidationFailure = 1, kRuntimeFailure = 2 };

struct Invocation {
  std::string command;  // validate | simulate | reduce | verify
  std::filesystem::path config;
  unsigned workers = 1;
  std::optional<std::filesystem::path> out;  // defaults to config "output" entry, then "out"
  std::optional<std::uint64_t> seed;
};

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Runs one subcommand. Reports are written under the output directory
/// whatever the outcome; diagnostics go to `diag`.
int run(const Invocation& invocation, std::ostream& diag);

/// argv front end.
int main(int argc, char** argv);

}  // namespace sdnet::cli
