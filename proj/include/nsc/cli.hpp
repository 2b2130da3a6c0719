#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nsc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitFinding = 3;

/// Entry point of the `nsc` tool. Returns the process exit code.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

/// Single number: decimal ("0.125", "1e-3"), fraction ("1/8") or power
/// ("2^-4").
double parse_number(std::string_view text);
/// Comma-separated numbers and ranges. A range "a..b" between two powers of
/// the same base steps the exponent by one ("2^-4..2^-14"); between other
/// endpoints whose ratio is a power of two it halves or doubles.
std::vector<double> parse_number_list(std::string_view text);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace nsc::cli
