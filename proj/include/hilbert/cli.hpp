#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hilbert::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // malformed input, bad flags, k > m, ...
inline constexpr int kExitNumerical = 2;  // NotInImage, NotSpecialOrthogonal, failed checks, ...

/// Seed used when neither --seed nor HILBERT_SEED is given.
inline constexpr unsigned long long kDefaultSeed = 20240607ULL;

/// Runs one command line (args excludes the program name). Data goes to out;
/// errors go to err as a single JSON line {"code", "message", "context"}.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hilbert::cli
