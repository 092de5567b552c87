#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace carpet::cli {

// Default Monte Carlo seed; runs are reproducible unless --seed is given.
inline constexpr unsigned long long kDefaultSeed = 20240521ULL;

// Runs one command line (args excludes the program name). Returns 0 on success,
// 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carpet::cli
