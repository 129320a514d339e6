#pragma once

// Independent reference implementations used to derive expected test
// values. These stay brute-force on purpose and must not share code with
// the library paths they check.

#include <cstdint>
#include <string>

#include "lecmeta/frames.hpp"

namespace oracles {

// Plain memoized recursion over the textbook definition.
size_t levenshtein_memo(const std::u32string& a, const std::u32string& b);
size_t levenshtein_memo(const std::string& a, const std::string& b);

double ratio_from_oracle(const std::string& a, const std::string& b);

// Exhaustive cut-point scan maximizing between-class variance.
int otsu_scan(const lecmeta::frames::FrameBuffer& gray);

}  // namespace oracles
