#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace growthlab {

// Quotient indices of the constructed sequences pass 2^64 after a handful of
// macro-blocks, so indices are 128-bit signed integers throughout.
__extension__ using Index = __int128;

/// Largest index a constructed sequence may reach.
inline constexpr Index kMaxIndex = Index{1} << 125;

constexpr Index pow2(int e) { return Index{1} << e; }

/// Decimal rendering; std::to_string has no overload for 128-bit integers.
std::string index_to_string(Index k);

/// Parses a decimal string produced by index_to_string. Throws ParameterError.
Index parse_index(std::string_view s);

inline double index_to_double(Index k) { return static_cast<double>(k); }

}  // namespace growthlab
