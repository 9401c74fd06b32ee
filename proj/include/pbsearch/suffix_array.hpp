#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pbsearch {

/// Suffix array of `text` by induced sorting (SA-IS), linear in the text
/// length. `text` is over the dense symbol range [0, symbol_count) and its
/// last symbol must be 0, occurring only there (the sentinel).
std::vector<int32_t> build_suffix_array(std::span<const uint8_t> text, int32_t symbol_count);

} // namespace pbsearch
