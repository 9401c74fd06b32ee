#include "pbsearch/alphabet.hpp"

#include <algorithm>
#include <stdexcept>
#include <string_view>

namespace pbsearch {

namespace {
// First 16 follow the amino-acid-style set used by the encoder; the tail
// letters only exist so sizes up to 26 stay well defined.
constexpr std::string_view kBase16 = "ACDEGHIKLNQRSTVW";
constexpr std::string_view kExtra10 = "BFJMOPUXYZ";
} // namespace

Alphabet::Alphabet(int size) : size_(size) {
    if (size < 1 || size > kMaxSize) {
        throw std::invalid_argument("alphabet size must be in [1, 26]");
    }
    std::string chars;
    if (size <= static_cast<int>(kBase16.size())) {
        chars.assign(kBase16.substr(0, static_cast<size_t>(size)));
    } else {
        chars.assign(kBase16);
        chars.append(kExtra10.substr(0, static_cast<size_t>(size) - kBase16.size()));
        std::sort(chars.begin(), chars.end());
    }
    codes_.fill(-1);
    for (int i = 0; i < size_; ++i) {
        chars_[static_cast<size_t>(i)] = chars[static_cast<size_t>(i)];
        codes_[static_cast<unsigned char>(chars[static_cast<size_t>(i)])] = static_cast<int16_t>(i);
    }
}

} // namespace pbsearch
