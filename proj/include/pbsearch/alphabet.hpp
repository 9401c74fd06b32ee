#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace pbsearch {

/// The fixed, ordered character set a PBS is written in. Encoding maps a
/// word's code-point sum modulo size() onto chars()[remainder].
///
/// The canonical set for size 12 is A,C,D,E,G,H,I,K,L,N,Q,R. Sizes up to 16
/// take a prefix of the extended list A,C,D,E,G,H,I,K,L,N,Q,R,S,T,V,W; sizes
/// 17..26 add letters from B,F,J,M,O,P,U,X,Y,Z and re-sort, so the set stays
/// ascending for every size.
class Alphabet {
  public:
    static constexpr int kMaxSize = 26;

    explicit Alphabet(int size = 12);

    int size() const { return size_; }

    /// Character assigned to a remainder in [0, size).
    char at(int remainder) const { return chars_[static_cast<size_t>(remainder)]; }

    /// Dense code of a character: 0-based position in chars(), or -1 if the
    /// character is not part of this alphabet.
    int code_of(char c) const {
        unsigned char u = static_cast<unsigned char>(c);
        return codes_[u];
    }

    bool contains(char c) const { return code_of(c) >= 0; }

    /// The ordered (ascending) character list.
    std::string_view chars() const { return {chars_.data(), static_cast<size_t>(size_)}; }

    bool operator==(const Alphabet& other) const { return chars() == other.chars(); }

  private:
    int size_;
    std::array<char, kMaxSize> chars_{};
    std::array<int16_t, 256> codes_{};
};

} // namespace pbsearch
