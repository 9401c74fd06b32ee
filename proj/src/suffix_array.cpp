#include "pbsearch/suffix_array.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace pbsearch {

namespace {

template <typename Sym>
void sais(const Sym* s, int32_t n, int32_t symbol_count, int32_t* sa) {
    if (n == 1) {
        sa[0] = 0;
        return;
    }

    // S/L classification; the sentinel suffix is S-type by definition.
    std::vector<uint8_t> stype(static_cast<size_t>(n));
    stype[static_cast<size_t>(n) - 1] = 1;
    for (int32_t i = n - 2; i >= 0; --i) {
        stype[i] = (s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1])) ? 1 : 0;
    }
    const auto is_lms = [&](int32_t i) { return i > 0 && stype[i] && !stype[i - 1]; };

    std::vector<int32_t> count(static_cast<size_t>(symbol_count), 0);
    for (int32_t i = 0; i < n; ++i) {
        ++count[static_cast<size_t>(s[i])];
    }
    std::vector<int32_t> boundary(static_cast<size_t>(symbol_count));
    const auto bucket_heads = [&] {
        int32_t sum = 0;
        for (int32_t c = 0; c < symbol_count; ++c) {
            boundary[c] = sum;
            sum += count[c];
        }
    };
    const auto bucket_tails = [&] {
        int32_t sum = 0;
        for (int32_t c = 0; c < symbol_count; ++c) {
            sum += count[c];
            boundary[c] = sum;
        }
    };

    // Seeds the LMS suffixes (strategy supplied by the caller), then induces
    // first the L-type and then the S-type suffixes into their buckets.
    const auto induce = [&](auto place_lms) {
        std::fill(sa, sa + n, -1);
        bucket_tails();
        place_lms();
        bucket_heads();
        for (int32_t i = 0; i < n; ++i) {
            int32_t j = sa[i];
            if (j > 0 && !stype[j - 1]) {
                sa[boundary[s[j - 1]]++] = j - 1;
            }
        }
        bucket_tails();
        for (int32_t i = n - 1; i >= 0; --i) {
            int32_t j = sa[i];
            if (j > 0 && stype[j - 1]) {
                sa[--boundary[s[j - 1]]] = j - 1;
            }
        }
    };

    // Pass 1: LMS suffixes in arbitrary order still leave the LMS substrings
    // sorted afterwards.
    induce([&] {
        for (int32_t i = 1; i < n; ++i) {
            if (is_lms(i)) {
                sa[--boundary[s[i]]] = i;
            }
        }
    });

    std::vector<int32_t> sorted_lms;
    sorted_lms.reserve(static_cast<size_t>(n / 2) + 1);
    for (int32_t i = 0; i < n; ++i) {
        if (is_lms(sa[i])) {
            sorted_lms.push_back(sa[i]);
        }
    }
    const int32_t m = static_cast<int32_t>(sorted_lms.size());

    // Name LMS substrings: equal iff same symbols and same types up to and
    // including the next LMS position.
    const auto lms_equal = [&](int32_t a, int32_t b) {
        if (s[a] != s[b]) {
            return false;
        }
        int32_t i = a + 1;
        int32_t j = b + 1;
        while (true) {
            const bool ia = is_lms(i);
            const bool jb = is_lms(j);
            if (ia && jb) {
                return true;
            }
            if (ia != jb || s[i] != s[j] || stype[i] != stype[j]) {
                return false;
            }
            ++i;
            ++j;
        }
    };

    std::vector<int32_t> name_of(static_cast<size_t>(n), -1);
    int32_t names = 0;
    int32_t prev = -1;
    for (int32_t idx = 0; idx < m; ++idx) {
        const int32_t pos = sorted_lms[idx];
        if (prev < 0 || !lms_equal(prev, pos)) {
            ++names;
        }
        name_of[pos] = names - 1;
        prev = pos;
    }

    std::vector<int32_t> lms_pos;
    lms_pos.reserve(static_cast<size_t>(m));
    for (int32_t i = 1; i < n; ++i) {
        if (is_lms(i)) {
            lms_pos.push_back(i);
        }
    }
    std::vector<int32_t> reduced(static_cast<size_t>(m));
    for (int32_t i = 0; i < m; ++i) {
        reduced[i] = name_of[lms_pos[i]];
    }

    std::vector<int32_t> sa1(static_cast<size_t>(m));
    if (names < m) {
        sais<int32_t>(reduced.data(), m, names, sa1.data());
    } else {
        for (int32_t i = 0; i < m; ++i) {
            sa1[reduced[i]] = i;
        }
    }

    // Pass 2: LMS suffixes in their final order; right-to-left keeps the
    // within-bucket order stable.
    induce([&] {
        for (int32_t i = m - 1; i >= 0; --i) {
            const int32_t j = lms_pos[sa1[i]];
            sa[--boundary[s[j]]] = j;
        }
    });
}

} // namespace

std::vector<int32_t> build_suffix_array(std::span<const uint8_t> text, int32_t symbol_count) {
    if (text.empty()) {
        throw std::invalid_argument("suffix array input must contain the sentinel");
    }
    if (text.size() > static_cast<size_t>(INT32_MAX) - 1) {
        throw std::length_error("text too long for 32-bit suffix array construction");
    }
    assert(text.back() == 0);
    std::vector<int32_t> sa(text.size());
    sais<uint8_t>(text.data(), static_cast<int32_t>(text.size()), symbol_count, sa.data());
    return sa;
}

} // namespace pbsearch
