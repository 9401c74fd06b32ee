// Search throughput on a synthetic index: random encoded text, random
// substring queries, wall-clock rates for the indexed path and a naive
// scanner on a subset.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "pbsearch/fm_index.hpp"

using namespace pbsearch;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

size_t naive_count(std::string_view text, std::string_view pattern) {
    size_t hits = 0;
    for (size_t pos = text.find(pattern); pos != std::string_view::npos;
         pos = text.find(pattern, pos + 1))
        ++hits;
    return hits;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"index throughput benchmark"};
    size_t chars = 10'000'000;
    size_t queries = 100'000;
    size_t qlen = 12;
    size_t naive_queries = 200;
    uint64_t seed = 1234;
    int a = 12;
    app.add_option("--chars", chars, "index size, characters");
    app.add_option("--queries", queries, "number of timed queries");
    app.add_option("--qlen", qlen, "query length, characters");
    app.add_option("--naive", naive_queries, "queries given to the naive scanner");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--a", a, "alphabet size")->check(CLI::Range(1, 26));
    CLI11_PARSE(app, argc, argv);

    Alphabet alphabet(a);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, alphabet.size() - 1);

    std::string text(chars, 'A');
    for (char& c : text) c = alphabet.at(pick(rng));

    std::printf("indexing %zu chars (alphabet %d)...\n", chars, a);
    auto t0 = clock_type::now();
    FmIndex index = FmIndex::build(text, alphabet);
    std::printf("  built in %.2fs\n", seconds_since(t0));

    // Substrings of the text itself, so most queries have at least one hit.
    std::vector<std::string> patterns;
    patterns.reserve(queries);
    std::uniform_int_distribution<size_t> start(0, chars - qlen);
    for (size_t i = 0; i < queries; ++i) patterns.push_back(text.substr(start(rng), qlen));

    for (size_t i = 0; i < 1000 && i < queries; ++i) index.backward_search(patterns[i]); // warm-up

    uint64_t sink = 0;
    t0 = clock_type::now();
    for (const std::string& p : patterns) sink += index.backward_search(p).count();
    double indexed_s = seconds_since(t0);
    double chars_per_s = static_cast<double>(queries * qlen) / indexed_s;
    std::printf("indexed search: %zu queries in %.3fs, %.2fM query chars/s (%llu hits)\n", queries,
                indexed_s, chars_per_s / 1e6, static_cast<unsigned long long>(sink));

    if (naive_queries > queries) naive_queries = queries;
    uint64_t naive_sink = 0;
    t0 = clock_type::now();
    for (size_t i = 0; i < naive_queries; ++i) naive_sink += naive_count(text, patterns[i]);
    double naive_s = seconds_since(t0);
    double naive_per_query = naive_s / static_cast<double>(naive_queries);
    double indexed_per_query = indexed_s / static_cast<double>(queries);
    std::printf("naive scan:     %zu queries in %.3fs (%llu hits)\n", naive_queries, naive_s,
                static_cast<unsigned long long>(naive_sink));
    std::printf("speedup: %.0fx\n", naive_per_query / indexed_per_query);
    return 0;
}
