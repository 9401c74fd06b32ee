#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pbsearch/alphabet.hpp"
#include "pbsearch/fm_index.hpp"

namespace pbsearch {

/// One reference document as handed to ingest: raw text plus the metadata
/// that ends up in search results.
struct DocumentInput {
    std::string title;
    std::string url;
    std::string text;
    std::string plaintext_path; // optional; kept for snippet rendering
};

/// Registry row describing where a document's words live in the
/// concatenated index text.
struct DocRegistryEntry {
    std::string title;
    std::string url;
    std::string plaintext_path;
    uint64_t word_offset = 0;
    uint64_t word_count = 0;
};

/// A searchable reference corpus: one FM-index over the concatenation of
/// every document's PBS, plus the registry mapping global word positions
/// back to documents. Immutable once built or loaded.
class CorpusDb {
  public:
    struct Location {
        uint32_t doc_id = 0;
        uint64_t local_pos = 0;
        bool operator==(const Location&) const = default;
    };

    CorpusDb() = default;

    /// Encodes each document and indexes the concatenation, in input order.
    /// Throws UsageError on an empty corpus; per-document encoding failures
    /// are aggregated into one ValidationError.
    static CorpusDb ingest(const std::vector<DocumentInput>& documents, const Alphabet& alphabet,
                           FmIndex::Config config = FmIndex::Config());

    /// Same, but the documents are already encoded. `text` must hold the PBS.
    static CorpusDb from_encoded(const std::vector<DocumentInput>& documents,
                                 const Alphabet& alphabet,
                                 FmIndex::Config config = FmIndex::Config());

    /// Maps a global word position to (document, position within document).
    /// Throws std::out_of_range past the end of the indexed text.
    Location resolve(uint64_t global_pos) const;

    const FmIndex& index() const { return index_; }
    const Alphabet& alphabet() const { return index_.alphabet(); }
    std::string_view text() const { return text_; } // concatenated PBS
    size_t doc_count() const { return registry_.size(); }
    const DocRegistryEntry& doc(uint32_t doc_id) const { return registry_.at(doc_id); }
    const std::vector<DocRegistryEntry>& registry() const { return registry_; }
    uint64_t total_words() const { return index_.text_length(); }

    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static CorpusDb load(std::istream& in);
    static CorpusDb load(const std::filesystem::path& path);

  private:
    void validate_registry() const;

    FmIndex index_;
    std::vector<DocRegistryEntry> registry_;
    std::string text_;
};

/// Reads a corpus manifest: one TSV row per document, `path<TAB>title<TAB>url`
/// (url may be empty). Relative paths are resolved against the manifest's
/// directory and each file's contents become DocumentInput::text. Blank lines
/// and lines starting with '#' are skipped. Throws UsageError on malformed
/// rows or unreadable files.
std::vector<DocumentInput> load_manifest(const std::filesystem::path& manifest_path);

} // namespace pbsearch
