#include "pbsearch/corpus_db.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pbsearch/encoder.hpp"
#include "pbsearch/errors.hpp"
#include "pbsearch/io_util.hpp"

namespace pbsearch {

using io::CrcReader;
using io::CrcWriter;

CorpusDb CorpusDb::ingest(const std::vector<DocumentInput>& documents, const Alphabet& alphabet,
                          FmIndex::Config config) {
    std::vector<DocumentInput> encoded = documents;
    std::string failures;
    for (size_t i = 0; i < documents.size(); ++i) {
        try {
            encoded[i].text = encode_document(documents[i].title, documents[i].text, alphabet).pbs;
        } catch (const std::exception& e) {
            failures += "  doc " + std::to_string(i) + " (" + documents[i].title + "): " +
                        e.what() + "\n";
        }
    }
    if (!failures.empty())
        throw ValidationError("failed to encode corpus documents:\n" + failures);
    return from_encoded(encoded, alphabet, config);
}

CorpusDb CorpusDb::from_encoded(const std::vector<DocumentInput>& documents,
                                const Alphabet& alphabet, FmIndex::Config config) {
    if (documents.empty()) throw UsageError("corpus must contain at least one document");

    CorpusDb db;
    db.registry_.reserve(documents.size());
    uint64_t offset = 0;
    for (const DocumentInput& doc : documents) {
        db.registry_.push_back({doc.title, doc.url, doc.plaintext_path, offset,
                                doc.text.size()});
        db.text_ += doc.text;
        offset += doc.text.size();
    }
    db.index_ = FmIndex::build(db.text_, alphabet, config);
    return db;
}

CorpusDb::Location CorpusDb::resolve(uint64_t global_pos) const {
    if (global_pos >= index_.text_length())
        throw std::out_of_range("word position " + std::to_string(global_pos) +
                                " past end of corpus (" +
                                std::to_string(index_.text_length()) + " words)");
    // Offsets are contiguous, so the covering entry is the last one whose
    // offset is <= global_pos (empty documents sort before it).
    auto it = std::upper_bound(registry_.begin(), registry_.end(), global_pos,
                               [](uint64_t pos, const DocRegistryEntry& e) {
                                   return pos < e.word_offset;
                               });
    --it;
    return {static_cast<uint32_t>(it - registry_.begin()), global_pos - it->word_offset};
}

void CorpusDb::save(std::ostream& out) const {
    index_.save(out);
    CrcWriter w(out);
    w.write_u32(static_cast<uint32_t>(registry_.size()));
    for (const DocRegistryEntry& e : registry_) {
        w.write_string(e.title);
        w.write_string(e.url);
        w.write_string(e.plaintext_path);
        w.write_u64(e.word_offset);
        w.write_u64(e.word_count);
    }
    if (!out) throw Error("failed writing database stream");
}

void CorpusDb::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    save(out);
}

CorpusDb CorpusDb::load(std::istream& in) {
    CorpusDb db;
    db.index_ = FmIndex::load(in);
    CrcReader r(in);
    uint32_t count = r.read_u32();
    db.registry_.resize(count);
    for (DocRegistryEntry& e : db.registry_) {
        e.title = r.read_string();
        e.url = r.read_string();
        e.plaintext_path = r.read_string();
        e.word_offset = r.read_u64();
        e.word_count = r.read_u64();
    }
    db.validate_registry();
    db.text_ = db.index_.extract_text();
    return db;
}

CorpusDb CorpusDb::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path.string());
    return load(in);
}

void CorpusDb::validate_registry() const {
    uint64_t expected_offset = 0;
    for (const DocRegistryEntry& e : registry_) {
        if (e.word_offset != expected_offset)
            throw ValidationError("registry offsets are not contiguous");
        expected_offset += e.word_count;
    }
    if (expected_offset != index_.text_length())
        throw ValidationError("registry word counts disagree with index length");
}

std::vector<DocumentInput> load_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw UsageError("cannot open manifest: " + manifest_path.string());
    const std::filesystem::path base = manifest_path.parent_path();

    std::vector<DocumentInput> docs;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        size_t tab1 = line.find('\t');
        if (tab1 == std::string::npos)
            throw UsageError("manifest line " + std::to_string(line_no) +
                             ": expected path<TAB>title[<TAB>url]");
        size_t tab2 = line.find('\t', tab1 + 1);

        DocumentInput doc;
        std::filesystem::path path = line.substr(0, tab1);
        if (path.is_relative()) path = base / path;
        doc.title = tab2 == std::string::npos ? line.substr(tab1 + 1)
                                              : line.substr(tab1 + 1, tab2 - tab1 - 1);
        if (tab2 != std::string::npos) doc.url = line.substr(tab2 + 1);
        doc.plaintext_path = path.string();
        if (doc.title.empty())
            throw UsageError("manifest line " + std::to_string(line_no) + ": empty title");

        std::ifstream file(path, std::ios::binary);
        if (!file)
            throw UsageError("manifest line " + std::to_string(line_no) +
                             ": cannot read " + path.string());
        std::ostringstream buf;
        buf << file.rdbuf();
        doc.text = std::move(buf).str();
        docs.push_back(std::move(doc));
    }
    if (docs.empty())
        throw UsageError("manifest lists no documents: " + manifest_path.string());
    return docs;
}

} // namespace pbsearch
