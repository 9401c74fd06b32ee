#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pbsearch {

struct ZipEntry {
    std::string name;
    std::string data;
};

/// Builds a zip archive holding the entries uncompressed (stored method),
/// with fixed timestamps so identical input yields identical bytes. Throws
/// ValidationError on empty or duplicate entry names.
std::string write_zip(const std::vector<ZipEntry>& entries);

/// Parses a zip archive; handles stored and deflated entries, verifies
/// sizes and CRCs. Throws ValidationError on anything malformed. Entries
/// come back in central-directory order; directories are skipped.
std::vector<ZipEntry> read_zip(std::string_view bytes);

} // namespace pbsearch
