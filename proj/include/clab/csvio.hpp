#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace clab::csvio {

// Shortest round-trip decimal form of a double ("%.17g" trimmed), so CSVs are
// byte-stable across runs.
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    std::string str() const;
    // Atomic: writes to a temporary then renames.
    void write(const std::filesystem::path& path) const;

private:
    std::size_t width_;
    std::string body_;
};

std::string cell(double v);
std::string cell(std::uint64_t v);
std::string cell(std::int64_t v);
std::string cell(int v);
std::string cell(const char* v);
std::string cell(const std::string& v);
std::string cell(bool v);

// FNV-1a 64-bit of a file's bytes, as 16 hex digits.
std::string fnv1a_file(const std::filesystem::path& path);

void write_text_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace clab::csvio
