#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace clab::config {

// Flat line-oriented key=value text; '#' starts a comment; blank lines
// ignored. Order preserved; duplicate keys keep the last value.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse(const std::string& text);
KeyValues load_file(const std::filesystem::path& path);

std::string trim(const std::string& s);

} // namespace clab::config
