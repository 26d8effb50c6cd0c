#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace stnstretch {

/// key = value lines; '#' starts a comment; blank lines ignored.
/// Throws std::runtime_error with the line number on malformed input.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

std::optional<bool> parse_bool(const std::string& value);

}  // namespace stnstretch
