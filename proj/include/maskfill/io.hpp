#ifndef MASKFILL_IO_HPP
#define MASKFILL_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace maskfill::io {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);
// Creates parent directories; throws a data error when the target cannot be written.
void write_file(const std::filesystem::path& path, const std::string& content);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records);
// Parses every non-blank line; errors name the 1-based line number.
std::vector<std::pair<std::size_t, json>> read_jsonl(const std::filesystem::path& path);

}  // namespace maskfill::io

#endif  // MASKFILL_IO_HPP
