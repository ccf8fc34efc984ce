#include "maskfill/io.hpp"

#include <fstream>
#include <sstream>

#include "maskfill/common.hpp"

namespace maskfill::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) data_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) data_error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) data_error("cannot write " + path.string());
  out << content;
  if (!out) data_error("write failed for " + path.string());
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records) {
  std::string buf;
  for (const auto& r : records) {
    buf += r.dump();
    buf += '\n';
  }
  write_file(path, buf);
}

std::vector<std::pair<std::size_t, json>> read_jsonl(const std::filesystem::path& path) {
  std::vector<std::pair<std::size_t, json>> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    json j = json::parse(lines[i], nullptr, false);
    if (j.is_discarded() || !j.is_object())
      data_error("malformed record at line " + std::to_string(i + 1) + " of " + path.string());
    out.emplace_back(i + 1, std::move(j));
  }
  return out;
}

}  // namespace maskfill::io
