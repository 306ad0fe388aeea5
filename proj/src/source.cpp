#include "badger/source.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "badger/diagnostics.hpp"
#include "badger/util.hpp"

namespace fs = std::filesystem;

namespace badger {

SourceFile::SourceFile(std::string path, std::string content)
    : path_(std::move(path)), content_(std::move(content)) {
  line_offsets_.push_back(0);
  for (size_t i = 0; i < content_.size(); ++i) {
    if (content_[i] == '\n' && i + 1 < content_.size()) line_offsets_.push_back(i + 1);
  }
  if (content_.empty()) line_offsets_.clear();
}

std::string SourceFile::line(int line_no) const {
  if (line_no < 1 || line_no > line_count()) return "";
  size_t begin = line_offsets_[line_no - 1];
  size_t end = content_.find('\n', begin);
  if (end == std::string::npos) end = content_.size();
  return content_.substr(begin, end - begin);
}

size_t SourceFile::offset(int line_no, int col) const {
  if (line_no < 1 || line_no > line_count()) return content_.size();
  return line_offsets_[line_no - 1] + static_cast<size_t>(col - 1);
}

std::string SourceFile::slice(int start_line, int start_col, int end_line, int end_col) const {
  size_t b = offset(start_line, start_col);
  size_t e = offset(end_line, end_col);
  if (e > content_.size()) e = content_.size();
  if (b > e) return "";
  return content_.substr(b, e - b);
}

std::vector<SourceFile> load_source_tree(const std::string& root, const std::string& glob) {
  fs::path base(root);
  std::error_code ec;
  if (!fs::exists(base, ec) || !fs::is_directory(base, ec)) {
    throw ToolError(ErrorCode::IoError, "source root is not a readable directory: " + root);
  }

  std::vector<std::string> rel_paths;
  for (auto it = fs::recursive_directory_iterator(base, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw ToolError(ErrorCode::IoError, "cannot walk source tree: " + ec.message());
    if (!it->is_regular_file()) continue;
    if (!glob_match(glob, it->path().filename().string())) continue;
    rel_paths.push_back(fs::relative(it->path(), base).generic_string());
  }
  std::sort(rel_paths.begin(), rel_paths.end());

  std::vector<SourceFile> files;
  files.reserve(rel_paths.size());
  for (const auto& rel : rel_paths) {
    std::ifstream in(base / rel, std::ios::binary);
    if (!in) throw ToolError(ErrorCode::IoError, "cannot read file: " + rel);
    std::ostringstream buf;
    buf << in.rdbuf();
    files.emplace_back(rel, buf.str());
  }
  return files;
}

}  // namespace badger
