#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace badger {

// One source file of the analyzed codebase. Paths are relative to the
// codebase root and unique within it.
class SourceFile {
 public:
  SourceFile() = default;
  SourceFile(std::string path, std::string content);

  const std::string& path() const { return path_; }
  const std::string& content() const { return content_; }

  int line_count() const { return static_cast<int>(line_offsets_.size()); }

  // Verbatim text of a 1-based line, without the trailing newline.
  std::string line(int line_no) const;

  // Byte offset of (1-based line, 1-based col).
  size_t offset(int line_no, int col) const;

  // Substring between two (line, col) points, end-exclusive on the
  // character following the region.
  std::string slice(int start_line, int start_col, int end_line, int end_col) const;

 private:
  std::string path_;
  std::string content_;
  std::vector<size_t> line_offsets_;  // start offset of each line, in order
};

// Loads every file matching `glob` (against the file name) under `root`,
// recursively, with paths relative to root in lexicographic order.
std::vector<SourceFile> load_source_tree(const std::string& root, const std::string& glob);

}  // namespace badger
