#include "minicheck/source.hpp"

namespace minicheck {

FileId SourceManager::add_file(std::string name, std::string content) {
  File f;
  f.name = std::move(name);
  f.content = std::move(content);
  f.line_offsets.push_back(0);
  for (size_t i = 0; i < f.content.size(); ++i) {
    if (f.content[i] == '\n') f.line_offsets.push_back(i + 1);
  }
  files_.push_back(std::move(f));
  return static_cast<FileId>(files_.size() - 1);
}

FileId SourceManager::find_file(std::string_view name) const {
  for (size_t i = 0; i < files_.size(); ++i) {
    if (files_[i].name == name) return static_cast<FileId>(i);
  }
  return -1;
}

const std::string& SourceManager::file_name(FileId id) const {
  return files_.at(static_cast<size_t>(id)).name;
}

const std::string& SourceManager::file_content(FileId id) const {
  return files_.at(static_cast<size_t>(id)).content;
}

std::string_view SourceManager::text_at(const SourceSpan& span) const {
  if (span.file < 0 || span.file >= file_count()) return {};
  const File& f = files_[static_cast<size_t>(span.file)];
  if (span.line < 1 || static_cast<size_t>(span.line) > f.line_offsets.size())
    return {};
  size_t start = f.line_offsets[static_cast<size_t>(span.line - 1)] +
                 static_cast<size_t>(span.col - 1);
  if (start > f.content.size()) return {};
  size_t len = static_cast<size_t>(span.length);
  if (start + len > f.content.size()) len = f.content.size() - start;
  return std::string_view(f.content).substr(start, len);
}

std::string format_location(const SourceManager& sm, const SourceSpan& span) {
  if (!span.valid()) return "<unknown>";
  return sm.file_name(span.file) + ":" + std::to_string(span.line) + ":" +
         std::to_string(span.col);
}

std::string format_origin(const MacroOrigin& origin) {
  if (origin.empty()) return "direct";
  std::string out;
  for (size_t i = 0; i < origin.size(); ++i) {
    if (i) out += "<-";
    out += origin[i].name;
  }
  return out;
}

}  // namespace minicheck
