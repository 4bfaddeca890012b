#include "gscat/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gscat/types.hpp"

namespace gscat {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw DomainError("CSV needs at least one column");
}

CsvTable& CsvTable::operator<<(double x) {
  current_.push_back(format_double(x));
  return *this;
}

CsvTable& CsvTable::operator<<(int x) {
  current_.push_back(std::to_string(x));
  return *this;
}

CsvTable& CsvTable::operator<<(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    current_.push_back(s);
    return *this;
  }
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  current_.push_back(q + "\"");
  return *this;
}

void CsvTable::end_row() {
  if (current_.size() != columns_.size())
    throw DomainError("CSV row has " + std::to_string(current_.size()) + " cells, header has " +
                      std::to_string(columns_.size()));
  for (std::size_t i = 0; i < current_.size(); ++i) body_ += (i ? "," : "") + current_[i];
  body_ += "\n";
  current_.clear();
  ++rows_;
}

std::string CsvTable::str() const {
  std::string head;
  for (std::size_t i = 0; i < columns_.size(); ++i) head += (i ? "," : "") + columns_[i];
  return head + "\n" + body_;
}

std::string file_stem(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ? c : '_';
  return out.empty() ? "graph" : out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace gscat
