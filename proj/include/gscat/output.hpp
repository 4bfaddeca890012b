#pragma once

#include <string>
#include <vector>

namespace gscat {

// %.17g, with inf and nan spelled out
std::string format_double(double x);

// CSV built in memory and written once. Cells are appended left to right;
// end_row() checks the width against the header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  CsvTable& operator<<(double x);
  CsvTable& operator<<(int x);
  CsvTable& operator<<(const std::string& s);
  CsvTable& operator<<(const char* s) { return *this << std::string(s); }
  void end_row();
  const std::vector<std::string>& columns() const { return columns_; }
  int rows() const { return rows_; }
  std::string str() const;

 private:
  std::vector<std::string> columns_, current_;
  std::string body_;
  int rows_ = 0;
};

// graph name made safe for file names: C:10:5 -> C_10_5
std::string file_stem(const std::string& name);
// creates missing directories; replaces the file
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gscat
