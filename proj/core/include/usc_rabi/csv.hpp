#pragma once

#include <string>
#include <vector>

namespace usc_rabi {

/// 17 significant digits, '.' decimal point, no locale.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  std::string str() const;
  /// Throws std::runtime_error when the file cannot be written.
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace usc_rabi
