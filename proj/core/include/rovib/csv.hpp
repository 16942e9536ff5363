#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace rovib::io {

// Shortest text that parses back to exactly the same double would be
// prettier, but the output contract is fixed at 17 significant digits, which
// also round-trips exactly.
std::string format_double(double value);

// One-header CSV writer with a fixed float format; output is a pure function
// of the values so reruns are byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& file);

  void header(std::span<const std::string> names);
  void row(std::span<const double> values);

 private:
  std::ofstream out_;
};

}  // namespace rovib::io
