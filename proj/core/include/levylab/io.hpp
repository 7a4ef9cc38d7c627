#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace levylab::io {

using json = nlohmann::ordered_json;

// Decimal with 17 significant digits (round-trips a double exactly).
std::string format_double(double x);
// C hexfloat, for bit-exact archival.
std::string format_hex(double x);

// Rows of pre-formatted cells; commas are not escaped (numeric data only).
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  void add_numeric_row(const std::vector<double>& values, bool with_hex = false);
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

// One column of eigenvalues, decimal plus hexfloat, keyed by seed in the name.
void write_eigenvalues_csv(const std::filesystem::path& dir, const std::vector<double>& eigenvalues,
                           std::uint64_t seed, int n, double alpha);

}  // namespace levylab::io
