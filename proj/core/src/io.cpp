#include "levylab/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace levylab::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_hex(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%a", x);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("CsvWriter: row width does not match header");
  rows_.push_back(std::move(cells));
}

void CsvWriter::add_numeric_row(const std::vector<double>& values, bool with_hex) {
  std::vector<std::string> cells;
  cells.reserve(values.size() * (with_hex ? 2 : 1));
  for (double v : values) cells.push_back(format_double(v));
  if (with_hex)
    for (double v : values) cells.push_back(format_hex(v));
  add_row(std::move(cells));
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("CsvWriter: cannot open " + path.string());
  for (std::size_t i = 0; i < header_.size(); ++i)
    out << header_[i] << (i + 1 < header_.size() ? "," : "\n");
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_json: cannot open " + path.string());
  out << j.dump(2) << "\n";
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_json: cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

void write_eigenvalues_csv(const std::filesystem::path& dir, const std::vector<double>& eigenvalues,
                           std::uint64_t seed, int n, double alpha) {
  CsvWriter csv({"lambda", "lambda_hex"});
  for (double v : eigenvalues) csv.add_row({format_double(v), format_hex(v)});
  char name[128];
  std::snprintf(name, sizeof(name), "eigenvalues_n%d_alpha%.4g_seed%llu.csv", n, alpha,
                static_cast<unsigned long long>(seed));
  csv.write(dir / name);
}

}  // namespace levylab::io
