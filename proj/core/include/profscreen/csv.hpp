#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "profscreen/matrix_core.hpp"

namespace profscreen {

/// Header plus string cells of a comma-separated file. Every row has the
/// header's width (RaggedRows otherwise).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Numeric dataset with one response column and the predictors in file order.
struct CsvDataset {
  std::vector<std::string> header;
  Index response_column = 0;
  Matrix matrix;  // n x (p + 1), including the response
};

struct LoadedData {
  Matrix x;  // raw predictors, n x p
  Vector y;  // raw response
  std::vector<std::string> names;  // predictor names
  std::string response_name;
};

/// `response` is a header name or, failing that, a 1-based column number.
/// Errors: EmptyFile, RaggedRows, NonNumericCell (with row/column),
/// MissingResponse.
CsvDataset parse_dataset(std::string_view text, std::string_view response);
LoadedData split_dataset(const CsvDataset& data);
LoadedData load_csv(const std::filesystem::path& path, std::string_view response);

/// Parses a finite double, ignoring surrounding blanks. Returns false
/// when the cell is not a number.
bool parse_number(std::string_view cell, double& out) noexcept;

/// 17 significant digits, enough to round-trip every double.
std::string format_exact(double value);

/// Writes "y,x1,...,xp" followed by one row per sample.
void write_dataset_csv(std::ostream& os, const Matrix& x, const Vector& y);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace profscreen
