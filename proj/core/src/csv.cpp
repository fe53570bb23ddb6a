#include "profscreen/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "profscreen/error.hpp"

namespace profscreen {

namespace {

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  CsvTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    auto cells = split_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error(ErrorCode::RaggedRows, "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                             " cells, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw Error(ErrorCode::EmptyFile, "no header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text_file(path)); }

bool parse_number(std::string_view cell, double& out) noexcept {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(out);
}

CsvDataset parse_dataset(std::string_view text, std::string_view response) {
  CsvTable table = parse_csv(text);
  if (table.rows.empty()) throw Error(ErrorCode::EmptyFile, "header present but no data rows");

  CsvDataset out;
  out.header = std::move(table.header);
  const auto width = static_cast<Index>(out.header.size());

  Index found = -1;
  int matches = 0;
  for (Index c = 0; c < width; ++c) {
    if (out.header[static_cast<std::size_t>(c)] == response) {
      found = c;
      ++matches;
    }
  }
  if (matches > 1) {
    throw Error(ErrorCode::MissingResponse, "response column '" + std::string(response) + "' appears " +
                                                std::to_string(matches) + " times");
  }
  if (found < 0) {
    int column = 0;
    const auto [ptr, ec] = std::from_chars(response.data(), response.data() + response.size(), column);
    if (ec == std::errc{} && ptr == response.data() + response.size() && column >= 1 && column <= width) {
      found = column - 1;
    }
  }
  if (found < 0) {
    throw Error(ErrorCode::MissingResponse, "no column named '" + std::string(response) + "'");
  }
  out.response_column = found;

  out.matrix.resize(static_cast<Index>(table.rows.size()), width);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (Index c = 0; c < width; ++c) {
      double value = 0.0;
      const std::string& cell = table.rows[r][static_cast<std::size_t>(c)];
      if (!parse_number(cell, value)) {
        throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                                                   " ('" + out.header[static_cast<std::size_t>(c)] + "'): '" + cell +
                                                   "'");
      }
      out.matrix(static_cast<Index>(r), c) = value;
    }
  }
  return out;
}

LoadedData split_dataset(const CsvDataset& data) {
  const Index width = data.matrix.cols();
  LoadedData out;
  out.y = data.matrix.col(data.response_column);
  out.response_name = data.header[static_cast<std::size_t>(data.response_column)];
  out.x.resize(data.matrix.rows(), width - 1);
  Index k = 0;
  for (Index c = 0; c < width; ++c) {
    if (c == data.response_column) continue;
    out.x.col(k++) = data.matrix.col(c);
    out.names.push_back(data.header[static_cast<std::size_t>(c)]);
  }
  return out;
}

LoadedData load_csv(const std::filesystem::path& path, std::string_view response) {
  return split_dataset(parse_dataset(read_text_file(path), response));
}

std::string format_exact(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_dataset_csv(std::ostream& os, const Matrix& x, const Vector& y) {
  os << 'y';
  for (Index j = 0; j < x.cols(); ++j) os << ",x" << (j + 1);
  os << '\n';
  for (Index i = 0; i < x.rows(); ++i) {
    os << format_exact(y(i));
    for (Index j = 0; j < x.cols(); ++j) os << ',' << format_exact(x(i, j));
    os << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace profscreen
