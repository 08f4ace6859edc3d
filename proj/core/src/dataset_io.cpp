#include "sdasel/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "sdasel/errors.hpp"

namespace sdasel {

std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_17g(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  out << 'y';
  for (Index j = 0; j < data.p(); ++j) out << ",x" << (j + 1);
  out << "\r\n";
  for (Index i = 0; i < data.n(); ++i) {
    out << data.y()[static_cast<std::size_t>(i)];
    for (Index j = 0; j < data.p(); ++j) out << ',' << format_shortest(data.x()(i, j));
    out << "\r\n";
  }
}

std::string dataset_to_csv(const Dataset& data) {
  std::ostringstream out;
  write_dataset_csv(out, data);
  return out.str();
}

namespace {

[[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string& what) {
  std::ostringstream msg;
  msg << "csv: line " << line << ", column " << column << ": " << what;
  throw InvalidArgument(msg.str());
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw InvalidArgument("csv: empty input, expected header `y,x1,...`");

  const auto header = split_fields(trim(line));
  if (trim(header[0]) != "y") fail_at(line_no, 1, "first header field must be `y`");
  const auto p = static_cast<Index>(header.size()) - 1;
  if (p < 1) fail_at(line_no, 1, "header declares no feature columns");
  std::size_t column = header[0].size() + 2;
  for (Index j = 1; j <= p; ++j) {
    const auto name = trim(header[static_cast<std::size_t>(j)]);
    if (name != "x" + std::to_string(j)) fail_at(line_no, column, "expected header field x" + std::to_string(j));
    column += header[static_cast<std::size_t>(j)].size() + 1;
  }

  std::vector<double> values;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    const auto fields = split_fields(row);
    if (static_cast<Index>(fields.size()) != p + 1) {
      fail_at(line_no, 1, "expected " + std::to_string(p + 1) + " fields, found " + std::to_string(fields.size()));
    }
    std::size_t col = 1;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const auto text = trim(fields[f]);
      if (f == 0) {
        int label = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), label);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || (label != 1 && label != 2)) {
          fail_at(line_no, col, "label must be 1 or 2, got '" + std::string(text) + "'");
        }
        labels.push_back(label);
      } else {
        double value = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
          fail_at(line_no, col, "not a number: '" + std::string(text) + "'");
        }
        values.push_back(value);
      }
      col += fields[f].size() + 1;
    }
  }

  const auto n = static_cast<Index>(labels.size());
  Matrix x(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) x(i, j) = values[static_cast<std::size_t>(i * p + j)];
  }
  return Dataset(std::move(x), std::move(labels));
}

Dataset parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  return read_dataset_csv(in);
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("csv: cannot open '" + path + "'");
  return read_dataset_csv(in);
}

void save_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("csv: cannot write '" + path + "'");
  write_dataset_csv(out, data);
}

}  // namespace sdasel
