#include "lossest/csv.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lossest/errors.hpp"

namespace lossest {

namespace {

// Splits one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line, long line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted)
    throw ParseError(line_no, static_cast<long>(line.size()),
                     "unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

double parse_cell(const std::string& cell, long line_no, long col_no) {
  if (cell.empty())
    throw ParseError(line_no, col_no, "empty cell at line " +
                                          std::to_string(line_no) + ", column " +
                                          std::to_string(col_no));
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + cell.size())
    throw ParseError(line_no, col_no,
                     "non-numeric cell '" + cell + "' at line " +
                         std::to_string(line_no) + ", column " +
                         std::to_string(col_no));
  return value;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");

  CsvTable table;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_record(line, line_no);
    if (table.names.empty()) {
      table.names = std::move(fields);
      continue;
    }
    if (fields.size() != table.names.size())
      throw ParseError(line_no, static_cast<long>(fields.size()),
                       "expected " + std::to_string(table.names.size()) +
                           " fields, got " + std::to_string(fields.size()) +
                           " at line " + std::to_string(line_no));
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j)
      row[j] = parse_cell(fields[j], line_no, static_cast<long>(j + 1));
    table.rows.push_back(std::move(row));
  }
  if (table.names.empty()) throw ParseError(0, 0, "empty file '" + path + "'");
  return table;
}

RegressionData make_regression_data(const CsvTable& table,
                                    const std::vector<std::string>& response,
                                    bool intercept) {
  if (response.empty()) throw ConfigError("no response column given");
  std::vector<int> resp_idx;
  for (const std::string& name : response) {
    const auto it = std::find(table.names.begin(), table.names.end(), name);
    if (it == table.names.end())
      throw ConfigError("response column '" + name + "' not found");
    resp_idx.push_back(static_cast<int>(it - table.names.begin()));
  }

  const int rows = static_cast<int>(table.rows.size());
  const int total = static_cast<int>(table.names.size());
  const int m = static_cast<int>(resp_idx.size());
  const int p_raw = total - m;
  if (p_raw < 1) throw ConfigError("no design columns left");

  RegressionData data;
  data.Y.resize(rows, m);
  data.X.resize(rows, p_raw + (intercept ? 1 : 0));
  int col = 0;
  if (intercept) {
    data.X.col(0).setOnes();
    data.names.push_back("(intercept)");
    col = 1;
  }
  for (int j = 0; j < total; ++j) {
    if (std::find(resp_idx.begin(), resp_idx.end(), j) != resp_idx.end())
      continue;
    for (int i = 0; i < rows; ++i) data.X(i, col) = table.rows[i][j];
    data.names.push_back(table.names[j]);
    ++col;
  }
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < rows; ++i) data.Y(i, k) = table.rows[i][resp_idx[k]];
  return data;
}

}  // namespace lossest
