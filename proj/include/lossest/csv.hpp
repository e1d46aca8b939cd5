#pragma once

#include <string>
#include <vector>

#include "lossest/canonical.hpp"

namespace lossest {

/// Parsed CSV: a header row of names and numeric cells below.
struct CsvTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
};

/// Strict numeric CSV with a header row. Double-quoted fields are
/// supported; any non-numeric data cell is a ParseError carrying 1-based
/// line and column. No imputation.
CsvTable read_csv(const std::string& path);

/// Split a table into design and response(s) by column name. When
/// `intercept` is set a leading ones column named "(intercept)" is
/// prepended and counted in p.
RegressionData make_regression_data(const CsvTable& table,
                                    const std::vector<std::string>& response,
                                    bool intercept);

}  // namespace lossest
