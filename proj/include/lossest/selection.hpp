#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "lossest/canonical.hpp"
#include "lossest/criteria.hpp"

namespace lossest {

enum class Strategy { exhaustive, forward, backward };
enum class SelectionCriterion { cp, aic, delta0, delta0_inv };

struct SelectionOptions {
  Strategy strategy = Strategy::exhaustive;
  SelectionCriterion criterion = SelectionCriterion::cp;
  VarianceDivisor divisor = VarianceDivisor::residual_df;
  double rank_tol = 1e-10;
};

struct SubsetRow {
  std::vector<int> subset;  // sorted 0-based column indices
  CriterionReport report;
  bool rank_deficient = false;
};

struct SelectionResult {
  std::vector<SubsetRow> rows;
  std::ptrdiff_t selected = -1;  // index into rows
};

/// Visit submodels per the strategy and score each with every criterion.
/// Exhaustive (p <= 20) emits all 2^p subsets ordered by size then
/// lexicographic indices; forward/backward emit the search path, one row
/// per size. The argmin row is chosen by the requested criterion with ties
/// broken by smaller size, then lexicographic subset order.
SelectionResult run_selection(const RegressionData& data,
                              const SelectionOptions& options);

/// Best subset at each size k = 0..p by Cp (exhaustive; p <= 20).
std::vector<SubsetRow> cp_plot_rows(const RegressionData& data,
                                    const SelectionOptions& options);

std::string subset_label(const std::vector<int>& subset,
                         const std::vector<std::string>& names);

void write_selection_tsv(std::ostream& os, const SelectionResult& result,
                         const std::vector<std::string>& names);
void write_cp_plot_tsv(std::ostream& os, const std::vector<SubsetRow>& rows,
                       const std::vector<std::string>& names);

}  // namespace lossest
