#include "lossest/selection.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "lossest/errors.hpp"
#include "lossest/numeric.hpp"

namespace lossest {

namespace {

double criterion_value(const CriterionReport& rep, SelectionCriterion crit) {
  switch (crit) {
    case SelectionCriterion::cp:
      return rep.cp;
    case SelectionCriterion::aic:
      return rep.aic;
    case SelectionCriterion::delta0:
      return rep.delta0;
    case SelectionCriterion::delta0_inv:
      if (!rep.delta0_inv)
        throw DimensionError("delta0_inv is unavailable for this dataset");
      return *rep.delta0_inv;
  }
  throw InvalidParameter("unknown criterion");
}

// Ties: smaller subset first, then lexicographic index order.
bool subset_before(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

SubsetRow score_subset(const RegressionData& data, const CanonicalForm& cf,
                       std::vector<int> subset, const SelectionOptions& opt) {
  SubsetRow row;
  row.subset = std::move(subset);
  ReportOptions ropt;
  ropt.divisor = opt.divisor;
  ropt.rank_tol = opt.rank_tol;
  try {
    row.report = report_with_canonical(
        EstimatorSpec::least_squares_subset(row.subset), data, cf, ropt);
  } catch (const RankDeficient&) {
    row.rank_deficient = true;
  }
  return row;
}

// All index subsets of {0..p-1} ordered by size then lexicographically.
void for_each_subset(int p, const std::function<void(std::vector<int>&)>& fn) {
  std::vector<int> subset;
  for (int k = 0; k <= p; ++k) {
    subset.assign(k, 0);
    for (int i = 0; i < k; ++i) subset[i] = i;
    for (;;) {
      fn(subset);
      int i = k - 1;
      while (i >= 0 && subset[i] == p - k + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
}

std::ptrdiff_t argmin_row(const std::vector<SubsetRow>& rows,
                          SelectionCriterion crit) {
  std::ptrdiff_t best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rank_deficient) continue;
    const double v = criterion_value(rows[i].report, crit);
    if (best < 0 || v < best_value ||
        (v == best_value &&
         subset_before(rows[i].subset, rows[static_cast<std::size_t>(best)].subset))) {
      best = static_cast<std::ptrdiff_t>(i);
      best_value = v;
    }
  }
  return best;
}

std::vector<SubsetRow> greedy_path(const RegressionData& data,
                                   const CanonicalForm& cf,
                                   const SelectionOptions& opt, bool forward) {
  const int p = data.p();
  std::vector<SubsetRow> rows;
  std::vector<int> current;
  if (!forward) {
    current.resize(p);
    for (int i = 0; i < p; ++i) current[i] = i;
  }
  rows.push_back(score_subset(data, cf, current, opt));

  for (int step = 0; step < p; ++step) {
    SubsetRow best;
    bool have = false;
    if (forward) {
      for (int j = 0; j < p; ++j) {
        if (std::find(current.begin(), current.end(), j) != current.end())
          continue;
        std::vector<int> cand = current;
        cand.push_back(j);
        std::sort(cand.begin(), cand.end());
        SubsetRow row = score_subset(data, cf, std::move(cand), opt);
        if (row.rank_deficient) continue;
        if (!have ||
            criterion_value(row.report, opt.criterion) <
                criterion_value(best.report, opt.criterion) ||
            (criterion_value(row.report, opt.criterion) ==
                 criterion_value(best.report, opt.criterion) &&
             subset_before(row.subset, best.subset))) {
          best = std::move(row);
          have = true;
        }
      }
    } else {
      for (int drop : current) {
        std::vector<int> cand;
        for (int j : current)
          if (j != drop) cand.push_back(j);
        SubsetRow row = score_subset(data, cf, std::move(cand), opt);
        if (row.rank_deficient && !row.subset.empty()) continue;
        if (!have ||
            criterion_value(row.report, opt.criterion) <
                criterion_value(best.report, opt.criterion) ||
            (criterion_value(row.report, opt.criterion) ==
                 criterion_value(best.report, opt.criterion) &&
             subset_before(row.subset, best.subset))) {
          best = std::move(row);
          have = true;
        }
      }
    }
    if (!have) break;
    current = best.subset;
    rows.push_back(std::move(best));
  }
  return rows;
}

}  // namespace

SelectionResult run_selection(const RegressionData& data,
                              const SelectionOptions& options) {
  const int p = data.p();
  if (options.strategy == Strategy::exhaustive && p > 20)
    throw InvalidParameter("exhaustive search refused for p > 20");

  const CanonicalForm cf = factorize(data, options.rank_tol);

  SelectionResult result;
  if (options.strategy == Strategy::exhaustive) {
    for_each_subset(p, [&](std::vector<int>& subset) {
      result.rows.push_back(score_subset(data, cf, subset, options));
    });
  } else {
    result.rows = greedy_path(data, cf, options,
                              options.strategy == Strategy::forward);
  }
  result.selected = argmin_row(result.rows, options.criterion);
  return result;
}

std::vector<SubsetRow> cp_plot_rows(const RegressionData& data,
                                    const SelectionOptions& options) {
  const int p = data.p();
  if (p > 20) throw InvalidParameter("cp-plot enumeration refused for p > 20");
  const CanonicalForm cf = factorize(data, options.rank_tol);

  std::vector<SubsetRow> best(p + 1);
  std::vector<bool> have(p + 1, false);
  for_each_subset(p, [&](std::vector<int>& subset) {
    SubsetRow row = score_subset(data, cf, subset, options);
    if (row.rank_deficient) return;
    const std::size_t k = row.subset.size();
    if (!have[k] || row.report.cp < best[k].report.cp) {
      best[k] = std::move(row);
      have[k] = true;
    }
  });

  std::vector<SubsetRow> out;
  for (int k = 0; k <= p; ++k)
    if (have[k]) out.push_back(std::move(best[k]));
  return out;
}

std::string subset_label(const std::vector<int>& subset,
                         const std::vector<std::string>& names) {
  if (subset.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) out += ",";
    const int idx = subset[i];
    if (idx >= 0 && static_cast<std::size_t>(idx) < names.size())
      out += names[idx];
    else
      out += "x" + std::to_string(idx);
  }
  return out;
}

void write_selection_tsv(std::ostream& os, const SelectionResult& result,
                         const std::vector<std::string>& names) {
  os << "subset\tsize\tdf\trss\tsigma2_hat\tcp\taic\tdelta0\tdelta0_inv\t"
        "status\tselected\n";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SubsetRow& row = result.rows[i];
    os << subset_label(row.subset, names) << "\t" << row.subset.size() << "\t";
    if (row.rank_deficient) {
      os << "NA\tNA\tNA\tNA\tNA\tNA\tNA\trank_deficient\t-\n";
      continue;
    }
    const CriterionReport& r = row.report;
    os << format_g17(r.df) << "\t" << format_g17(r.rss) << "\t"
       << format_g17(r.sigma2_hat) << "\t" << format_g17(r.cp) << "\t"
       << format_g17(r.aic) << "\t" << format_g17(r.delta0) << "\t"
       << (r.delta0_inv ? format_g17(*r.delta0_inv) : std::string("NA"))
       << "\tok\t"
       << (static_cast<std::ptrdiff_t>(i) == result.selected ? "*" : "-")
       << "\n";
  }
}

void write_cp_plot_tsv(std::ostream& os, const std::vector<SubsetRow>& rows,
                       const std::vector<std::string>& names) {
  os << "k\tsubset\tcp\n";
  for (const SubsetRow& row : rows) {
    os << row.subset.size() << "\t" << subset_label(row.subset, names) << "\t"
       << format_g17(row.report.cp) << "\n";
  }
}

}  // namespace lossest
