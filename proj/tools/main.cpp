#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lossest/config.hpp"
#include "lossest/csv.hpp"
#include "lossest/errors.hpp"
#include "lossest/numeric.hpp"
#include "lossest/selection.hpp"
#include "lossest/suite.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitRank = 3;
constexpr int kExitDimension = 4;
constexpr int kExitVerifyFailed = 5;

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw lossest::ConfigError("cannot write '" + out_path + "'");
  out << content;
}

struct CommonArgs {
  std::string input;
  std::vector<std::string> response;
  std::string out;
  bool intercept = true;
  double rank_tol = 1e-10;
};

lossest::RegressionData load_data(const CommonArgs& args) {
  const lossest::CsvTable table = lossest::read_csv(args.input);
  return lossest::make_regression_data(table, args.response, args.intercept);
}

int run_verify(const std::string& config_path, const std::string& out_path,
               std::uint64_t seed_override, bool have_seed) {
  lossest::VerifyJob job = lossest::read_verify_config(config_path);
  if (have_seed) job.seed = seed_override;

  if (job.checks.empty()) {
    for (const auto& check : lossest::default_suite())
      job.checks.push_back({check.name, std::nullopt, std::nullopt});
  }
  for (const auto& req : job.checks) {
    if (lossest::find_check(req.name) == nullptr)
      throw lossest::ConfigError("unknown check '" + req.name + "'");
    const long reps = req.replications.value_or(job.replications);
    if (reps < job.min_replications)
      throw lossest::ConfigError(
          "UnderpoweredRun: " + req.name + " requests " + std::to_string(reps) +
          " replications, floor is " + std::to_string(job.min_replications));
  }

  std::ostringstream table;
  table << "check\tlhs\trhs\tlhs_se\trhs_se\tdiff_se\tz\treplications\tresult\n";
  bool all_pass = true;
  for (const auto& req : job.checks) {
    const lossest::SuiteCheck* check = lossest::find_check(req.name);
    const long reps = req.replications.value_or(job.replications);
    const std::uint64_t seed = req.seed.value_or(job.seed);
    const lossest::IdentityReport rep = check->run(seed, reps);
    const bool pass = rep.pass(job.z_threshold);
    all_pass = all_pass && pass;
    table << req.name << "\t" << lossest::format_g17(rep.lhs_mean) << "\t"
          << lossest::format_g17(rep.rhs_mean) << "\t"
          << lossest::format_g17(rep.lhs_se) << "\t"
          << lossest::format_g17(rep.rhs_se) << "\t"
          << lossest::format_g17(rep.diff_se) << "\t"
          << lossest::format_g17(rep.z_score) << "\t" << rep.replications
          << "\t" << (pass ? "pass" : "fail") << "\n";
    std::cerr << (pass ? "[pass] " : "[FAIL] ") << req.name
              << "  z=" << rep.z_score << "\n";
  }
  write_output(out_path, table.str());
  return all_pass ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model selection criteria and Monte Carlo identity checks"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string strategy = "exhaustive";
  std::string criterion = "cp";
  std::string divisor = "n-p";
  std::uint64_t seed = 0;

  CLI::App* select = app.add_subcommand("select", "Score submodels and mark the argmin");
  select->add_option("--input", args.input, "CSV with a header row")->required();
  select->add_option("--response", args.response, "response column name")->required();
  select->add_option("--strategy", strategy, "exhaustive|forward|backward");
  select->add_option("--criterion", criterion, "cp|aic|delta0|delta0-inv");
  select->add_option("--sigma2-divisor", divisor, "n-p|n-p-2");
  select->add_flag("--intercept,!--no-intercept", args.intercept,
                   "prepend a ones column (default on)");
  select->add_option("--rank-tol", args.rank_tol, "rank tolerance");
  select->add_option("--seed", seed, "accepted for interface compatibility");
  select->add_option("--out", args.out, "output path (default stdout)");

  CLI::App* cpplot = app.add_subcommand("cp-plot", "Best Cp per subset size");
  cpplot->add_option("--input", args.input, "CSV with a header row")->required();
  cpplot->add_option("--response", args.response, "response column name")->required();
  cpplot->add_flag("--intercept,!--no-intercept", args.intercept,
                   "prepend a ones column (default on)");
  cpplot->add_option("--rank-tol", args.rank_tol, "rank tolerance");
  cpplot->add_option("--out", args.out, "output path (default stdout)");

  std::string config_path;
  CLI::App* verify = app.add_subcommand("verify", "Run registered identity checks");
  verify->add_option("--config", config_path, "verification config")->required();
  CLI::Option* seed_opt =
      verify->add_option("--seed", seed, "override the config seed");
  verify->add_option("--out", args.out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (select->parsed()) {
      lossest::SelectionOptions opt;
      if (strategy == "exhaustive")
        opt.strategy = lossest::Strategy::exhaustive;
      else if (strategy == "forward")
        opt.strategy = lossest::Strategy::forward;
      else if (strategy == "backward")
        opt.strategy = lossest::Strategy::backward;
      else
        throw lossest::ConfigError("unknown strategy '" + strategy + "'");
      if (criterion == "cp")
        opt.criterion = lossest::SelectionCriterion::cp;
      else if (criterion == "aic")
        opt.criterion = lossest::SelectionCriterion::aic;
      else if (criterion == "delta0")
        opt.criterion = lossest::SelectionCriterion::delta0;
      else if (criterion == "delta0-inv" || criterion == "delta0_inv")
        opt.criterion = lossest::SelectionCriterion::delta0_inv;
      else
        throw lossest::ConfigError("unknown criterion '" + criterion + "'");
      if (divisor == "n-p")
        opt.divisor = lossest::VarianceDivisor::residual_df;
      else if (divisor == "n-p-2")
        opt.divisor = lossest::VarianceDivisor::residual_df_minus_2;
      else
        throw lossest::ConfigError("unknown divisor '" + divisor + "'");
      opt.rank_tol = args.rank_tol;

      const lossest::RegressionData data = load_data(args);
      lossest::SelectionResult result;
      try {
        result = lossest::run_selection(data, opt);
      } catch (const lossest::RankDeficient& e) {
        throw lossest::RankDeficient(
            e.column, std::string(e.what()) + " (column '" +
                          data.names.at(e.column) + "')");
      }
      std::ostringstream os;
      lossest::write_selection_tsv(os, result, data.names);
      write_output(args.out, os.str());
      return 0;
    }
    if (cpplot->parsed()) {
      lossest::SelectionOptions opt;
      opt.rank_tol = args.rank_tol;
      const lossest::RegressionData data = load_data(args);
      std::vector<lossest::SubsetRow> rows;
      try {
        rows = lossest::cp_plot_rows(data, opt);
      } catch (const lossest::RankDeficient& e) {
        throw lossest::RankDeficient(
            e.column, std::string(e.what()) + " (column '" +
                          data.names.at(e.column) + "')");
      }
      std::ostringstream os;
      lossest::write_cp_plot_tsv(os, rows, data.names);
      write_output(args.out, os.str());
      return 0;
    }
    if (verify->parsed())
      return run_verify(config_path, args.out, seed, seed_opt->count() > 0);
  } catch (const lossest::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const lossest::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitParse;
  } catch (const lossest::RankDeficient& e) {
    std::cerr << "rank error: " << e.what() << "\n";
    return kExitRank;
  } catch (const lossest::DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
