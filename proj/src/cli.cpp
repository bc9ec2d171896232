#include "seqlogit/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "seqlogit/model_io.hpp"
#include "seqlogit/selector.hpp"
#include "seqlogit/synth.hpp"

namespace seqlogit {

namespace {

struct CliConfig {
  std::string input;
  std::string label;
  std::string criterion = "aic";
  std::string direction = "forward";
  std::string method = "bnb-pwl";
  std::string tangents = "default17";
  double time_limit = 600.0;
  std::string output;
  std::vector<std::string> features;
  std::vector<std::string> drop;
  double missing_threshold = 0.10;
  std::string approx = "pwl";
  std::string encoding = "bigm";
  double big_m = 100.0;
  std::uint64_t seed = 1;
  long n = 200;
  long p = 8;
  int m = 2;
  long true_features = 3;
  std::string truth_output;
  bool parallel = false;
  int verbosity = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double default_time_limit() {
  if (const char* env = std::getenv("SEQLOGIT_TIME_LIMIT")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0) return v;
  }
  return 600.0;
}

TangentSet load_tangents(const std::string& source) {
  if (source == "default17") return default_tangents();
  return make_tangents<double>(read_tangent_file(source));
}

Dataset load_dataset(const CliConfig& cfg) {
  PreprocessOptions opts;
  opts.missing_column_threshold = cfg.missing_threshold;
  opts.drop_columns = cfg.drop;
  return preprocess(load_csv(cfg.input, cfg.label), opts);
}

SelectionProblem make_problem(const CliConfig& cfg, Approx approx, TangentSet tangents) {
  Dataset data = load_dataset(cfg);
  SelectionProblem prob = SelectionProblem::make(std::move(data), parse_direction(cfg.direction),
                                                 parse_criterion(cfg.criterion), approx, std::move(tangents));
  prob.time_limit_s = cfg.time_limit;
  prob.parallel = cfg.parallel;
  return prob;
}

void attach_data_warnings(const SelectionProblem& prob, SelectionReport& rep) {
  rep.warnings.insert(rep.warnings.begin(), prob.data.warnings.begin(), prob.data.warnings.end());
}

void emit_report(const CliConfig& cfg, const SelectionReport& rep, std::ostream& err) {
  if (cfg.verbosity > 0)
    for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
  if (!cfg.output.empty()) write_report(rep, cfg.output);
}

int run_select(const CliConfig& cfg, bool tangents_given, std::ostream& out, std::ostream& err) {
  Approx approx = Approx::exact;
  if (cfg.method == "bnb-pwl") approx = Approx::pwl;
  else if (cfg.method == "bnb-quad") approx = Approx::quad;
  else if (cfg.method != "exhaustive" && cfg.method != "bnb-exact" && cfg.method != "stepwise")
    throw UsageError("unknown method '" + cfg.method + "'");
  if (tangents_given && approx != Approx::pwl) throw UsageError("--tangents only applies to --method bnb-pwl");

  SelectionProblem prob = make_problem(cfg, approx, load_tangents(cfg.tangents));
  if (cfg.verbosity > 0)
    err << "n=" << prob.data.n() << " p=" << prob.p() << " m=" << prob.m() << " F=" << format_number(prob.penalty)
        << '\n';
  SelectionReport rep;
  if (cfg.method == "exhaustive") rep = exhaustive_select(prob);
  else if (cfg.method == "stepwise") rep = stepwise_select(prob);
  else rep = branch_and_bound(prob);
  attach_data_warnings(prob, rep);
  emit_report(cfg, rep, err);
  out << summary_line(rep) << '\n';
  if (rep.optimal || cfg.method == "stepwise") return 0;
  return 2;
}

int run_fit(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  SelectionProblem prob = make_problem(cfg, Approx::exact, default_tangents());
  std::vector<int> subset;
  std::set<std::string> seen;
  for (const auto& name : cfg.features) {
    if (!seen.insert(name).second) throw UsageError("feature '" + name + "' listed twice");
    const auto j = find_feature(prob.data, name);
    if (!j) throw UsageError("unknown feature '" + name + "'");
    subset.push_back(*j);
  }
  SelectionReport rep = fixed_subset_report(prob, subset);
  attach_data_warnings(prob, rep);

  const double loss = loss_sum(rep.coefficients);
  const int m = prob.m();
  out << "AIC " << format_number(criterion_value(loss, rep.selected.size(), m, penalty_for(Criterion::aic, prob.data.n())))
      << '\n';
  out << "BIC " << format_number(criterion_value(loss, rep.selected.size(), m, penalty_for(Criterion::bic, prob.data.n())))
      << '\n';
  for (std::size_t k = 0; k < rep.coefficients.size(); ++k) {
    const FitResult& fr = rep.coefficients[k];
    out << "class " << k + 1 << " intercept " << format_number(fr.intercept);
    for (std::size_t q = 0; q < rep.selected.size(); ++q)
      out << ' ' << prob.data.feature_names[static_cast<std::size_t>(rep.selected[q])] << ' '
          << format_number(fr.coefficients(static_cast<Eigen::Index>(q)));
    out << '\n';
  }
  emit_report(cfg, rep, err);
  return 0;
}

int run_export(const CliConfig& cfg, bool tangents_given, std::ostream& out) {
  LpExportOptions opts;
  opts.approx = parse_approx(cfg.approx);
  if (opts.approx == Approx::exact) throw UsageError("--approx must be quad or pwl for export");
  if (tangents_given && opts.approx != Approx::pwl) throw UsageError("--tangents only applies to --approx pwl");
  opts.encoding = parse_indicator_encoding(cfg.encoding);
  if (!(cfg.big_m > 0.0)) throw UsageError("--big-m must be positive");
  opts.big_m = cfg.big_m;
  if (cfg.output.empty()) throw UsageError("export needs --output");
  const SelectionProblem prob = make_problem(cfg, opts.approx, load_tangents(cfg.tangents));
  const LpExportStats stats = export_lp(prob, opts, cfg.output);
  out << "wrote " << cfg.output << ": " << stats.tangent_rows << " tangent rows, " << stats.indicator_rows
      << " indicator rows\n";
  return 0;
}

int run_synth(const CliConfig& cfg, std::ostream& out) {
  if (cfg.output.empty()) throw UsageError("synth needs --output");
  SynthOptions opts;
  opts.seed = cfg.seed;
  opts.n = cfg.n;
  opts.p = cfg.p;
  opts.m = cfg.m;
  opts.true_features = cfg.true_features;
  const SynthInstance inst = generate(opts);
  {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + cfg.output + "' for writing");
    write_synth_csv(inst, f);
  }
  const std::string truth_path = cfg.truth_output.empty() ? cfg.output + ".truth.json" : cfg.truth_output;
  nlohmann::ordered_json truth;
  truth["seed"] = cfg.seed;
  truth["n"] = cfg.n;
  truth["p"] = cfg.p;
  truth["m"] = cfg.m;
  truth["truth"] = nlohmann::ordered_json::array();
  for (int j : inst.truth) truth["truth"].push_back({{"index", j + 1}, {"name", inst.table.columns[static_cast<std::size_t>(j)]}});
  truth["intercepts"] = std::vector<double>(inst.intercepts.data(), inst.intercepts.data() + inst.intercepts.size());
  truth["weights"] = nlohmann::ordered_json::array();
  for (Eigen::Index j = 0; j < inst.weights.rows(); ++j) {
    std::vector<double> row(inst.weights.cols());
    for (Eigen::Index k = 0; k < inst.weights.cols(); ++k) row[static_cast<std::size_t>(k)] = inst.weights(j, k);
    truth["weights"].push_back(row);
  }
  {
    std::ofstream f(truth_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + truth_path + "' for writing");
    f << canonical_dump(truth);
  }
  out << "wrote " << cfg.output << " and " << truth_path << '\n';
  return 0;
}

int run_tangents(const CliConfig& cfg, std::ostream& out) {
  const TangentSet t = load_tangents(cfg.tangents);
  out << "point slope offset\n";
  for (Eigen::Index l = 0; l < t.size(); ++l)
    out << to_string(t.points[static_cast<std::size_t>(l)]) << ' ' << format_number(t.slopes(l)) << ' '
        << format_number(t.offsets(l)) << '\n';
  return 0;
}

void add_data_options(CLI::App* sub, CliConfig& cfg) {
  sub->add_option("--input", cfg.input, "CSV file")->required();
  sub->add_option("--label", cfg.label, "ordinal label column")->required();
  sub->add_option("--criterion", cfg.criterion, "aic or bic")->capture_default_str();
  sub->add_option("--direction", cfg.direction, "forward or backward")->capture_default_str();
  sub->add_option("--drop", cfg.drop, "columns to ignore")->delimiter(',');
  sub->add_option("--missing-threshold", cfg.missing_threshold, "drop columns missing more than this fraction")
      ->capture_default_str();
  sub->add_flag("--parallel", cfg.parallel, "fit the class subproblems concurrently");
  sub->add_flag("-v,--verbose", cfg.verbosity, "print diagnostics to stderr");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  cfg.time_limit = default_time_limit();

  CLI::App app{"Best-subset selection for sequential logit models under AIC/BIC", "seqlogit"};
  app.require_subcommand(1);

  auto* select = app.add_subcommand("select", "choose the feature subset minimizing AIC or BIC");
  add_data_options(select, cfg);
  select->add_option("--method", cfg.method, "exhaustive|bnb-exact|bnb-pwl|bnb-quad|stepwise")->capture_default_str();
  auto* select_tangents = select->add_option("--tangents", cfg.tangents, "default17 or a file of tangent points");
  select->add_option("--time-limit", cfg.time_limit, "seconds (env SEQLOGIT_TIME_LIMIT)")->capture_default_str();
  select->add_option("--output", cfg.output, "report JSON path");

  auto* fit = app.add_subcommand("fit", "exact refit on a fixed feature list");
  add_data_options(fit, cfg);
  fit->add_option("--features", cfg.features, "comma-separated feature names")->delimiter(',');
  fit->add_option("--output", cfg.output, "report JSON path");

  auto* exp = app.add_subcommand("export", "write the selection problem as an LP file");
  add_data_options(exp, cfg);
  exp->add_option("--approx", cfg.approx, "quad or pwl")->capture_default_str();
  exp->add_option("--encoding", cfg.encoding, "bigm or sos1")->capture_default_str();
  exp->add_option("--big-m", cfg.big_m, "indicator constant")->capture_default_str();
  auto* export_tangents = exp->add_option("--tangents", cfg.tangents, "default17 or a file of tangent points");
  exp->add_option("--output", cfg.output, "LP file path");

  auto* synth = app.add_subcommand("synth", "generate a planted instance");
  synth->add_option("--seed", cfg.seed)->capture_default_str();
  synth->add_option("--n", cfg.n)->capture_default_str();
  synth->add_option("--p", cfg.p)->capture_default_str();
  synth->add_option("--m", cfg.m)->capture_default_str();
  synth->add_option("--true-features", cfg.true_features)->capture_default_str();
  synth->add_option("--output", cfg.output, "CSV path");
  synth->add_option("--truth-output", cfg.truth_output, "ground truth JSON (default: <output>.truth.json)");

  auto* tangents = app.add_subcommand("tangents", "print a tangent set");
  tangents->add_option("--tangents", cfg.tangents, "default17 or a file of tangent points")->capture_default_str();

  std::vector<std::string> argv_store = args;
  if (argv_store.empty()) argv_store.push_back("seqlogit");
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*select) return run_select(cfg, select_tangents->count() > 0, out, err);
    if (*fit) return run_fit(cfg, out, err);
    if (*exp) return run_export(cfg, export_tangents->count() > 0, out);
    if (*synth) return run_synth(cfg, out);
    if (*tangents) return run_tangents(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run_cli(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace seqlogit
