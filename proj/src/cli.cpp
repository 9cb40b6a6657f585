#include "lofdesign/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "lofdesign/chebyshev.hpp"
#include "lofdesign/design_io.hpp"
#include "lofdesign/errors.hpp"
#include "lofdesign/expr.hpp"
#include "lofdesign/measures.hpp"
#include "lofdesign/optimal.hpp"
#include "lofdesign/simulate.hpp"
#include "lofdesign/verify.hpp"

namespace lofd::cli {
namespace {

using nlohmann::json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string format = "json";
  int digits = 12;
  std::string out_path;

  int k = 0;
  double r = 0.0;
  std::string weight = "uniform";
  std::string design;
  int grid_size = kDefaultGridSize;
  int n = 0;
  double sigma = 1.0;
  int reps = 1000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::string g;
  std::string truth = "0";
  std::string alternative;
  std::string noise = "normal";
  std::string design_id;
  int lanes = 1;
};

/// What a subcommand produced: the JSON document is canonical; CSV is a
/// flat table view of the same data.
struct Output {
  json doc;
  std::vector<std::string> csv_header;
  std::vector<std::vector<json>> csv_rows;
  int code = kSuccess;
};

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return std::strtod(buffer, nullptr);
}

void round_numbers(json& node, int digits) {
  if (node.is_number_float()) {
    node = round_significant(node.get<double>(), digits);
  } else if (node.is_array() || node.is_object()) {
    for (auto& child : node) round_numbers(child, digits);
  }
}

std::string csv_cell(const json& value, int digits) {
  if (value.is_null()) return "";
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", digits, value.get<double>());
    return buffer;
  }
  return value.dump();
}

void render(const Output& output, const Options& opt, std::ostream& out) {
  if (opt.format == "csv") {
    if (output.csv_header.empty()) {
      out << "key,value\n";
      for (const auto& [key, value] : output.doc.items()) out << key << ',' << csv_cell(value, opt.digits) << '\n';
      return;
    }
    for (std::size_t i = 0; i < output.csv_header.size(); ++i) out << (i ? "," : "") << output.csv_header[i];
    out << '\n';
    for (const auto& row : output.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i], opt.digits);
      out << '\n';
    }
    return;
  }
  json doc = output.doc;
  round_numbers(doc, opt.digits);
  if (opt.format == "human") {
    for (const auto& [key, value] : doc.items())
      out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    return;
  }
  out << doc.dump(2) << '\n';
}

WeightFunction load_weight(const Options& opt, std::ostream& err) {
  try {
    return io::parse_weight_spec(opt.weight, [&err](const std::string& msg) { err << "warning: " << msg << '\n'; });
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--weight: ") + e.what());
  }
}

json load_design_doc(const Options& opt) {
  if (opt.design.empty()) throw UsageError("--design is required");
  try {
    return io::read_json_file(opt.design);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--design: ") + e.what());
  }
}

DesignMeasure design_of(const json& doc) {
  try {
    return io::design_from_json(doc);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--design: ") + e.what());
  }
}

int resolve_k(const Options& opt, const json& doc) {
  int k = opt.k;
  if (k == 0 && doc.contains("k")) k = doc.at("k").get<int>();
  if (k < 2 || k > 32) throw UsageError("--k: number of parameters in [2, 32] required (flag or document field)");
  return k;
}

RegressionFunction expression_of(const std::string& flag, const std::string& text) {
  try {
    return parse_expression(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

Output do_construct(const Options& opt, std::ostream& err) {
  const WeightFunction v = load_weight(opt, err);
  Output output;
  try {
    const ConstructionReport report = construct(opt.k, opt.r, v);
    output.doc = io::construction_to_json(report);
    const std::vector<double> x = cheb::extrema(opt.k);
    output.csv_header = {"i", "x", "q", "p"};
    for (int i = 0; i < opt.k; ++i) output.csv_rows.push_back({i, x[i], report.q[i], report.p[i]});
  } catch (const InfeasibleEfficiencyError& e) {
    output.doc = {{"error", e.name()}, {"message", e.what()}, {"k", opt.k}, {"r", opt.r}, {"alpha0", e.alpha0()}};
    output.code = kDomainFailure;
    err << "error [" << e.name() << "]: " << e.what() << '\n';
  }
  return output;
}

Output do_alpha0(const Options& opt, std::ostream& err) {
  const WeightFunction v = load_weight(opt, err);
  Output output;
  const double value = alpha0(opt.k, v);
  output.doc = {{"k", opt.k}, {"weight", v.label()}, {"alpha0", value}};
  output.csv_header = {"k", "alpha0"};
  output.csv_rows.push_back({opt.k, value});
  return output;
}

Output do_table1(const Options& opt, std::ostream& err) {
  const WeightFunction v = load_weight(opt, err);
  Output output;
  json rows = json::array();
  output.csv_header = {"k", "alpha0"};
  for (int k = 2; k <= 8; ++k) {
    const double value = alpha0(k, v);
    rows.push_back({{"k", k}, {"alpha0", value}});
    output.csv_rows.push_back({k, value});
  }
  output.doc = {{"weight", v.label()}, {"rows", rows}};
  return output;
}

Output do_efficiency(const Options& opt, std::ostream& err) {
  const DesignMeasure xi = design_of(load_design_doc(opt));
  const WeightFunction v = load_weight(opt, err);
  Output output;
  output.doc = {{"efficiency", lof_efficiency(xi, v)}, {"weight", v.label()}};
  return output;
}

Output do_verify(const Options& opt, std::ostream&) {
  const json doc = load_design_doc(opt);
  const DesignMeasure xi = design_of(doc);
  const int k = resolve_k(opt, doc);
  const PolynomialModel model(k);
  const OptimalityReport report = check_ek_optimality(xi, model, opt.grid_size);

  Output output;
  output.doc = io::design_to_json(xi, k);
  output.doc["report"] = io::report_to_json(report);
  try {
    output.doc["cheb_deviation"] = cheb_proportionality(xi, model);
  } catch (const DegenerateError&) {
    output.doc["cheb_deviation"] = nullptr;
  }
  output.csv_header = {"optimal", "margin", "argmax_location", "grid_max"};
  output.csv_rows.push_back({report.optimal, report.margin, report.argmax_location, report.grid_max});
  output.code = report.optimal ? kSuccess : kDomainFailure;
  return output;
}

Output do_discretize(const Options& opt, std::ostream&) {
  const DesignMeasure xi = design_of(load_design_doc(opt));
  const std::vector<double> points = discretize(xi, opt.n);
  Output output;
  output.doc = {{"n", opt.n}, {"points", points}};
  output.csv_header = {"i", "x"};
  for (std::size_t i = 0; i < points.size(); ++i) output.csv_rows.push_back({i, points[i]});
  return output;
}

Output do_bfunc(const Options& opt, std::ostream&) {
  const json doc = load_design_doc(opt);
  const DesignMeasure xi = design_of(doc);
  const int k = resolve_k(opt, doc);
  if (opt.g.empty()) throw UsageError("--g is required");
  const RegressionFunction g = expression_of("--g", opt.g);
  if (!(opt.sigma > 0.0)) throw UsageError("--sigma: must be positive for bfunc");
  Output output;
  const double value = b_functional(g, xi, opt.sigma * opt.sigma, PolynomialModel(k));
  output.doc = {{"k", k}, {"g", opt.g}, {"sigma", opt.sigma}, {"b", value}};
  return output;
}

Output do_simulate(const Options& opt, std::ostream&) {
  const json doc = load_design_doc(opt);
  SimConfig cfg{design_of(doc)};
  cfg.k = resolve_k(opt, doc);
  if (opt.n < cfg.k) throw UsageError("--n: must be at least k");
  cfg.n = opt.n;
  cfg.sigma = opt.sigma;
  cfg.reps = opt.reps;
  cfg.seed = opt.seed;
  cfg.lanes = opt.lanes;
  cfg.truth = expression_of("--truth", opt.truth);
  cfg.noise = opt.noise == "uniform" ? NoiseKind::uniform : NoiseKind::normal;

  SimResult result;
  if (opt.alternative.empty()) {
    result = simulate_lse_variance(cfg);
  } else {
    result = lof_detectability(cfg, expression_of("--alternative", opt.alternative), opt.alpha);
  }

  std::string id = opt.design_id;
  if (id.empty()) {
    const auto slash = opt.design.find_last_of('/');
    id = slash == std::string::npos ? opt.design : opt.design.substr(slash + 1);
  }
  const json power = result.power_est ? json(*result.power_est) : json(nullptr);
  Output output;
  output.doc = {{"design_id", id},
                {"k", cfg.k},
                {"r", cfg.design.ac_scale()},
                {"n", cfg.n},
                {"sigma", cfg.sigma},
                {"reps", result.reps_used},
                {"variance_est", result.variance_est},
                {"variance_theory", result.variance_theory},
                {"power_est", power},
                {"undetectable", result.undetectable},
                {"seed", result.seed}};
  if (!opt.alternative.empty()) output.doc["alpha"] = opt.alpha;
  output.csv_header = {"design_id", "k", "r", "n", "sigma", "reps", "variance_est", "variance_theory", "power_est", "seed"};
  const json power_cell = result.undetectable ? json("undetectable") : power;
  output.csv_rows.push_back({id, cfg.k, cfg.design.ac_scale(), cfg.n, cfg.sigma, result.reps_used, result.variance_est,
                             result.variance_theory, power_cell, result.seed});
  return output;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Lack-of-fit efficient e_k-optimal designs for polynomial regression", "lofdesign"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("--digits", opt.digits, "Significant digits of numeric output")->check(CLI::Range(1, 17));
  app.add_option("--out", opt.out_path, "Write output to this file instead of stdout");

  const auto k_range = CLI::Range(2, 32);
  const auto weight_help = "uniform | arcsine | grid:<path>";

  auto* construct_cmd = app.add_subcommand("construct", "Build the e_k-optimal design with LOF efficiency r");
  construct_cmd->add_option("--k", opt.k, "Number of parameters (degree k-1)")->required()->check(k_range);
  construct_cmd->add_option("--r", opt.r, "LOF efficiency")->required()->check(CLI::Range(0.0, 1.0));
  construct_cmd->add_option("--weight", opt.weight, weight_help);

  auto* alpha0_cmd = app.add_subcommand("alpha0", "Largest feasible efficiency of the explicit construction");
  alpha0_cmd->add_option("--k", opt.k, "Number of parameters")->required()->check(k_range);
  alpha0_cmd->add_option("--weight", opt.weight, weight_help);

  auto* table1_cmd = app.add_subcommand("table1", "alpha0 for k = 2..8");
  table1_cmd->add_option("--weight", opt.weight, weight_help);

  auto* efficiency_cmd = app.add_subcommand("efficiency", "LOF efficiency of a design");
  efficiency_cmd->add_option("--design", opt.design, "Design document")->required();
  efficiency_cmd->add_option("--weight", opt.weight, weight_help);

  auto* verify_cmd = app.add_subcommand("verify", "Equivalence-theorem check for e_k-optimality");
  verify_cmd->add_option("--design", opt.design, "Design document")->required();
  verify_cmd->add_option("--k", opt.k, "Number of parameters (default: document field)")->check(k_range);
  verify_cmd->add_option("--grid-size", opt.grid_size, "Sensitivity grid size")->check(CLI::Range(512, 1 << 24));

  auto* discretize_cmd = app.add_subcommand("discretize", "Exact n-point design from quantiles");
  discretize_cmd->add_option("--design", opt.design, "Design document")->required();
  discretize_cmd->add_option("--n", opt.n, "Number of design points")->required()->check(CLI::Range(2, 100000000));

  auto* bfunc_cmd = app.add_subcommand("bfunc", "Asymptotic LOF power functional B(g, xi)");
  bfunc_cmd->add_option("--design", opt.design, "Design document")->required();
  bfunc_cmd->add_option("--g", opt.g, "Regression function of x")->required();
  bfunc_cmd->add_option("--k", opt.k, "Number of parameters (default: document field)")->check(k_range);
  bfunc_cmd->add_option("--sigma", opt.sigma, "Error standard deviation");

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo LSE variance or LOF test power");
  simulate_cmd->add_option("--design", opt.design, "Design document")->required();
  simulate_cmd->add_option("--k", opt.k, "Number of parameters (default: document field)")->check(k_range);
  simulate_cmd->add_option("--n", opt.n, "Runs per replicate")->required()->check(CLI::Range(2, 100000000));
  simulate_cmd->add_option("--sigma", opt.sigma, "Error standard deviation")->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--reps", opt.reps, "Replicates")->check(CLI::Range(1, 100000000));
  simulate_cmd->add_option("--seed", opt.seed, "RNG seed");
  simulate_cmd->add_option("--truth", opt.truth, "True regression function for the variance run");
  simulate_cmd->add_option("--alternative", opt.alternative, "Alternative g(x); switches to the power run");
  simulate_cmd->add_option("--alpha", opt.alpha, "Test level")->check(CLI::Range(1e-12, 1.0 - 1e-12));
  simulate_cmd->add_option("--noise", opt.noise, "normal | uniform")->check(CLI::IsMember({"normal", "uniform"}));
  simulate_cmd->add_option("--lanes", opt.lanes, "Worker threads")->check(CLI::Range(1, 1024));
  simulate_cmd->add_option("--design-id", opt.design_id, "Identifier written to the result row");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  Output output;
  try {
    if (*construct_cmd)
      output = do_construct(opt, err);
    else if (*alpha0_cmd)
      output = do_alpha0(opt, err);
    else if (*table1_cmd)
      output = do_table1(opt, err);
    else if (*efficiency_cmd)
      output = do_efficiency(opt, err);
    else if (*verify_cmd)
      output = do_verify(opt, err);
    else if (*discretize_cmd)
      output = do_discretize(opt, err);
    else if (*bfunc_cmd)
      output = do_bfunc(opt, err);
    else
      output = do_simulate(opt, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error [" << e.name() << "]: " << e.what() << '\n';
    output = Output{{{"error", e.name()}, {"message", e.what()}}, {}, {}, kDomainFailure};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    output = Output{{{"error", "failure"}, {"message", e.what()}}, {}, {}, kDomainFailure};
  }

  if (opt.out_path.empty()) {
    render(output, opt, out);
  } else {
    std::ofstream file(opt.out_path);
    if (!file) {
      err << "usage error: --out: cannot write '" << opt.out_path << "'\n";
      return kUsage;
    }
    render(output, opt, file);
  }
  return output.code;
}

}  // namespace lofd::cli
