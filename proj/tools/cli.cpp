#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "watt/energy.hpp"
#include "watt/error.hpp"
#include "watt/powermodel.hpp"
#include "watt/simgen.hpp"
#include "watt/tariff.hpp"
#include "watt/trace.hpp"

namespace watt::cli {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw DataError("failed writing '" + path + "'");
}

std::vector<MetricSample> load_metrics(const std::string& path) {
  try {
    return parse_metrics(read_file(path));
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<PowerSample> load_power(const std::string& path) {
  try {
    return parse_power(read_file(path));
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

double resolve_tolerance(const std::optional<double>& given, const std::vector<MetricSample>& metrics,
                         std::ostream& err) {
  if (given) return *given;
  const double tol = default_tolerance(metrics);
  err << "tolerance_s: " << format_number(tol) << " (half the median metric interval)\n";
  return tol;
}

std::string bold(const std::string& s, bool styled) { return styled ? "\x1b[1m" + s + "\x1b[0m" : s; }

std::string format_p(double p) { return p < 2e-16 ? "< 2e-16" : fmt::format("{:.6g}", p); }

std::string coefficient_table(const PowerModel& m, bool styled) {
  static constexpr const char* kNames[5] = {"Baseline Power", "CPU", "Memory", "Hard Disk", "Network"};
  static constexpr const char* kSymbols[5] = {"alpha", "beta_1", "beta_2", "beta_3", "beta_4"};
  const auto& d = m.diagnostics;
  std::string out = bold(fmt::format("{:<16}{:<8}{:>14}{:>14}{:>14}{:>12}", "Coefficient", "Model", "Value",
                                     "Std. Error", "t value", "Pr(>|t|)"),
                         styled) +
                    "\n";
  for (int i = 0; i < 5; ++i) {
    out += fmt::format("{:<16}{:<8}{:>14.6g}{:>14.6g}{:>14.6g}{:>12}\n", kNames[i], kSymbols[i], m.coefficients(i),
                       d.std_errors(i), d.t_stats(i), format_p(d.p_values(i)));
  }
  out += fmt::format("\nR-squared: {:.6g}  residual sigma: {:.6g} W  df: {}  n: {}\n", d.r_squared,
                     d.residual_sigma, d.df, d.n_samples);
  return out;
}

json evaluation_json(const EvaluationReport& r) {
  return {{"mape", r.mape}, {"accuracy", r.accuracy}, {"max_abs_error_w", r.max_abs_error_w}, {"n", r.n}};
}

CostLine parse_category(const std::string& spec) {
  const auto eq = spec.rfind('=');
  if (eq == std::string::npos || eq == 0) {
    throw InvalidArgument("category must look like label=cost, got '" + spec + "'");
  }
  CostLine line{spec.substr(0, eq), 0.0};
  const std::string value = spec.substr(eq + 1);
  std::size_t used = 0;
  try {
    line.cost = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw InvalidArgument("category '" + line.label + "' has a non-numeric cost '" + value + "'");
  }
  return line;
}

double now_seconds() {
  using namespace std::chrono;
  return duration<double>(system_clock::now().time_since_epoch()).count();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, Options options) {
  CLI::App app{"Train, apply and cost host power models from utilization and power traces", "watt"};
  app.require_subcommand(1);

  // fit
  std::string fit_metrics, fit_power, fit_out, fit_hw;
  std::optional<double> fit_tol;
  bool fit_json = false;
  auto* fit = app.add_subcommand("fit", "Fit a power model from metric and power CSVs");
  fit->add_option("--metrics", fit_metrics, "Metrics CSV")->required();
  fit->add_option("--power", fit_power, "Power CSV")->required();
  fit->add_option("--out", fit_out, "Model JSON to write")->required();
  fit->add_option("--tolerance-s", fit_tol, "Pairing tolerance in seconds");
  fit->add_option("--hardware-id", fit_hw, "Hardware configuration label");
  fit->add_flag("--json", fit_json, "Print the model as JSON instead of a table");

  // predict
  std::string pred_model, pred_metrics, pred_out;
  auto* pred = app.add_subcommand("predict", "Predict power for a metrics CSV");
  pred->add_option("--model", pred_model, "Model JSON")->required();
  pred->add_option("--metrics", pred_metrics, "Metrics CSV")->required();
  pred->add_option("--out", pred_out, "Output CSV ('-' for stdout)")->required();

  // evaluate
  std::string eval_model, eval_metrics, eval_power;
  std::optional<double> eval_tol;
  auto* eval = app.add_subcommand("evaluate", "Score a model against measured power");
  eval->add_option("--model", eval_model, "Model JSON")->required();
  eval->add_option("--metrics", eval_metrics, "Metrics CSV")->required();
  eval->add_option("--power", eval_power, "Power CSV")->required();
  eval->add_option("--tolerance-s", eval_tol, "Pairing tolerance in seconds");
  eval->add_flag("--json", "Accepted for symmetry; output is always JSON");

  // energy
  std::string en_power, en_model, en_metrics;
  auto* energy = app.add_subcommand("energy", "Integrate measured or predicted power into kWh");
  auto* en_power_opt = energy->add_option("--power", en_power, "Power CSV");
  auto* en_model_opt = energy->add_option("--model", en_model, "Model JSON");
  auto* en_metrics_opt = energy->add_option("--metrics", en_metrics, "Metrics CSV");
  en_power_opt->excludes(en_model_opt)->excludes(en_metrics_opt);
  en_model_opt->needs(en_metrics_opt);
  en_metrics_opt->needs(en_model_opt);
  energy->add_flag("--json", "Accepted for symmetry; output is always JSON");

  // cost
  double cost_kwh = 0.0, cost_rate = 0.0, cost_esc = 0.0;
  int cost_months = 0;
  std::vector<std::string> cost_categories;
  std::string cost_currency = "$";
  bool cost_json = false;
  auto* cost = app.add_subcommand("cost", "Project energy cost under an escalating tariff");
  cost->add_option("--kwh-per-day", cost_kwh, "Daily energy in kWh")->required();
  cost->add_option("--rate", cost_rate, "Price per kWh")->required();
  cost->add_option("--escalation", cost_esc, "Yearly rate increase as a fraction (0.15 = 15%)");
  cost->add_option("--months", cost_months, "Horizon in months")->required();
  cost->add_option("--category", cost_categories, "Other cost line, label=cost (repeatable)");
  cost->add_option("--currency", cost_currency, "Currency symbol for text output");
  cost->add_flag("--json", cost_json, "Emit JSON");

  // simulate
  std::string sim_profile = "bursty", sim_metrics, sim_power;
  SimConfig sim;
  sim.truth << 107.5, 124.9, 5.471e-6, 3.661e-2, 3.382e-8;
  sim.seed = 42;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic metric/power trace pair");
  simulate->add_option("--profile", sim_profile, "idle, constant, diurnal or bursty")->capture_default_str();
  simulate->add_option("--alpha", sim.truth(0), "Baseline power (W)")->capture_default_str();
  simulate->add_option("--beta-cpu", sim.truth(1), "W per unit cpu")->capture_default_str();
  simulate->add_option("--beta-mem", sim.truth(2), "W per unit mem")->capture_default_str();
  simulate->add_option("--beta-disk", sim.truth(3), "W per unit disk")->capture_default_str();
  simulate->add_option("--beta-net", sim.truth(4), "W per unit net")->capture_default_str();
  simulate->add_option("--duration-s", sim.duration_s, "Trace length in seconds")->capture_default_str();
  simulate->add_option("--interval-s", sim.interval_s, "Sampling interval in seconds")->capture_default_str();
  simulate->add_option("--noise-w", sim.noise_sigma_w, "Gaussian power noise sigma (W)")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Generator seed")->capture_default_str();
  simulate->add_option("--out-metrics", sim_metrics, "Metrics CSV to write")->required();
  simulate->add_option("--out-power", sim_power, "Power CSV to write")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  try {
    if (*fit) {
      const auto metrics = load_metrics(fit_metrics);
      const auto power = load_power(fit_power);
      const double tol = resolve_tolerance(fit_tol, metrics, err);
      const auto trace = align(metrics, power, tol);
      if (trace.dropped > 0) err << "dropped " << trace.dropped << " unmatched metric samples\n";
      const auto model = train(trace, fit_hw, now_seconds());
      write_file(fit_out, save_model(model));
      if (fit_json) {
        out << save_model(model);
      } else {
        out << coefficient_table(model, options.styled);
      }
    } else if (*pred) {
      const auto model = load_model(read_file(pred_model));
      const auto metrics = load_metrics(pred_metrics);
      if (metrics.empty()) throw DataError(pred_metrics + ": no metric rows");
      std::ostringstream csv;
      csv << "timestamp,predicted_power_w\n";
      for (const auto& m : metrics) csv << format_number(m.timestamp) << ',' << format_number(predict(model, m)) << '\n';
      if (pred_out == "-") {
        out << csv.str();
      } else {
        write_file(pred_out, csv.str());
      }
    } else if (*eval) {
      const auto model = load_model(read_file(eval_model));
      const auto metrics = load_metrics(eval_metrics);
      const auto power = load_power(eval_power);
      const double tol = resolve_tolerance(eval_tol, metrics, err);
      const auto trace = align(metrics, power, tol);
      if (trace.dropped > 0) err << "dropped " << trace.dropped << " unmatched metric samples\n";
      out << evaluation_json(evaluate(model, trace)).dump(2) << "\n";
    } else if (*energy) {
      EnergyReport report;
      if (!en_power.empty()) {
        report = integrate(load_power(en_power));
      } else if (!en_model.empty()) {
        report = integrate_predicted(load_model(read_file(en_model)), load_metrics(en_metrics));
      } else {
        err << "error: energy needs --power, or --model with --metrics\n" << energy->help();
        return kUsage;
      }
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
      out << to_json(report) << "\n";
    } else if (*cost) {
      std::vector<CostLine> lines;
      for (const auto& c : cost_categories) lines.push_back(parse_category(c));
      const Tariff tariff{cost_rate, cost_esc, cost_currency};
      const auto projection = project_cost(cost_kwh, tariff, cost_months);
      const auto report = breakdown(projection.total_cost, lines);
      if (cost_json) {
        json doc;
        doc["projection"] = json::parse(to_json(projection));
        doc["breakdown"] = json::parse(to_json(report));
        doc["total"] = report.total;
        out << doc.dump(2) << "\n";
      } else {
        out << bold("Energy cost projection", options.styled) << "\n"
            << render_text(projection, cost_currency) << "\n"
            << bold("Cost breakdown", options.styled) << "\n"
            << render_text(report, cost_currency);
      }
    } else if (*simulate) {
      sim.profile = parse_profile(sim_profile);
      const auto trace = generate(sim);
      std::ostringstream metrics_csv, power_csv;
      write_metrics(metrics_csv, trace.metrics);
      write_power(power_csv, trace.power);
      write_file(sim_metrics, metrics_csv.str());
      write_file(sim_power, power_csv.str());
      err << describe(sim);
      err << "samples: " << trace.metrics.size() << "\n";
      if (trace.floored > 0) err << "floored " << trace.floored << " power samples at 1 W\n";
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
  return kOk;
}

}  // namespace watt::cli
