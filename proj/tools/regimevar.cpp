// regimevar: quantiles, put prices, VaR hedges, frontiers, the GBM
// misspecification experiment and Monte Carlo samples from the command line.
//
// Exit codes: 0 ok, 2 input error, 3 numerical failure, 4 infeasible problem.

#include "regimevar/charfun.hpp"
#include "regimevar/errors.hpp"
#include "regimevar/hedge.hpp"
#include "regimevar/misspec.hpp"
#include "regimevar/model_io.hpp"
#include "regimevar/risk.hpp"
#include "regimevar/simulate.hpp"
#include "regimevar/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

using namespace regimevar;

namespace {

struct Options {
  std::string model_path;
  std::string q_model_path;
  double s0 = 100.0;
  std::optional<double> rate;
  double horizon = 1.0;
  double alpha = 0.01;
  double budget = 0.0;
  std::optional<double> nu;
  std::uint64_t seed = 0;
  std::size_t paths = 1'000'000;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> sweep;
  bool table_format = false;

  std::vector<double> strikes;
  std::vector<double> budgets;
  std::vector<double> maturities;
  std::vector<double> strike_ratios{0.8, 0.9, 1.0, 1.1, 1.2};
  std::string premium = "true";
  bool mc = false;
  bool antithetic = false;
  std::string measure = "P";
};

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Inputs {
  RegimeModel p;
  std::optional<RegimeModel> q_file;
  MarketSetup setup;
};

struct Context {
  RegimeModel p;
  RegimeModel q;
  MarketSetup setup;
  InversionSettings settings;
  SimConfig sim;
};

Inputs load_inputs(const Options& o) {
  Inputs in;
  in.p = load_model(o.model_path);
  if (!o.q_model_path.empty()) {
    in.q_file = load_model(o.q_model_path);
    if (!in.q_file->risk_neutral())
      throw InputError(o.q_model_path + ": $.measure: pricing model must be {\"Q\": ...}");
  }
  in.setup.spot = o.s0;
  in.setup.horizon = o.horizon;
  in.setup.alpha = o.alpha;
  in.setup.budget = o.budget;
  if (in.q_file) {
    const double r = in.q_file->rate();
    if (o.rate && std::abs(*o.rate - r) > 1e-12)
      throw InputError("--rate differs from the rate of --q-model");
    in.setup.rate = r;
  } else if (in.p.risk_neutral()) {
    const double r = in.p.rate();
    if (o.rate && std::abs(*o.rate - r) > 1e-12)
      throw InputError("--rate differs from the rate of the risk-neutral --model");
    in.setup.rate = r;
  } else {
    in.setup.rate = o.rate.value_or(0.0);
  }
  return in;
}

Context make_context(const Options& o, const Inputs& in) {
  Context c;
  c.p = in.p;
  c.setup = in.setup;
  if (in.q_file) {
    c.q = *in.q_file;
    c.q.measure = RiskNeutral{c.setup.rate};
  } else if (in.p.risk_neutral()) {
    c.q = in.p;
    c.q.measure = RiskNeutral{c.setup.rate};
    c.p = c.q;
  } else {
    c.q = apply_measure_change(in.p, MeasureChangeSpec::identity(in.p.regimes),
                               c.setup.rate)
              .model;
  }
  if (o.nu) {
    c.settings.price.nu = *o.nu;
    c.settings.probability.nu = *o.nu;
  }
  c.sim.paths = o.paths;
  c.sim.seed = o.seed;
  c.sim.antithetic = o.antithetic;
  require_valid(c.setup);
  return c;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("--sweep: cannot parse value '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("--sweep: empty value list");
  return out;
}

void set_generator_rate(RegimeModel& m, std::size_t i, std::size_t j, double v) {
  const auto n = static_cast<Eigen::Index>(m.states());
  const auto ii = static_cast<Eigen::Index>(i);
  m.generator(ii, static_cast<Eigen::Index>(j)) = v;
  double off = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (k != ii) off += m.generator(ii, k);
  m.generator(ii, ii) = -off;
}

// Applies one sweep value to the raw inputs. Model parameters move in both
// the historical and the pricing model; mu only in the historical one.
void apply_param(Inputs& in, const std::string& name, double v) {
  if (name == "alpha") return void(in.setup.alpha = v);
  if (name == "horizon") return void(in.setup.horizon = v);
  if (name == "budget") return void(in.setup.budget = v);
  if (name == "s0") return void(in.setup.spot = v);
  if (name == "rate") {
    if (in.q_file) in.q_file->measure = RiskNeutral{v};
    if (in.p.risk_neutral()) in.p.measure = RiskNeutral{v};
    return void(in.setup.rate = v);
  }
  static const std::regex indexed(R"((mu|sigma|lambda|a|b|q)(\d+))");
  std::smatch mt;
  if (!std::regex_match(name, mt, indexed))
    throw InputError("--sweep: unknown parameter '" + name + "'");
  const std::string field = mt[1];
  const std::string digits = mt[2];
  const std::size_t m = in.p.states();
  auto each = [&](auto&& f) {
    f(in.p);
    if (in.q_file) f(*in.q_file);
  };
  if (field == "q") {
    std::size_t i = 0, j = 0;
    if (digits.size() == 1 && m == 2) {
      i = static_cast<std::size_t>(std::stoul(digits)) - 1;
      j = 1 - i;
    } else if (digits.size() == 2) {
      i = static_cast<std::size_t>(digits[0] - '1');
      j = static_cast<std::size_t>(digits[1] - '1');
    } else {
      throw InputError("--sweep: use q<i><j>, or q1/q2 for two-state models");
    }
    if (i >= m || j >= m || i == j)
      throw InputError("--sweep: generator index out of range in '" + name + "'");
    each([&](RegimeModel& x) { set_generator_rate(x, i, j, v); });
    return;
  }
  const std::size_t k = static_cast<std::size_t>(std::stoul(digits));
  if (k < 1 || k > m) throw InputError("--sweep: regime index out of range in '" + name + "'");
  if (field == "mu") return void(in.p.regimes[k - 1].mu = v);
  each([&](RegimeModel& x) {
    RegimeParams& r = x.regimes[k - 1];
    if (field == "sigma") r.sigma = v;
    if (field == "lambda") r.lambda = v;
    if (field == "a") r.jump.mean = v;
    if (field == "b") r.jump.stdev = v;
  });
}

// ---- commands ----

Table cmd_quantile(const Context& c) {
  const double q = lower_quantile(c.setup, c.p, c.settings.probability);
  const double var = c.setup.spot - std::exp(-c.setup.rate * c.setup.horizon) * q;
  return {{"alpha", "q", "var_unhedged"}, {{c.setup.alpha, q, var}}};
}

Table cmd_price(const Context& c, const std::vector<double>& strikes) {
  if (strikes.empty()) throw InputError("price: --strike is required");
  Table t{{"strike", "put", "call", "prob_below"}, {}};
  for (double k : strikes) {
    const double put = put_price(k, c.setup.horizon, c.q, c.setup.spot, c.settings.price);
    const double call = put + c.setup.spot - std::exp(-c.setup.rate * c.setup.horizon) * k;
    const double prob = tail_prob(k, c.setup.horizon, c.q, c.setup.spot, c.settings.probability);
    t.rows.push_back({k, put, call, prob});
  }
  return t;
}

Table cmd_hedge(const Context& c) {
  const HedgeSolution s = solve_hedge(c.setup, c.p, c.q, c.settings);
  if (s.boundary == HedgeBoundary::Infeasible)
    throw ExistenceViolated("no put hedge lowers VaR: q_{1-alpha}(S_T) = " +
                            std::to_string(s.lower_quantile) + " >= E^Q[S_T]");
  return {{"budget", "strike", "fraction", "hedged_var", "unhedged_var", "reduction",
           "boundary", "quantile", "premium"},
          {{c.setup.budget, s.strike, s.fraction, s.hedged_var, s.unhedged_var,
            s.reduction, std::string(to_string(s.boundary)), s.lower_quantile, s.premium}}};
}

Table cmd_frontier(const Context& c, std::vector<double> budgets) {
  if (budgets.empty()) {
    MarketSetup base = c.setup;
    base.budget = 0.0;
    const HedgeSolution ref = solve_hedge(base, c.p, c.q, c.settings);
    for (int i = 0; i < 10; ++i) budgets.push_back(ref.premium * i / 9.0);
  }
  const Frontier f = efficient_frontier(c.setup, c.p, c.q, budgets, c.settings);
  Table t{{"budget", "var", "boundary", "line", "slope", "intercept", "strike"}, {}};
  for (const auto& pt : f.points)
    t.rows.push_back({pt.budget, pt.var, std::string(to_string(pt.boundary)),
                      f.line(pt.budget), f.slope, f.intercept, f.strike});
  return t;
}

Table cmd_misspec(const Context& c, const Options& o) {
  MisspecOptions mo;
  mo.grid.strike_ratios = o.strike_ratios;
  mo.grid.maturities = o.maturities;
  if (o.premium == "gbm") {
    mo.premium = PremiumSource::Gbm;
  } else if (o.premium != "true") {
    throw InputError("--premium must be 'true' or 'gbm'");
  }
  mo.settings = c.settings;
  if (o.mc) mo.simulation = c.sim;
  const MisspecReport r = run_misspec(c.p, c.q, c.setup, mo);
  Table t{{"horizon", "sigma_hat", "mu_hat", "gbm_strike", "gbm_fraction", "gbm_var",
           "true_strike", "true_fraction", "true_var", "true_reduction", "premium_paid",
           "beta"},
          {}};
  std::vector<Cell> row{c.setup.horizon, r.sigma_hat, r.mu_hat,
                        r.gbm_strategy.strike, r.gbm_strategy.fraction,
                        r.gbm_strategy.hedged_var, r.true_strategy.strike,
                        r.true_strategy.fraction, r.true_strategy.hedged_var,
                        r.true_strategy.reduction, r.premium_paid, r.beta};
  if (r.beta_mc) {
    t.columns.insert(t.columns.end(), {"beta_mc", "beta_mc_se"});
    row.insert(row.end(), {r.beta_mc->value, r.beta_mc->std_error});
  }
  t.rows.push_back(std::move(row));
  return t;
}

Table cmd_simulate(const Context& c, const std::string& measure) {
  const RegimeModel* model = nullptr;
  if (measure == "P") {
    model = &c.p;
  } else if (measure == "Q") {
    model = &c.q;
  } else {
    throw InputError("--measure must be P or Q");
  }
  const std::vector<double> x = sample_terminal_logs(*model, c.setup.horizon, c.sim);
  Table t{{"path", "log_return", "terminal"}, {}};
  t.rows.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    t.rows.push_back({static_cast<double>(i), x[i], c.setup.spot * std::exp(x[i])});
  return t;
}

// Runs a single-row command once per sweep value, in parallel, rows in order.
template <class Command>
Table with_sweep(const Options& o, Command&& run) {
  const Inputs base = load_inputs(o);
  if (o.sweep.empty()) return run(make_context(o, base));
  const std::string name = o.sweep[0];
  const std::vector<double> values = parse_list(o.sweep[1]);
  std::vector<Table> parts(values.size());
  std::vector<std::exception_ptr> failures(values.size());
  const auto n = static_cast<long>(values.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      Inputs in = base;
      apply_param(in, name, values[k]);
      parts[k] = run(make_context(o, in));
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  // Commands that already report the swept field keep their own column.
  const auto& cols = parts[0].columns;
  const bool prepend = std::find(cols.begin(), cols.end(), name) == cols.end();
  Table out;
  if (prepend) out.columns.push_back(name);
  out.columns.insert(out.columns.end(), cols.begin(), cols.end());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (auto& row : parts[k].rows) {
      if (prepend) row.insert(row.begin(), values[k]);
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

// ---- output ----

std::string format_number(double v, bool table_format) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, table_format ? "%.4f" : "%.12g", v);
  return buf;
}

void write_csv(std::ostream& os, const Table& t, bool table_format) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        os << format_number(*d, table_format);
      } else {
        os << std::get<std::string>(row[i]);
      }
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, const std::string& command, const Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i])) {
        obj[t.columns[i]] = *d;
      } else {
        obj[t.columns[i]] = std::get<std::string>(row[i]);
      }
    }
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

void emit(const Options& o, const std::string& command, const Table& t) {
  auto write = [&](std::ostream& os) {
    if (o.format == "json") {
      write_json(os, command, t);
    } else {
      write_csv(os, t, o.table_format);
    }
  };
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  const std::filesystem::path target(o.out);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw InputError(o.out + ": cannot open for writing");
    write(f);
    f.flush();
    if (!f) throw InputError(o.out + ": write failed");
  }
  std::filesystem::rename(tmp, target);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input:
      return 2;
    case ErrorKind::Numerical:
      return 3;
    case ErrorKind::Infeasible:
      return 4;
  }
  return 3;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model_path, "historical (or risk-neutral) model JSON")
      ->required();
  cmd->add_option("--q-model", o.q_model_path, "pricing model JSON");
  cmd->add_option("--s0", o.s0, "spot price");
  cmd->add_option("--rate", o.rate, "risk-free rate");
  cmd->add_option("--horizon", o.horizon, "horizon T in years");
  cmd->add_option("--alpha", o.alpha, "VaR level");
  cmd->add_option("--budget", o.budget, "hedging budget C");
  cmd->add_option("--nu", o.nu, "contour height for every inversion");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed");
  cmd->add_option("--paths", o.paths, "Monte Carlo paths");
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--table-format", o.table_format, "4-decimal CSV values");
}

void add_sweep(CLI::App* cmd, Options& o) {
  cmd->add_option("--sweep", o.sweep, "<param> <v1,v2,...>")->expected(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regime-switching jump-diffusion VaR and put hedging"};
  app.require_subcommand(1);
  Options o;

  auto* quantile_cmd = app.add_subcommand("quantile", "quantile and unhedged VaR");
  add_common(quantile_cmd, o);
  add_sweep(quantile_cmd, o);

  auto* price_cmd = app.add_subcommand("price", "European put and call prices");
  add_common(price_cmd, o);
  add_sweep(price_cmd, o);
  price_cmd->add_option("--strike", o.strikes, "strikes")->delimiter(',')->required();

  auto* hedge_cmd = app.add_subcommand("hedge", "budget-constrained VaR hedge");
  add_common(hedge_cmd, o);
  add_sweep(hedge_cmd, o);

  auto* frontier_cmd = app.add_subcommand("frontier", "VaR against hedging budget");
  add_common(frontier_cmd, o);
  frontier_cmd->add_option("--budgets", o.budgets, "budgets, ascending")->delimiter(',');

  auto* misspec_cmd = app.add_subcommand("misspec", "hedge with a calibrated GBM");
  add_common(misspec_cmd, o);
  add_sweep(misspec_cmd, o);
  misspec_cmd->add_option("--maturities", o.maturities, "calibration maturities")
      ->delimiter(',');
  misspec_cmd->add_option("--strike-ratios", o.strike_ratios, "calibration strikes / S0")
      ->delimiter(',');
  misspec_cmd->add_option("--premium", o.premium, "premium in the loss: true or gbm");
  misspec_cmd->add_flag("--mc", o.mc, "also estimate beta by Monte Carlo");

  auto* simulate_cmd = app.add_subcommand("simulate", "terminal log-return samples");
  add_common(simulate_cmd, o);
  simulate_cmd->add_option("--measure", o.measure, "P or Q");
  simulate_cmd->add_flag("--antithetic", o.antithetic, "antithetic Brownian draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Table table;
    std::string name;
    if (*quantile_cmd) {
      name = "quantile";
      table = with_sweep(o, [&](const Context& c) { return cmd_quantile(c); });
    } else if (*price_cmd) {
      name = "price";
      table = with_sweep(o, [&](const Context& c) { return cmd_price(c, o.strikes); });
    } else if (*hedge_cmd) {
      name = "hedge";
      table = with_sweep(o, [&](const Context& c) { return cmd_hedge(c); });
    } else if (*frontier_cmd) {
      name = "frontier";
      table = cmd_frontier(make_context(o, load_inputs(o)), o.budgets);
    } else if (*misspec_cmd) {
      name = "misspec";
      table = with_sweep(o, [&](const Context& c) { return cmd_misspec(c, o); });
    } else {
      name = "simulate";
      table = cmd_simulate(make_context(o, load_inputs(o)), o.measure);
    }
    emit(o, name, table);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
