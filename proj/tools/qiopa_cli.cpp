// qiopa: pair extraction, three-qubit analysis, parameter sweeps and the
// oracle verification report from the command line.
//
// Exit codes: 0 success, 1 invalid input, 2 verification failure,
// 3 numeric fault (truncation, positivity, empty postselection).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qiopa/closed_forms.hpp"
#include "qiopa/errors.hpp"
#include "qiopa/loss.hpp"
#include "qiopa/matrix_io.hpp"
#include "qiopa/metrics.hpp"
#include "qiopa/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qiopa;

namespace {

constexpr int kInvalidInput = 1;
constexpr int kVerifyFailed = 2;
constexpr int kNumericFault = 3;

struct Config {
  std::string mode;
  double g = 1.0;
  double eta = 0.0;
  std::string qubit = "H";
  int n_max = 12;
  double tol = 1e-12;
  std::optional<double> verify_tol;
  std::string out;
  std::string format = "json";
  std::string convention = "b";
  std::string path = "series";
  std::string metric;
  double g_min = 0.0;
  double g_max = 5.0;
  int g_steps = 51;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

PolarizationQubit parse_qubit(const std::string& s) {
  if (s == "H" || s == "V" || s == "+" || s == "-") return PolarizationQubit::preset(s);
  const auto parts = split(s, ',');
  if (parts.size() != 4)
    throw std::invalid_argument("qubit must be H, V, +, - or 're_alpha,im_alpha,re_beta,im_beta'");
  std::vector<double> x;
  for (const auto& p : parts) {
    std::size_t used = 0;
    x.push_back(std::stod(p, &used));
    if (used != p.size()) throw std::invalid_argument("bad number in qubit: " + p);
  }
  return {Complex(x[0], x[1]), Complex(x[2], x[3])};
}

LossSpec loss_of(const Config& c) {
  LossSpec loss{c.eta};
  if (c.convention == "a") loss.convention = LossConvention::a;
  else if (c.convention != "b") throw std::invalid_argument("convention must be a or b");
  loss.validate();
  return loss;
}

PairOptions pair_options(const Config& c) {
  PairOptions o;
  if (c.path == "full") o.path = PairPath::full_ket;
  else if (c.path != "series") throw std::invalid_argument("path must be series or full");
  if (c.n_max < 1) throw std::invalid_argument("n-max must be >= 1");
  if (!(c.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  o.n_max = c.n_max;
  o.tolerance = c.tol;
  return o;
}

std::set<std::string> formats(const Config& c) {
  std::set<std::string> out;
  for (const auto& f : split(c.format, ',')) {
    if (f != "json" && f != "csv") throw std::invalid_argument("format must be json and/or csv");
    out.insert(f);
  }
  if (out.empty()) throw std::invalid_argument("no output format given");
  return out;
}

class Writer {
 public:
  explicit Writer(const Config& c) : dir_(c.out), formats_(formats(c)) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }

  void matrix(const std::string& stem, const io::MatrixRecord& rec) {
    if (dir_.empty()) return;
    if (formats_.count("json")) write(stem + ".json", io::dump_json(io::to_json(rec)));
    if (formats_.count("csv")) {
      std::ostringstream os;
      io::write_matrix_csv(os, rec);
      write(stem + ".csv", os.str());
    }
  }

  void text(const std::string& name, const std::string& body) {
    if (!dir_.empty()) write(name, body);
  }

 private:
  void write(const std::string& name, const std::string& body) {
    const fs::path p = fs::path(dir_) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << body;
  }

  std::string dir_;
  std::set<std::string> formats_;
};

json fit_json(const WernerFit& f) {
  return {{"bell", to_string(f.bell)},
          {"weight", f.weight},
          {"residual", f.residual},
          {"ambiguous", f.ambiguous},
          {"entangled", f.entangled()}};
}

double max_dev(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

void require_mode(const Config& c, const std::string& mode) {
  if (!c.mode.empty() && c.mode != mode)
    throw std::invalid_argument("this command needs mode=" + mode + " (got " + c.mode + ")");
}

int cmd_pair_extract(const Config& c) {
  require_mode(c, "cat");
  const GainParams gain(c.g, c.eta);
  const PolarizationQubit q = parse_qubit(c.qubit);
  const LossSpec loss = loss_of(c);
  const double t = loss.effective_t(gain);
  const PairExtraction res = pair_extracted_rho(gain, q, loss, pair_options(c));
  const DensityMatrix analytic = closed_form::pair(t, q);
  const DensityMatrix in_basis = closed_form::in_input_basis(res.rho, q);

  json meta{{"qubit", c.qubit}, {"eta", c.eta}, {"convention", c.convention}, {"path", c.path}};
  Writer w(c);
  w.matrix("pair_numeric", io::record(res.rho, c.g, t, meta));
  w.matrix("pair_analytic", io::record(analytic, c.g, t, meta));
  w.matrix("pair_input_basis", io::record(in_basis, c.g, t, meta));

  json summary{{"g", c.g},
               {"t", t},
               {"max_deviation", max_dev(res.rho.matrix(), analytic.matrix())},
               {"input_basis_deviation",
                max_dev(in_basis.matrix(), closed_form::h_input(t).matrix())},
               {"concurrence", concurrence(res.rho)},
               {"concurrence_closed_form", closed_form::pair_concurrence(t)},
               {"werner_fit", fit_json(werner_fit(res.rho))},
               {"success_probability", res.success_probability},
               {"series_terms", res.terms},
               {"warning", res.warning ? json(*res.warning) : json()}};
  w.text("pair_summary.json", io::dump_json(summary));
  std::cout << io::dump_json(summary);
  if (res.warning) std::cerr << "warning: " << *res.warning << "\n";
  return 0;
}

int cmd_three_qubit(const Config& c) {
  require_mode(c, "sigma");
  const GainParams gain(c.g, c.eta);
  const LossSpec loss = loss_of(c);
  const double t = loss.effective_t(gain);
  const PairExtraction res = pair_extracted_rho3(gain, loss, pair_options(c));
  const DensityMatrix analytic = closed_form::three_qubit(t);

  json meta{{"eta", c.eta}, {"convention", c.convention}, {"path", c.path}};
  Writer w(c);
  w.matrix("three_qubit_numeric", io::record(res.rho, c.g, t, meta));
  w.matrix("three_qubit_analytic", io::record(analytic, c.g, t, meta));

  json pairs = json::object();
  const std::vector<std::pair<closed_form::ReducedPair, std::vector<std::string>>> traces{
      {closed_form::ReducedPair::k1k2, {"k1", "k2"}},
      {closed_form::ReducedPair::kTk1, {"T", "k1"}},
      {closed_form::ReducedPair::kTk2, {"T", "k2"}}};
  for (const auto& [sel, keep] : traces) {
    const DensityMatrix num = partial_trace(res.rho, keep);
    const DensityMatrix closed = closed_form::reduced_pair(t, sel);
    const std::string name = closed_form::to_string(sel);
    w.matrix("reduced_" + name + "_numeric", io::record(num, c.g, t, meta));
    w.matrix("reduced_" + name + "_analytic", io::record(closed, c.g, t, meta));
    const WernerFit fit = werner_fit(num);
    pairs[name] = {{"max_deviation", max_dev(num.matrix(), closed.matrix())},
                   {"werner_fit", fit_json(fit)},
                   {"concurrence", concurrence(num)},
                   {"verdict", fit.entangled() ? "entangled" : "separable"}};
  }
  const DensityMatrix trigger = partial_trace(res.rho, {"T"});
  json summary{{"g", c.g},
               {"t", t},
               {"max_deviation", max_dev(res.rho.matrix(), analytic.matrix())},
               {"werner_p", closed_form::werner_p(t)},
               {"werner_q", closed_form::werner_q(t)},
               {"werner_l", closed_form::werner_l()},
               {"reduced", pairs},
               {"trigger_marginal_deviation",
                max_dev(trigger.matrix(), Matrix::Identity(2, 2) / 2.0)},
               {"success_probability", res.success_probability},
               {"series_terms", res.terms},
               {"warning", res.warning ? json(*res.warning) : json()}};
  w.text("three_qubit_summary.json", io::dump_json(summary));
  std::cout << io::dump_json(summary);
  if (res.warning) std::cerr << "warning: " << *res.warning << "\n";
  return 0;
}

const std::vector<std::string> kMetrics{"clone_fidelity",   "anticlone_fidelity",
                                        "concurrence_pair", "concurrence_k1k2",
                                        "concurrence_kTk1", "werner_p",
                                        "werner_q",         "hs_distance_k1"};

double sweep_value(const std::string& metric, const GainParams& gain, const LossSpec& loss,
                   const PairOptions& opts) {
  const auto h = [&] { return pair_extracted_rho(gain, PolarizationQubit::H(), loss, opts).rho; };
  const auto three = [&] { return pair_extracted_rho3(gain, loss, opts).rho; };
  if (metric == "clone_fidelity")
    return fidelity_pure(PolarizationQubit::H(), partial_trace(h(), {"k1"}));
  if (metric == "anticlone_fidelity")
    return fidelity_pure(PolarizationQubit::V(), partial_trace(h(), {"k2"}));
  if (metric == "concurrence_pair") return concurrence(h());
  if (metric == "concurrence_k1k2") return concurrence(partial_trace(three(), {"k1", "k2"}));
  if (metric == "concurrence_kTk1") return concurrence(partial_trace(three(), {"T", "k1"}));
  if (metric == "werner_p") return werner_fit(partial_trace(three(), {"k1", "k2"})).weight;
  if (metric == "werner_q") return werner_fit(partial_trace(three(), {"T", "k1"})).weight;
  if (metric == "hs_distance_k1") {
    const auto v = pair_extracted_rho(gain, PolarizationQubit::V(), loss, opts).rho;
    return hs_distance(partial_trace(h(), {"k1"}), partial_trace(v, {"k1"}));
  }
  std::string names;
  for (const auto& m : kMetrics) names += (names.empty() ? "" : ", ") + m;
  throw std::invalid_argument("unknown metric '" + metric + "'; valid: " + names);
}

int cmd_sweep(const Config& c) {
  if (c.metric.empty()) sweep_value("", GainParams(0.0), LossSpec{}, {});
  if (c.g_steps < 1) throw std::invalid_argument("g-steps must be >= 1");
  if (!(c.g_min >= 0.0) || !(c.g_max >= c.g_min))
    throw std::invalid_argument("need 0 <= g-min <= g-max");
  const LossSpec loss = loss_of(c);
  const PairOptions opts = pair_options(c);
  std::vector<io::SweepRow> rows;
  for (int i = 0; i < c.g_steps; ++i) {
    const double g =
        c.g_steps == 1 ? c.g_min : c.g_min + (c.g_max - c.g_min) * i / (c.g_steps - 1);
    const GainParams gain(g, c.eta);
    rows.push_back({g, loss.effective_t(gain), sweep_value(c.metric, gain, loss, opts)});
  }
  std::ostringstream os;
  io::write_sweep_csv(os, rows);
  Writer(c).text("sweep_" + c.metric + ".csv", os.str());
  std::cout << os.str();
  return 0;
}

int cmd_verify(const Config& c) {
  verify::Options opts;
  opts.tolerance = c.verify_tol;
  const verify::Report report = verify::run(opts);
  Writer(c).text("verify.json", io::dump_json(verify::to_json(report, opts)));
  std::cout << verify::to_text(report);
  return report.all_pass() ? 0 : kVerifyFailed;
}

void add_common(CLI::App& app, Config& c) {
  app.add_option("--mode", c.mode, "Scenario: cat (pair-extract) or sigma (three-qubit)")
      ->check(CLI::IsMember({"cat", "sigma"}));
  app.add_option("--g", c.g, "Parametric gain g >= 0");
  app.add_option("--eta", c.eta, "Beam-splitter parameter in [0, 1]; 0 is the high-loss limit");
  app.add_option("--qubit", c.qubit, "Input qubit: H, V, +, - or re_a,im_a,re_b,im_b");
  app.add_option("--n-max", c.n_max, "Series truncation order for the full-ket path");
  app.add_option("--tol", c.tol, "Series tolerance (verify: numeric check threshold)");
  app.add_option("--out", c.out, "Output directory");
  app.add_option("--format", c.format, "Matrix file formats: json, csv or json,csv");
  app.add_option("--convention", c.convention, "Beam-splitter amplitude convention")
      ->check(CLI::IsMember({"a", "b"}));
  app.add_option("--path", c.path, "Pair extraction path")->check(CLI::IsMember({"series", "full"}));
  app.add_option("--metric", c.metric, "Sweep metric");
  app.add_option("--g-min", c.g_min, "Sweep start");
  app.add_option("--g-max", c.g_max, "Sweep end");
  app.add_option("--g-steps", c.g_steps, "Sweep points");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-injected optical parametric amplifier: pair-extraction toolkit"};
  app.set_config("--config", "", "Flat key = value configuration file; flags override it");
  app.require_subcommand(1);
  Config c;
  add_common(app, c);

  auto* pair = app.add_subcommand("pair-extract", "Two-qubit pair-extracted state");
  auto* three = app.add_subcommand("three-qubit", "Three-qubit state for the entangled injection");
  auto* sweep = app.add_subcommand("sweep", "Metric versus gain as CSV (g, t, value)");
  auto* verify = app.add_subcommand("verify", "Run the oracle-equivalence report");
  for (auto* s : {pair, three, sweep, verify}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInvalidInput;
  }
  if (verify->parsed() && app.get_option("--tol")->count() > 0) c.verify_tol = c.tol;

  try {
    if (pair->parsed()) return cmd_pair_extract(c);
    if (three->parsed()) return cmd_three_qubit(c);
    if (sweep->parsed()) return cmd_sweep(c);
    if (verify->parsed()) return cmd_verify(c);
  } catch (const NumericFault& e) {
    std::cerr << "numeric fault: " << e.what() << "\n";
    return kNumericFault;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}
