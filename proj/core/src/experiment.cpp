#include "helix/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "helix/gft.hpp"
#include "helix/ness.hpp"
#include "helix/singularities.hpp"
#include "helix/zeno.hpp"

namespace helix {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::vector<std::string> kExperiments = {
    "sweep_delta",    "sweep_phi",      "gft_sweep",       "gamma_ch_sweep",
    "k_gap_sweep",    "h00_gap_sweep",  "omega_enumerate", "omega_count",
    "purity_vs_gamma", "theta_dependence", "ness_single"};

std::string fmt(double v) {
  if (v == 0) return "0";
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

struct Row {
  std::vector<std::string> cells;
  bool failed = false;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

void parallel_ordered(int count, int threads, const std::function<void(int)>& work) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  auto loop = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
  };
  std::vector<std::thread> pool;
  const int n = std::min(threads, count);
  pool.reserve(n);
  for (int t = 0; t < n; ++t) pool.emplace_back(loop);
  for (auto& th : pool) th.join();
}

double sweep_value(const SweepSpec& sweep, int i) {
  if (sweep.points == 1) return sweep.start;
  const double f = static_cast<double>(i) / (sweep.points - 1);
  if (sweep.log_scale)
    return sweep.start * std::pow(sweep.stop / sweep.start, f);
  return sweep.start + (sweep.stop - sweep.start) * f;
}

double strict_stod(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters in '" + text + "'");
  return v;
}

bool parse_bool(const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + value + "'");
}

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// twisting angle -> (Phi, m) with phi = (Phi + 2 pi m)/(N-1)
std::pair<double, int> twist_to_boundary(double twist, int sites) {
  const double total = (sites - 1) * twist;
  int m = static_cast<int>(std::floor(total / kTwoPi));
  double phi_total = total - kTwoPi * m;
  if (phi_total >= kTwoPi) {
    phi_total -= kTwoPi;
    ++m;
  }
  return {phi_total, m};
}

std::string divergence_name(DivergenceReason reason) {
  switch (reason) {
    case DivergenceReason::None: return "none";
    case DivergenceReason::KSingular: return "k_singular";
    case DivergenceReason::LambdaCoupledDegeneracy: return "lambda_coupled";
  }
  return "unknown";
}

nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment;
  j["n"] = c.chain.sites;
  j["j"] = c.chain.coupling;
  j["delta"] = c.chain.anisotropy;
  j["gamma"] = c.chain.gamma;
  j["theta_left"] = c.chain.theta_left;
  j["theta_right"] = c.chain.theta_right;
  j["phi_left"] = c.chain.phi_left;
  j["phi_right"] = c.chain.phi_right;
  j["phi_total"] = c.total_twist;
  j["m"] = c.winding;
  if (c.twist) j["phi"] = *c.twist;
  const SweepSpec sweep = effective_sweep(c);
  j["sweep_start"] = sweep.start;
  j["sweep_stop"] = sweep.stop;
  j["points"] = sweep.points;
  j["log_scale"] = sweep.log_scale;
  j["out"] = c.output_path;
  j["format"] = c.format == OutputFormat::Csv ? "csv" : "json";
  j["threads"] = c.threads;
  j["force"] = c.force;
  j["max_counting_sites"] = c.max_counting_sites;
  j["tolerance"] = c.solver_tolerance;
  return j;
}

void write_table(const ExperimentConfig& config, const Table& table) {
  std::ofstream out(config.output_path);
  if (!out) throw std::invalid_argument("cannot open output file " + config.output_path);
  if (config.format == OutputFormat::Csv) {
    out << "# helix " << library_version << "\n";
    const nlohmann::json header = config_json(config);
    for (const auto& [key, value] : header.items())
      out << "# " << key << " = "
          << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "\n");
    for (const auto& row : table.rows)
      for (std::size_t i = 0; i < row.cells.size(); ++i)
        out << row.cells[i] << (i + 1 < row.cells.size() ? "," : "\n");
  } else {
    nlohmann::json j;
    j["config"] = config_json(config);
    j["columns"] = table.columns;
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) rows.push_back(row.cells);
    out << j.dump(2) << "\n";
  }
}

void write_sidecar(const ExperimentConfig& config, const RunReport& report,
                   const nlohmann::json& results) {
  nlohmann::json j;
  j["library"] = std::string("helix ") + library_version;
  j["config"] = config_json(config);
  j["tolerances"] = {{"hermiticity", tolerances.hermiticity},
                     {"trace", tolerances.trace},
                     {"eigenvalue_clamp", tolerances.eigenvalue_clamp},
                     {"degeneracy", tolerances.degeneracy},
                     {"coupling", tolerances.coupling},
                     {"k_rcond", tolerances.k_rcond},
                     {"solver", config.solver_tolerance}};
  j["rows"] = report.rows;
  j["failures"] = report.failures;
  j["wall_seconds"] = report.wall_seconds;
  if (!results.is_null()) j["results"] = results;
  std::ofstream out(report.sidecar_path);
  if (!out) throw std::invalid_argument("cannot open sidecar " + report.sidecar_path);
  out << j.dump(2) << "\n";
}

SweepSpec default_sweep(const std::string& experiment) {
  SweepSpec s;
  if (experiment == "sweep_delta" || experiment == "gft_sweep") {
    s = {-1.0, 1.0, 200, false};
  } else if (experiment == "sweep_phi" || experiment == "gamma_ch_sweep" ||
             experiment == "k_gap_sweep" || experiment == "h00_gap_sweep") {
    s = {0.02 * kPi, 0.98 * kPi, 200, false};
  } else if (experiment == "purity_vs_gamma") {
    s = {1e1, 1e4, 13, true};
  } else if (experiment == "theta_dependence") {
    s = {0.05 * kPi, 0.95 * kPi, 60, false};
  } else {
    s = {0, 0, 1, false};
  }
  return s;
}

void require_ness_scale(const ExperimentConfig& config) {
  if (config.chain.sites > 6 && !config.force)
    throw std::invalid_argument(
        "NESS experiments are capped at N <= 6 (4^N superoperator); pass force = true "
        "to override");
}

// ---- per-experiment runners ------------------------------------------------

struct NessPoint {
  ChainSpec spec;
  NessResult result;
  NessObservables obs;
};

NessPoint solve_point(ChainSpec spec, double tol) {
  spec = spec.canonicalized();
  spec.validate();
  NessPoint p;
  p.spec = spec;
  SolveOptions options;
  options.tolerance = tol;
  const Liouvillian liouville = build_liouvillian(spec);
  p.result = solve_ness(liouville, options);
  p.obs = observables(p.result.rho, spec);
  return p;
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double acc = 0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

Table run_delta_sweep(const ExperimentConfig& config, bool with_gft) {
  require_ness_scale(config);
  const SweepSpec sweep = effective_sweep(config);
  const int n = config.chain.sites;

  Table table;
  table.columns = {"delta", "vne", "epsilon", "spin_current", "spin_current_spread",
                   "energy_current"};
  if (with_gft) {
    for (int m = 0; m <= n - 2; ++m) table.columns.push_back("fhat_abs_" + std::to_string(m));
    table.columns.push_back("fhat_argmax");
  }
  table.columns.push_back("residual");
  table.columns.push_back("status");
  table.rows.resize(sweep.points);

  parallel_ordered(sweep.points, config.threads, [&](int i) {
    const double delta = sweep_value(sweep, i);
    Row& row = table.rows[i];
    row.cells.push_back(fmt(delta));
    try {
      ChainSpec spec = config.chain;
      spec.anisotropy = delta;
      const NessPoint p = solve_point(spec, config.solver_tolerance);
      row.cells.push_back(fmt(p.obs.vne_entropy));
      row.cells.push_back(fmt(p.result.purity_defect));
      row.cells.push_back(fmt(mean(p.obs.spin_current)));
      row.cells.push_back(fmt(spread(p.obs.spin_current)));
      row.cells.push_back(fmt(mean(p.obs.energy_current)));
      if (with_gft) {
        const GftSpectrum spectrum = gft(p.obs.transverse_profile, config.total_twist);
        int argmax = 0;
        for (int m = 0; m < spectrum.length(); ++m) {
          row.cells.push_back(fmt(std::abs(spectrum.coefficients(m))));
          if (std::abs(spectrum.coefficients(m)) > std::abs(spectrum.coefficients(argmax)))
            argmax = m;
        }
        row.cells.push_back(std::to_string(argmax));
      }
      row.cells.push_back(fmt(p.result.residual));
      row.cells.push_back("ok");
    } catch (const std::exception& e) {
      while (row.cells.size() + 1 < table.columns.size()) row.cells.push_back("nan");
      row.cells.push_back("failed");
      row.failed = true;
    }
  });
  return table;
}

Table run_phi_sweep(const ExperimentConfig& config) {
  require_ness_scale(config);
  const SweepSpec sweep = effective_sweep(config);

  Table table;
  table.columns = {"phi",          "delta",       "vne",
                   "epsilon",      "spin_current", "spin_current_spread",
                   "energy_current", "residual",  "status"};
  table.rows.resize(sweep.points);

  parallel_ordered(sweep.points, config.threads, [&](int i) {
    const double phi = sweep_value(sweep, i);
    Row& row = table.rows[i];
    const double delta = std::cos(phi);
    row.cells.push_back(fmt(phi));
    row.cells.push_back(fmt(delta));
    try {
      ChainSpec spec = config.chain;
      spec.anisotropy = delta;
      spec.phi_right = twist_to_boundary(phi, spec.sites).first;
      const NessPoint p = solve_point(spec, config.solver_tolerance);
      row.cells.push_back(fmt(p.obs.vne_entropy));
      row.cells.push_back(fmt(p.result.purity_defect));
      row.cells.push_back(fmt(mean(p.obs.spin_current)));
      row.cells.push_back(fmt(spread(p.obs.spin_current)));
      row.cells.push_back(fmt(mean(p.obs.energy_current)));
      row.cells.push_back(fmt(p.result.residual));
      row.cells.push_back("ok");
    } catch (const std::exception&) {
      while (row.cells.size() + 1 < table.columns.size()) row.cells.push_back("nan");
      row.cells.push_back("failed");
      row.failed = true;
    }
  });
  return table;
}

Table run_zeno_sweep(const ExperimentConfig& config) {
  const SweepSpec sweep = effective_sweep(config);
  const std::string& name = config.experiment;
  const double theta = config.chain.theta_left;
  const int sites = config.chain.sites;

  Table table;
  if (name == "gamma_ch_sweep")
    table.columns = {"phi",    "winding",   "delta",   "gamma_ch", "gamma_ch_sq",
                     "divergence_reason", "k_min_eig", "h00_gap",  "status"};
  else if (name == "k_gap_sweep")
    table.columns = {"phi", "k_min_eig", "status"};
  else
    table.columns = {"phi", "h00_gap", "coupling", "status"};
  table.rows.resize(sweep.points);

  parallel_ordered(sweep.points, config.threads, [&](int i) {
    const double phi = sweep_value(sweep, i);
    Row& row = table.rows[i];
    row.cells.push_back(fmt(phi));
    try {
      if (name == "gamma_ch_sweep") {
        const CharacteristicDissipation cd = gamma_ch_at_twist(theta, phi, sites);
        row.cells.push_back(std::to_string(twist_to_boundary(phi, sites).second));
        row.cells.push_back(fmt(std::cos(phi)));
        row.cells.push_back(fmt(cd.gamma_ch));
        row.cells.push_back(fmt(cd.gamma_ch_sq));
        row.cells.push_back(divergence_name(cd.divergence_reason));
        row.cells.push_back(fmt(cd.k_min_eigenvalue));
        row.cells.push_back(fmt(cd.h00_gap));
      } else {
        const ClassifyResult c = classify_numerically(phi, theta, sites);
        if (name == "k_gap_sweep") {
          row.cells.push_back(fmt(c.k_min_eigenvalue));
        } else {
          row.cells.push_back(fmt(c.h00_gap));
          row.cells.push_back(fmt(c.coupling));
        }
      }
      row.cells.push_back("ok");
    } catch (const std::exception&) {
      while (row.cells.size() + 1 < table.columns.size()) row.cells.push_back("nan");
      row.cells.push_back("failed");
      row.failed = true;
    }
  });
  return table;
}

Table run_omega_enumerate(const ExperimentConfig& config) {
  const SingularAngleSet star = omega_star(config.chain.sites);
  const SingularAngleSet k = omega_k(config.chain.sites);
  Table table;
  table.columns = {"numerator", "denominator", "angle", "angle_over_pi", "kind"};
  for (const RationalAngle& a : star.angles) {
    Row row;
    row.cells = {std::to_string(a.num), std::to_string(a.den), fmt(a.value()),
                 fmt(static_cast<double>(a.num) / static_cast<double>(a.den)),
                 k.contains(a) ? "k_singular" : "lambda_coupled"};
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table run_omega_count(const ExperimentConfig& config, nlohmann::json& results) {
  int max_sites = config.max_counting_sites;
  if (max_sites > 2000 && !config.force)
    throw std::invalid_argument("counting experiments are capped at N <= 2000; pass "
                                "force = true to override");
  const auto counts = omega_star_cardinalities(max_sites);
  Table table;
  table.columns = {"n", "cardinality"};
  for (int i = 0; i < static_cast<int>(counts.size()); ++i) {
    Row row;
    row.cells = {std::to_string(i + 3), std::to_string(counts[i])};
    table.rows.push_back(std::move(row));
  }
  results["quadratic_coefficient"] = omega_quadratic_coefficient(max_sites);
  return table;
}

Table run_purity_vs_gamma(const ExperimentConfig& config, nlohmann::json& results) {
  require_ness_scale(config);
  const SweepSpec sweep = effective_sweep(config);
  const int sites = config.chain.sites;
  const double theta = config.chain.theta_left;

  const CharacteristicDissipation cd =
      gamma_ch(theta, config.total_twist, config.winding, sites, config.chain.coupling);
  results["gamma_ch"] = cd.gamma_ch;
  results["gamma_ch_sq"] = cd.gamma_ch_sq;
  results["divergence_reason"] = divergence_name(cd.divergence_reason);

  const double twist =
      (config.total_twist + kTwoPi * config.winding) / (sites - 1);
  Table table;
  table.columns = {"gamma", "epsilon", "prediction", "ratio", "vne", "residual", "status"};
  table.rows.resize(sweep.points);

  parallel_ordered(sweep.points, config.threads, [&](int i) {
    const double gamma = sweep_value(sweep, i);
    Row& row = table.rows[i];
    row.cells.push_back(fmt(gamma));
    try {
      ChainSpec spec = config.chain;
      spec.anisotropy = std::cos(twist);
      spec.gamma = gamma;
      spec.phi_right = config.total_twist;
      const NessPoint p = solve_point(spec, config.solver_tolerance);
      const double prediction = purity_prediction(cd.gamma_ch, gamma);
      row.cells.push_back(fmt(p.result.purity_defect));
      row.cells.push_back(fmt(prediction));
      row.cells.push_back(fmt(prediction > 0 ? p.result.purity_defect / prediction
                                             : std::numeric_limits<double>::quiet_NaN()));
      row.cells.push_back(fmt(p.obs.vne_entropy));
      row.cells.push_back(fmt(p.result.residual));
      row.cells.push_back("ok");
    } catch (const std::exception&) {
      while (row.cells.size() + 1 < table.columns.size()) row.cells.push_back("nan");
      row.cells.push_back("failed");
      row.failed = true;
    }
  });
  return table;
}

Table run_theta_dependence(const ExperimentConfig& config) {
  const SweepSpec sweep = effective_sweep(config);
  const int sites = config.chain.sites;
  const double twist = config.twist.value_or(2.0 * kPi / 7.0);

  Table table;
  table.columns = {"theta", "gamma_ch", "c_ratio", "status"};
  table.rows.resize(sweep.points);

  parallel_ordered(sweep.points, config.threads, [&](int i) {
    const double theta = sweep_value(sweep, i);
    Row& row = table.rows[i];
    row.cells.push_back(fmt(theta));
    try {
      const CharacteristicDissipation cd = gamma_ch_at_twist(theta, twist, sites);
      row.cells.push_back(fmt(cd.gamma_ch));
      row.cells.push_back(fmt(c_ratio(sites, twist, theta)));
      row.cells.push_back("ok");
    } catch (const std::exception&) {
      while (row.cells.size() + 1 < table.columns.size()) row.cells.push_back("nan");
      row.cells.push_back("failed");
      row.failed = true;
    }
  });
  return table;
}

Table run_ness_single(const ExperimentConfig& config, nlohmann::json& results) {
  require_ness_scale(config);
  const NessPoint p = solve_point(config.chain, config.solver_tolerance);
  const int n = p.spec.sites;

  results["vne"] = p.obs.vne_entropy;
  results["epsilon"] = p.result.purity_defect;
  results["spin_current"] = mean(p.obs.spin_current);
  results["spin_current_spread"] = spread(p.obs.spin_current);
  results["energy_current"] = mean(p.obs.energy_current);
  results["residual"] = p.result.residual;
  results["method"] = p.result.method == NessMethod::NullSpace ? "null_space"
                      : p.result.method == NessMethod::InverseIteration
                          ? "inverse_iteration"
                          : "time_evolution";
  results["iterations"] = p.result.iterations;
  results["kernel_multiplicity"] = p.result.kernel_multiplicity;

  Table table;
  table.columns = {"site", "sx", "sy", "sz", "f_re", "f_im", "spin_current",
                   "energy_current"};
  for (int site = 1; site <= n; ++site) {
    Row row;
    const BlochVector& b = p.obs.magnetization[site - 1];
    row.cells = {std::to_string(site), fmt(b.x), fmt(b.y), fmt(b.z)};
    if (site <= n - 1) {
      row.cells.push_back(fmt(p.obs.transverse_profile(site - 1).real()));
      row.cells.push_back(fmt(p.obs.transverse_profile(site - 1).imag()));
      row.cells.push_back(fmt(p.obs.spin_current[site - 1]));
    } else {
      row.cells.insert(row.cells.end(), {"nan", "nan", "nan"});
    }
    row.cells.push_back(site >= 2 && site <= n - 1 ? fmt(p.obs.energy_current[site - 2])
                                                   : "nan");
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

const std::vector<std::string>& experiment_names() { return kExperiments; }

SweepSpec effective_sweep(const ExperimentConfig& config) {
  SweepSpec sweep = default_sweep(config.experiment);
  if (config.sweep.start) sweep.start = *config.sweep.start;
  if (config.sweep.stop) sweep.stop = *config.sweep.stop;
  if (config.sweep.points) sweep.points = *config.sweep.points;
  if (config.sweep.log_scale) sweep.log_scale = *config.sweep.log_scale;
  return sweep;
}

double parse_angle(const std::string& text) {
  const std::string s = [&] {
    std::string t;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    return t;
  }();
  if (s.empty()) throw std::invalid_argument("parse_angle: empty angle");

  double sign = 1.0;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    if (s[pos] == '-') sign = -1.0;
    ++pos;
  }
  const std::string body = s.substr(pos);
  const std::size_t pi_at = body.find("pi");
  if (pi_at == std::string::npos) return sign * strict_stod(body);

  double coefficient = 1.0;
  if (pi_at > 0) {
    std::string prefix = body.substr(0, pi_at);
    if (!prefix.empty() && prefix.back() == '*') prefix.pop_back();
    if (!prefix.empty()) coefficient = strict_stod(prefix);
  }
  const std::string suffix = body.substr(pi_at + 2);
  if (!suffix.empty()) {
    if (suffix[0] == '/') {
      coefficient /= strict_stod(suffix.substr(1));
    } else if (suffix[0] == '*') {
      const std::string rest = suffix.substr(1);
      const std::size_t slash = rest.find('/');
      if (slash == std::string::npos) {
        coefficient *= strict_stod(rest);
      } else {
        coefficient *= strict_stod(rest.substr(0, slash));
        coefficient /= strict_stod(rest.substr(slash + 1));
      }
    } else {
      throw std::invalid_argument("parse_angle: cannot parse '" + text + "'");
    }
  }
  return sign * coefficient * kPi;
}

void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value) {
  if (key == "experiment") {
    config.experiment = value;
  } else if (key == "n" || key == "sites") {
    config.chain.sites = std::stoi(value);
  } else if (key == "j" || key == "coupling") {
    config.chain.coupling = strict_stod(value);
  } else if (key == "delta" || key == "anisotropy") {
    config.chain.anisotropy = strict_stod(value);
  } else if (key == "gamma") {
    config.chain.gamma = strict_stod(value);
  } else if (key == "theta") {
    config.chain.theta_left = config.chain.theta_right = parse_angle(value);
  } else if (key == "theta_left") {
    config.chain.theta_left = parse_angle(value);
  } else if (key == "theta_right") {
    config.chain.theta_right = parse_angle(value);
  } else if (key == "phi_left") {
    config.chain.phi_left = parse_angle(value);
  } else if (key == "phi_total" || key == "phi_right") {
    config.total_twist = parse_angle(value);
    config.chain.phi_right = config.total_twist;
  } else if (key == "phi" || key == "twist") {
    config.twist = parse_angle(value);
  } else if (key == "m" || key == "winding") {
    config.winding = std::stoi(value);
  } else if (key == "sweep_start" || key == "start") {
    config.sweep.start = parse_angle(value);
  } else if (key == "sweep_stop" || key == "stop") {
    config.sweep.stop = parse_angle(value);
  } else if (key == "points") {
    config.sweep.points = std::stoi(value);
  } else if (key == "log_scale" || key == "log") {
    config.sweep.log_scale = parse_bool(value);
  } else if (key == "out" || key == "output") {
    config.output_path = value;
  } else if (key == "format") {
    if (value == "csv")
      config.format = OutputFormat::Csv;
    else if (value == "json")
      config.format = OutputFormat::Json;
    else
      throw std::invalid_argument("format must be csv or json, got '" + value + "'");
  } else if (key == "threads") {
    config.threads = std::stoi(value);
  } else if (key == "force") {
    config.force = parse_bool(value);
  } else if (key == "max_counting_sites" || key == "max_n") {
    config.max_counting_sites = std::stoi(value);
  } else if (key == "tol" || key == "tolerance") {
    config.solver_tolerance = strict_stod(value);
  } else {
    throw std::invalid_argument("unknown configuration key '" + key + "'");
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  ExperimentConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trimmed(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trimmed(stripped.substr(0, eq));
    const std::string value = trimmed(stripped.substr(eq + 1));
    try {
      apply_setting(config, key, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return config;
}

RunReport run_experiment(const ExperimentConfig& input) {
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentConfig config = input;
  if (std::find(kExperiments.begin(), kExperiments.end(), config.experiment) ==
      kExperiments.end())
    throw std::invalid_argument("unknown experiment '" + config.experiment + "'");
  const SweepSpec sweep = effective_sweep(config);
  if (sweep.points < 1) throw std::invalid_argument("points must be >= 1");
  if (sweep.log_scale && !(sweep.start > 0 && sweep.stop > 0))
    throw std::invalid_argument("log sweeps need positive bounds");
  if (config.threads < 1) config.threads = 1;

  nlohmann::json results;
  Table table;
  const std::string& name = config.experiment;
  if (name == "sweep_delta")
    table = run_delta_sweep(config, false);
  else if (name == "gft_sweep")
    table = run_delta_sweep(config, true);
  else if (name == "sweep_phi")
    table = run_phi_sweep(config);
  else if (name == "gamma_ch_sweep" || name == "k_gap_sweep" || name == "h00_gap_sweep")
    table = run_zeno_sweep(config);
  else if (name == "omega_enumerate")
    table = run_omega_enumerate(config);
  else if (name == "omega_count")
    table = run_omega_count(config, results);
  else if (name == "purity_vs_gamma")
    table = run_purity_vs_gamma(config, results);
  else if (name == "theta_dependence")
    table = run_theta_dependence(config);
  else
    table = run_ness_single(config, results);

  RunReport report;
  report.rows = static_cast<int>(table.rows.size());
  for (const Row& row : table.rows) report.failures += row.failed ? 1 : 0;
  report.csv_path = config.output_path;
  report.sidecar_path = config.output_path + ".meta.json";
  report.exit_code = report.failures > 0 ? 2 : 0;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_table(config, table);
  write_sidecar(config, report, results);
  return report;
}

}  // namespace helix
