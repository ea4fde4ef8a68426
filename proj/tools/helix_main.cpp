#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "helix/experiment.hpp"

namespace {

std::string experiment_list() {
  std::string out;
  for (const auto& name : helix::experiment_names()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-driven XXZ chain: steady states, Zeno-limit convergence "
               "theory, and singular-angle classification"};
  app.get_formatter()->column_width(28);

  std::string experiment;
  app.add_option("experiment", experiment, "one of: " + experiment_list())->required();

  std::string config_path;
  app.add_option("--config", config_path, "flat key = value configuration file");

  // per-field overrides; angle-valued flags accept decimals or pi-rationals
  // such as pi/2 or pi*1/10
  std::string n, j, delta, gamma, theta, phi_total, phi, m, points, start, stop, log_scale,
      out, format, threads, force, tol, max_n;
  app.add_option("--n", n, "chain length N");
  app.add_option("--j", j, "coupling J");
  app.add_option("--delta", delta, "anisotropy");
  app.add_option("--gamma", gamma, "dissipation strength");
  app.add_option("--theta", theta, "boundary polar angle (both ends)");
  app.add_option("--phi-total", phi_total, "total boundary twist Phi");
  app.add_option("--phi", phi, "fixed twisting angle phi");
  app.add_option("--m", m, "winding number");
  app.add_option("--points", points, "sweep points");
  app.add_option("--start", start, "sweep start");
  app.add_option("--stop", stop, "sweep stop");
  app.add_option("--log-scale", log_scale, "logarithmic sweep (true/false)");
  app.add_option("--out", out, "output table path");
  app.add_option("--format", format, "csv or json");
  app.add_option("--threads", threads, "sweep worker threads");
  app.add_option("--force", force, "lift desk-scale caps (true/false)");
  app.add_option("--tol", tol, "steady-state residual tolerance");
  app.add_option("--max-n", max_n, "largest N for counting experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    helix::ExperimentConfig config;
    if (!config_path.empty()) config = helix::parse_config_file(config_path);
    config.experiment = experiment;

    const std::pair<const char*, const std::string*> overrides[] = {
        {"n", &n}, {"j", &j}, {"delta", &delta}, {"gamma", &gamma}, {"theta", &theta},
        {"phi_total", &phi_total}, {"phi", &phi}, {"m", &m}, {"points", &points},
        {"start", &start}, {"stop", &stop}, {"log_scale", &log_scale}, {"out", &out},
        {"format", &format}, {"threads", &threads}, {"force", &force}, {"tol", &tol},
        {"max_n", &max_n}};
    for (const auto& [key, value] : overrides)
      if (!value->empty()) helix::apply_setting(config, key, *value);

    const helix::RunReport report = helix::run_experiment(config);
    std::cerr << "wrote " << report.csv_path << " (" << report.rows << " rows";
    if (report.failures > 0) std::cerr << ", " << report.failures << " failed";
    std::cerr << ") in " << report.wall_seconds << " s\n";
    if (report.failures > 0)
      std::cerr << "error: " << report.failures << " sweep points failed to solve\n";
    return report.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
