#include "neurofl/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "neurofl/errors.hpp"

namespace neurofl {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw std::ios_base::failure("failed writing '" + path.string() + "'");
}

std::string csv_string(const Trajectory& traj) {
  std::ostringstream buf;
  write_csv(buf, traj);
  return buf.str();
}

void print_metrics_row(std::ostream& os, const std::string& label, const Metrics& m) {
  os << std::left << std::setw(13) << label << std::right << std::setw(14) << m.rms_error << std::setw(14) << m.iae
     << std::setw(14) << m.steady_state_error << std::setw(14) << m.max_abs_u << std::setw(9)
     << (m.bounded ? "yes" : "no") << '\n';
}

void print_metrics_header(std::ostream& os) {
  os << std::left << std::setw(13) << "run" << std::right << std::setw(14) << "rms_error" << std::setw(14) << "iae"
     << std::setw(14) << "sse" << std::setw(14) << "max_abs_u" << std::setw(9) << "bounded" << '\n';
}

void print_terminal(std::ostream& os, const std::string& label, const RunResult& run) {
  if (const auto& term = run.trajectory.terminal) {
    os << label << ": " << to_string(term->kind) << " at t = " << term->t << ": " << term->message << '\n';
  }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, ControlMode mode) {
  const PlantModel truth = make_plant(cfg.plant.kind, cfg.plant.params);
  const PlantModel nominal = make_plant(cfg.nominal.kind, cfg.nominal.params);
  GainVector gains = binomial_gains(truth.order, cfg.lambda);

  auto ctrl = [&] {
    if (mode == ControlMode::baseline) return ControllerState::baseline(std::move(gains), cfg.u_limit);
    RbfNetwork::Params p;
    {
      const RbfNetwork base = default_network(cfg.network.neurons, cfg.network.s_range, cfg.network.eta);
      p.centers.assign(base.centers().begin(), base.centers().end());
      p.widths.assign(base.widths().begin(), base.widths().end());
      p.weights.assign(base.weights().begin(), base.weights().end());
    }
    p.learning_rate = cfg.network.eta;
    p.leakage = cfg.network.kappa;
    p.weight_cap = cfg.network.weight_cap;
    return ControllerState::compensated(std::move(gains), RbfNetwork(std::move(p)), cfg.u_limit);
  }();

  RunResult result{mode, {}, {}};
  result.trajectory = run_closed_loop(truth, nominal, std::move(ctrl), cfg.reference, cfg.disturbance,
                                      StateVector(cfg.initial_state), cfg.duration, cfg.dt_ctrl, cfg.substeps);
  result.metrics = compute_metrics(result.trajectory);
  return result;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.order;
  out << 't';
  for (std::size_t i = 0; i < n; ++i) out << ",x" << i;
  for (std::size_t i = 0; i < n; ++i) out << ",xd" << i;
  out << ",u,s,d_hat,d_true,w_norm,event\n";
  for (const auto& s : traj.samples) {
    out << format_double(s.t);
    for (double v : s.x) out << ',' << format_double(v);
    for (double v : s.x_d) out << ',' << format_double(v);
    for (double v : {s.u, s.s, s.d_hat, s.d_true, s.w_norm}) out << ',' << format_double(v);
    out << ',' << s.events.to_string() << '\n';
  }
}

json metrics_to_json(const RunResult& run) {
  const Metrics& m = run.metrics;
  std::size_t saturations = 0;
  std::size_t cap_hits = 0;
  for (const auto& s : run.trajectory.samples) {
    saturations += s.events.contains(Event::saturation) ? 1 : 0;
    cap_hits += s.events.contains(Event::weight_cap) ? 1 : 0;
  }
  json j;
  j["mode"] = to_string(run.mode);
  j["samples"] = run.trajectory.samples.size();
  j["metrics"] = {{"rms_error", number_or_null(m.rms_error)},
                  {"iae", number_or_null(m.iae)},
                  {"steady_state_error", number_or_null(m.steady_state_error)},
                  {"max_abs_u", number_or_null(m.max_abs_u)},
                  {"bounded", m.bounded}};
  j["events"] = {{"saturation", saturations}, {"weight_cap", cap_hits}};
  if (const auto& term = run.trajectory.terminal) {
    j["fault"] = {{"kind", to_string(term->kind)}, {"t", term->t}, {"message", term->message}};
  } else {
    j["fault"] = nullptr;
  }
  return j;
}

double steady_state_ratio(const Metrics& baseline, const Metrics& compensated) {
  const double num = std::abs(baseline.steady_state_error);
  const double den = std::abs(compensated.steady_state_error);
  if (num == 0.0 && den == 0.0) return 1.0;
  return num / den;
}

std::filesystem::path resolve_out_dir(const ExperimentConfig& cfg, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (cfg.output.dir) return *cfg.output.dir;
  if (const char* env = std::getenv("NEUROFL_OUT_DIR"); env && *env) return env;
  return ".";
}

int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& console) {
  RunResult run;
  try {
    run = run_experiment(cfg, cfg.mode);
  } catch (const DomainError& e) {
    console << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const auto csv_path = out_dir / (cfg.output.name + ".csv");
  const auto json_path = out_dir / (cfg.output.name + ".metrics.json");
  try {
    std::filesystem::create_directories(out_dir);
    write_file(csv_path, csv_string(run.trajectory));
    write_file(json_path, metrics_to_json(run).dump(2) + "\n");
  } catch (const std::exception& e) {
    console << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  }

  print_metrics_header(console);
  print_metrics_row(console, to_string(run.mode), run.metrics);
  print_terminal(console, to_string(run.mode), run);
  console << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
  return run.metrics.bounded ? kExitOk : kExitRuntimeFault;
}

int cmd_compare(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& console) {
  RunResult baseline;
  RunResult compensated;
  try {
    auto pending = std::async(std::launch::async, [&cfg] { return run_experiment(cfg, ControlMode::baseline); });
    compensated = run_experiment(cfg, ControlMode::compensated);
    baseline = pending.get();
  } catch (const DomainError& e) {
    console << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const double ratio = steady_state_ratio(baseline.metrics, compensated.metrics);
  json summary;
  summary["baseline"] = metrics_to_json(baseline);
  summary["compensated"] = metrics_to_json(compensated);
  summary["steady_state_ratio"] = number_or_null(ratio);

  const auto base_csv = out_dir / (cfg.output.name + "_baseline.csv");
  const auto comp_csv = out_dir / (cfg.output.name + "_compensated.csv");
  const auto json_path = out_dir / (cfg.output.name + "_compare.json");
  try {
    std::filesystem::create_directories(out_dir);
    write_file(base_csv, csv_string(baseline.trajectory));
    write_file(comp_csv, csv_string(compensated.trajectory));
    write_file(json_path, summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    console << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  }

  print_metrics_header(console);
  print_metrics_row(console, "baseline", baseline.metrics);
  print_metrics_row(console, "compensated", compensated.metrics);
  console << "steady-state error ratio (baseline / compensated): " << ratio << '\n';
  print_terminal(console, "baseline", baseline);
  print_terminal(console, "compensated", compensated);
  console << "wrote " << base_csv.string() << ", " << comp_csv.string() << " and " << json_path.string() << '\n';
  return baseline.metrics.bounded && compensated.metrics.bounded ? kExitOk : kExitRuntimeFault;
}

}  // namespace neurofl
