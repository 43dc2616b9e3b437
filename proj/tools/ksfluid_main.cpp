// Command-line driver: simulate / verify / params / scan.
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ksfluid/analysis.hpp"
#include "ksfluid/config.hpp"
#include "ksfluid/io.hpp"
#include "ksfluid/stepper.hpp"

namespace fs = std::filesystem;
using namespace ksfluid;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_warnings(const ModelConfig& cfg) {
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
}

int status_exit_code(RunStatus st) {
  switch (st) {
    case RunStatus::Completed:
      return 0;
    case RunStatus::BlowupDetected:
    case RunStatus::SingularityDetected:
      return 2;
    default:
      return 1;
  }
}

int cmd_simulate(const std::string& config_path, const std::string& out_override,
                 int snapshots) {
  ModelConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.output.out_dir = out_override;
  print_warnings(cfg);
  fs::create_directories(cfg.output.out_dir);

  Simulation sim(cfg);
  int next_snap = 1;
  Simulation::StepHook hook;
  if (snapshots > 0 && cfg.T_end > 0.0) {
    hook = [&](const SimState& st) {
      while (next_snap <= snapshots && st.t >= cfg.T_end * next_snap / snapshots - 1e-14) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%04d.snap", next_snap);
        write_snapshot(st, (fs::path(cfg.output.out_dir) / name).string());
        ++next_snap;
      }
    };
  }
  RunResult res = sim.run(hook);
  write_series(res.series, (fs::path(cfg.output.out_dir) / "series.csv").string());

  std::cout << "status: " << to_string(res.status)
            << (res.message.empty() ? "" : " (" + res.message + ")") << "\n";
  std::cout << "t_final: " << fmt(res.state.t) << "  steps: " << res.state.step_index << "\n";
  if (!res.series.empty()) {
    const auto& last = res.series.records().back();
    std::cout << "mass_n: " << fmt(last.mass_n) << "  max_n: " << fmt(last.max_n)
              << "  min_c: " << fmt(last.min_c) << "\n";
  }
  std::cout << "series: " << (fs::path(cfg.output.out_dir) / "series.csv").string() << "\n";
  return status_exit_code(res.status);
}

int cmd_verify(const std::string& config_path, double slack, double factor,
               const std::string& out_override) {
  ModelConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.output.out_dir = out_override;
  print_warnings(cfg);
  fs::create_directories(cfg.output.out_dir);

  // The energy-identity check compares per-step residuals, so record every step.
  ModelConfig run_cfg = cfg;
  run_cfg.output.record_interval = 0.0;
  RunResult res = run(run_cfg);
  write_series(res.series, (fs::path(cfg.output.out_dir) / "series.csv").string());

  std::vector<CheckReport> reports;
  bool all_pass = res.status == RunStatus::Completed;
  std::string status_line = std::string("run: ") + to_string(res.status);

  if (res.status == RunStatus::Completed) {
    reports.push_back(check_mass(res.series, 1e-10));
    reports.push_back(check_lower_bound(res.series, factor));
    try {
      reports.push_back(check_gronwall(res.series, run_cfg.analysis, slack));
    } catch (const AdmissibilityError& e) {
      CheckReport rep;
      rep.name = "gronwall";
      rep.pass = false;
      rep.detail = e.what();
      reports.push_back(rep);
    }
    reports.push_back(check_record_nonneg(res.series));

    // dt/2 rerun: halve both the CFL number and the dt clamps so the step
    // halves whichever constraint binds.
    ModelConfig half = run_cfg;
    half.control.cfl *= 0.5;
    half.control.dt_max *= 0.5;
    half.control.dt_min *= 0.5;
    RunResult res_half = run(half);
    if (res_half.status == RunStatus::Completed) {
      try {
        reports.push_back(check_energy_identity(res.series, res_half.series));
      } catch (const InsufficientData& e) {
        CheckReport rep;
        rep.name = "energy_identity";
        rep.pass = false;
        rep.detail = e.what();
        reports.push_back(rep);
      }
    } else {
      CheckReport rep;
      rep.name = "energy_identity";
      rep.pass = false;
      rep.detail = std::string("dt/2 rerun ended with ") + to_string(res_half.status);
      reports.push_back(rep);
    }
  }

  std::string text = status_line + "\n";
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    char line[320];
    std::snprintf(line, sizeof(line), "%s: %s worst=%.9g at t=%.9g [%ld] %s\n",
                  r.name.c_str(), r.pass ? "PASS" : "FAIL", r.worst, r.worst_t, r.worst_index,
                  r.detail.c_str());
    text += line;
  }
  if (res.status == RunStatus::Completed) {
    const TimeIntegrals ti = time_integrals(res.series);
    char line[320];
    std::snprintf(line, sizeof(line),
                  "time_integrals: dissipation_pr=%.9g dirichlet_u=%.9g n2=%.9g npc_mix=%.9g\n",
                  ti.int_dissipation_pr, ti.int_dirichlet_u, ti.int_n2, ti.int_npc_mix);
    text += line;
  }
  text += std::string("overall: ") + (all_pass ? "PASS" : "FAIL") + "\n";

  std::cout << text;
  std::ofstream rep((fs::path(cfg.output.out_dir) / "verify_report.txt").string());
  rep << text;
  return all_pass ? 0 : 1;
}

int cmd_params(int N, double chi, double p, double* r_opt, double q, double* p0_opt,
               double* r0_opt) {
  AnalysisParams a;
  a.N = N;
  a.chi = chi;
  a.p = p;
  a.q = q;
  a.r = r_opt ? *r_opt : 0.5 * (p - 1.0);
  if (p0_opt) {
    a.p0 = *p0_opt;
  } else {
    const double cap = chi > 0.0 ? 1.0 / (chi * chi) : p + 2.0;
    a.p0 = cap > p ? 0.5 * (p + cap) : p + 1.0;
  }
  a.r0 = r0_opt ? *r0_opt : 0.5 * (a.p0 - 1.0);

  std::cout << "N = " << a.N << "\n";
  std::cout << "chi = " << fmt(a.chi) << "\n";
  try {
    std::cout << "chi_bound = " << fmt(chi_bound(a.N)) << "\n";
  } catch (const UnsupportedDimension& e) {
    std::cout << "chi_bound = undefined (" << e.what() << ")\n";
  }
  std::cout << "p = " << fmt(a.p) << "\n";
  std::cout << "r = " << fmt(a.r) << "\n";
  std::cout << "q = " << fmt(a.q) << "\n";
  std::cout << "p0 = " << fmt(a.p0) << "\n";
  std::cout << "r0 = " << fmt(a.r0) << "\n";
  try {
    const Interval ip = interval_Ip(a.p, a.chi);
    std::cout << "I_p = (" << fmt(ip.lo) << ", " << fmt(ip.hi) << ")\n";
  } catch (const AdmissibilityError&) {
    std::cout << "I_p = undefined\n";
  }
  const ValidationReport rep = validate(a);
  for (const auto& it : rep.items) {
    const char* st = it.status == GateStatus::Pass ? "pass"
                     : it.status == GateStatus::Warn ? "warn"
                                                     : "fail";
    std::cout << "gate." << it.gate << " = " << st << " (" << it.value << ")\n";
  }
  std::cout << "theorem_regime = " << (rep.theorem_regime() ? "true" : "false") << "\n";
  std::cout << "overall = " << (rep.all_pass() ? "pass" : "fail") << "\n";
  return rep.all_pass() ? 0 : 1;
}

struct ScanRow {
  double chi = 0.0;
  RunStatus status = RunStatus::Completed;
  double max_n = 0.0;
  double min_c = 0.0;
  bool in_regime = true;
  bool internal_error = false;
  std::string message;
};

int cmd_scan(const std::string& config_path, const std::string& chi_spec, int jobs,
             const std::string& out_override) {
  ModelConfig base = load_config(config_path);
  if (!out_override.empty()) base.output.out_dir = out_override;

  double lo = 0.0, hi = 0.0;
  int count = 0;
  {
    const auto c1 = chi_spec.find(':');
    const auto c2 = chi_spec.rfind(':');
    if (c1 == std::string::npos || c2 == c1)
      throw ConfigError("--chi expects lo:hi:count");
    lo = std::stod(chi_spec.substr(0, c1));
    hi = std::stod(chi_spec.substr(c1 + 1, c2 - c1 - 1));
    count = std::stoi(chi_spec.substr(c2 + 1));
    if (count < 1) throw ConfigError("--chi count must be >= 1");
  }

  std::vector<ScanRow> rows(static_cast<std::size_t>(count));
  const double bound = chi_bound(base.grid.dim);
  fs::create_directories(base.output.out_dir);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      ScanRow& row = rows[static_cast<std::size_t>(i)];
      row.chi = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
      row.in_regime = row.chi < bound;
      try {
        ModelConfig cfg = base;
        cfg.chi = row.chi;
        cfg.analysis.chi = row.chi;
        cfg.warnings.clear();
        char sub[48];
        std::snprintf(sub, sizeof(sub), "chi_%.6g", row.chi);
        cfg.output.out_dir = (fs::path(base.output.out_dir) / sub).string();
        fs::create_directories(cfg.output.out_dir);
        RunResult res = run(cfg);
        write_series(res.series, (fs::path(cfg.output.out_dir) / "series.csv").string());
        row.status = res.status;
        if (!res.series.empty()) {
          const auto& last = res.series.records().back();
          row.max_n = last.max_n;
          row.min_c = last.min_c;
        }
      } catch (const std::exception& e) {
        row.internal_error = true;
        row.message = e.what();
      }
    }
  };

  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, count);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::printf("%-12s %-20s %-14s %-14s %s\n", "chi", "status", "max_n_end", "min_c_end",
              "regime");
  bool any_internal = false;
  for (const auto& row : rows) {
    any_internal = any_internal || row.internal_error;
    if (row.internal_error) {
      std::printf("%-12.6g %-20s %-14s %-14s %s\n", row.chi, "InternalError", "-", "-",
                  row.message.c_str());
    } else {
      std::printf("%-12.6g %-20s %-14.6g %-14.6g %s\n", row.chi, to_string(row.status),
                  row.max_n, row.min_c, row.in_regime ? "theorem" : "exploratory");
    }
  }
  return any_internal ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured-grid simulator and verification harness for the "
               "singular-sensitivity chemotaxis-fluid system"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int snapshots = 0;
  auto* sim = app.add_subcommand("simulate", "run a simulation and write the series CSV");
  sim->add_option("config", config_path, "config file")->required();
  sim->add_option("--out", out_dir, "output directory (overrides config)");
  sim->add_option("--snapshots", snapshots, "write N evenly spaced snapshots");

  std::string vconfig, vout;
  double slack = 0.05, factor = 0.999;
  auto* ver = app.add_subcommand("verify", "run and check the monitored identities");
  ver->add_option("config", vconfig, "config file")->required();
  ver->add_option("--slack", slack, "allowed relative excess over the exponential bound");
  ver->add_option("--factor", factor, "required min_c / envelope factor");
  ver->add_option("--out", vout, "output directory (overrides config)");

  int N = 2;
  double chi = 0.5, p = 2.0, q = 2.0;
  double r_val = 0.0, p0_val = 0.0, r0_val = 0.0;
  bool has_r = false, has_p0 = false, has_r0 = false;
  auto* par = app.add_subcommand("params", "evaluate the admissibility gates");
  par->add_option("--N", N, "dimension")->required();
  par->add_option("--chi", chi, "chemotactic coefficient")->required();
  par->add_option("--p", p, "exponent p")->required();
  auto* ropt = par->add_option("--r", r_val, "exponent r (default: midpoint of I_p)");
  par->add_option("--q", q, "exponent q");
  auto* p0opt = par->add_option("--p0", p0_val, "exponent p0");
  auto* r0opt = par->add_option("--r0", r0_val, "exponent r0 (default: (p0-1)/2)");

  std::string sconfig, chi_spec, sout;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  auto* scan = app.add_subcommand("scan", "sweep chi across a range");
  scan->add_option("config", sconfig, "config file")->required();
  scan->add_option("--chi", chi_spec, "lo:hi:count")->required();
  scan->add_option("--jobs", jobs, "parallel sub-runs");
  scan->add_option("--out", sout, "output directory (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir, snapshots);
    if (ver->parsed()) return cmd_verify(vconfig, slack, factor, vout);
    if (par->parsed()) {
      has_r = ropt->count() > 0;
      has_p0 = p0opt->count() > 0;
      has_r0 = r0opt->count() > 0;
      return cmd_params(N, chi, p, has_r ? &r_val : nullptr, q, has_p0 ? &p0_val : nullptr,
                        has_r0 ? &r0_val : nullptr);
    }
    if (scan->parsed()) return cmd_scan(sconfig, chi_spec, jobs, sout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
