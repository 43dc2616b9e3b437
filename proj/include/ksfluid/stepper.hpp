// One IMEX step of the coupled system (u, then c, then n), adaptive dt, and
// the run loop with blow-up / singularity detection.
#pragma once

#include <functional>
#include <string>

#include "ksfluid/config.hpp"
#include "ksfluid/functionals.hpp"
#include "ksfluid/state.hpp"

namespace ksfluid {

enum class RunStatus {
  Completed,
  BlowupDetected,
  SingularityDetected,
  TimestepCollapse,
  SolverDivergence,
  PositivityViolation,
  NonFinite,
};

const char* to_string(RunStatus s);

/// dt = clamp(cfl * h_min / (max |u| + chi * max(|grad c| / c)_face + guard),
/// dt_min, dt_max). Throws TimestepCollapse when the formula itself falls
/// below dt_min.
double compute_dt(SimState& state, const StepControl& ctl, double chi,
                  const SchemeOpts& scheme);

struct RunResult {
  SimState state;
  FunctionalSeries series;
  RunStatus status = RunStatus::Completed;
  std::string message;
};

/// Owns one simulation instance: config, phi, state, series.
class Simulation {
 public:
  explicit Simulation(const ModelConfig& cfg);

  /// One coupled step with the given dt: fluid, then c (implicit diffusion
  /// and decay), then n (implicit diffusion, explicit transport and
  /// chemotaxis with the updated c). Throws the step-level errors.
  void advance(double dt);

  double next_dt() const;

  SimState& state() { return state_; }
  const ModelConfig& config() const { return cfg_; }
  ScalarField& phi() { return phi_; }
  FunctionalSeries& series() { return series_; }

  /// Appends the functional record for the current state.
  void record(double dt);

  using StepHook = std::function<void(const SimState&)>;

  /// Runs to T_end, recording every record_interval (<= 0: every step).
  /// Errors become statuses.
  RunResult run(const StepHook& hook = {});

 private:
  ModelConfig cfg_;
  ScalarField phi_;
  SimState state_;
  FunctionalSeries series_;
};

/// Convenience wrapper: build and run in one call.
RunResult run(const ModelConfig& cfg);

}  // namespace ksfluid
