#include "ksfluid/stepper.hpp"

#include <cmath>

#include "ksfluid/mms.hpp"
#include "ksfluid/operators.hpp"
#include "ksfluid/solvers.hpp"

namespace ksfluid {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::BlowupDetected: return "BlowupDetected";
    case RunStatus::SingularityDetected: return "SingularityDetected";
    case RunStatus::TimestepCollapse: return "TimestepCollapse";
    case RunStatus::SolverDivergence: return "SolverDivergence";
    case RunStatus::PositivityViolation: return "PositivityViolation";
    case RunStatus::NonFinite: return "NonFinite";
  }
  return "?";
}

double compute_dt(SimState& state, const StepControl& ctl, double chi,
                  const SchemeOpts& scheme) {
  const double guard = 1e-30;
  const double speed = max_face_speed(state.fluid.u) +
                       chi * max_drift_speed(state.c, scheme.c_face, ctl.c_floor) + guard;
  const double formula = ctl.cfl * state.n.grid().min_h() / speed;
  if (formula < ctl.dt_min)
    throw TimestepCollapse("required dt " + std::to_string(formula) + " below dt_min");
  return std::min(formula, ctl.dt_max);
}

Simulation::Simulation(const ModelConfig& cfg)
    : cfg_(cfg), phi_(make_phi(cfg)), state_(make_initial_state(cfg)), series_(cfg.analysis) {}

double Simulation::next_dt() const {
  // compute_dt closes ghosts only; the const_cast keeps the public signature
  // by-reference without copying the fields.
  return compute_dt(const_cast<SimState&>(state_), cfg_.control, cfg_.chi, cfg_.scheme);
}

void Simulation::record(double dt) {
  series_.append(state_, dt, phi_, cfg_.control.c_floor);
}

void Simulation::advance(double dt) {
  const GridSpec& g = cfg_.grid;
  const StepControl& ctl = cfg_.control;
  const double t_new = state_.t + dt;

  const MmsCase mms;
  ScalarField src_n_field, src_c_field;
  FluxField src_u_field;
  if (cfg_.mms.enabled) {
    src_n_field = ScalarField(g);
    src_c_field = ScalarField(g);
    src_u_field = FluxField(g);
    mms.sample_source_n(g, t_new, cfg_.chi, src_n_field);
    mms.sample_source_c(g, t_new, src_c_field);
    mms.sample_source_u(g, t_new, cfg_.kappa, src_u_field);
  }

  // (a) fluid substep.
  FluidStepOpts fopts;
  fopts.pc = cfg_.scheme.preconditioner;
  fluid_step(state_.fluid, state_.n, phi_, cfg_.kappa, dt, fopts,
             cfg_.mms.enabled ? &src_u_field : nullptr);

  // (b) c substep: explicit advection with the new u, implicit diffusion and
  // decay, explicit source +n:  (1+dt) c^{k+1} - dt Lap c^{k+1} = c^k - dt div(u c) + dt n.
  {
    FluxField adv = advective_flux(state_.c, state_.fluid.u, cfg_.scheme.advection);
    ScalarField div_adv = divergence(adv);
    ScalarField rhs(g, state_.c.bc());
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int k = 0; k < g.cells[2]; ++k) {
          double v = state_.c(i, j, k) - dt * div_adv(i, j, k) + dt * state_.n(i, j, k);
          if (cfg_.mms.enabled) v += dt * src_c_field(i, j, k);
          rhs(i, j, k) = v;
        }
    SolveOpts sopts;
    sopts.tol_inf = 1e-12;
    sopts.pc = cfg_.scheme.preconditioner;
    helmholtz_cell_solve(state_.c, rhs, 1.0 + dt, dt, sopts);
    state_.c.close();
  }

  // (c) n substep: explicit advective + chemotactic fluxes (fresh c),
  // implicit diffusion:  n^{k+1} - dt Lap n^{k+1} = n^k - dt div(F).
  {
    FluxField total = advective_flux(state_.n, state_.fluid.u, cfg_.scheme.advection);
    FluxField chemo = chemotactic_flux(state_.n, state_.c, cfg_.chi, cfg_.scheme.c_face,
                                       ctl.c_floor, cfg_.scheme.advection);
    total.add_scaled(chemo, 1.0);
    ScalarField div_total = divergence(total);
    ScalarField rhs(g, state_.n.bc());
    double rhs_sum = 0.0;
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int k = 0; k < g.cells[2]; ++k) {
          double v = state_.n(i, j, k) - dt * div_total(i, j, k);
          if (cfg_.mms.enabled) v += dt * src_n_field(i, j, k);
          rhs(i, j, k) = v;
          rhs_sum += v;
        }
    SolveOpts sopts;
    sopts.tol_inf = 1e-13 * std::max(1.0, max_value(state_.n));
    sopts.pc = cfg_.scheme.preconditioner;
    helmholtz_cell_solve(state_.n, rhs, 1.0, dt, sopts);
    // The implicit Neumann diffusion conserves the discrete sum exactly;
    // restore the identity against solver truncation with a constant shift.
    double n_sum = 0.0;
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int k = 0; k < g.cells[2]; ++k) n_sum += state_.n(i, j, k);
    const double shift = (rhs_sum - n_sum) / static_cast<double>(g.cell_count());
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int k = 0; k < g.cells[2]; ++k) state_.n(i, j, k) += shift;
    state_.n.close();
  }

  // Post-state gates.
  if (!all_finite(state_.n) || !all_finite(state_.c) || !all_finite(state_.fluid.u) ||
      !all_finite(state_.fluid.P))
    throw NonFinite("non-finite value after step");
  const double nmax = max_value(state_.n);
  if (nmax > ctl.n_cap) throw BlowupDetected("max n exceeded n_cap");
  if (!(min_value(state_.c) > ctl.c_floor))
    throw SingularityDetected("min c at/below c_floor");
  if (min_value(state_.n) < -ctl.positivity_tol)
    throw PositivityViolation("min n below -positivity_tol");

  state_.t = t_new;
  state_.step_index += 1;
}

RunResult Simulation::run(const StepHook& hook) {
  RunResult res;
  res.status = RunStatus::Completed;
  try {
    record(0.0);
    double next_record_t = cfg_.output.record_interval > 0.0 ? cfg_.output.record_interval
                                                             : 0.0;
    while (state_.t < cfg_.T_end) {
      double dt = next_dt();
      // Land exactly on T_end; the final partial step may undercut dt_min.
      if (state_.t + dt > cfg_.T_end) dt = cfg_.T_end - state_.t;
      if (!(dt > 0.0)) break;
      advance(dt);
      const bool at_end = state_.t >= cfg_.T_end;
      if (cfg_.output.record_interval <= 0.0 || state_.t >= next_record_t || at_end) {
        record(dt);
        if (cfg_.output.record_interval > 0.0)
          while (next_record_t <= state_.t) next_record_t += cfg_.output.record_interval;
      }
      if (hook) hook(state_);
    }
  } catch (const BlowupDetected& e) {
    res.status = RunStatus::BlowupDetected;
    res.message = e.what();
  } catch (const SingularityDetected& e) {
    res.status = RunStatus::SingularityDetected;
    res.message = e.what();
  } catch (const SingularityError& e) {
    res.status = RunStatus::SingularityDetected;
    res.message = e.what();
  } catch (const TimestepCollapse& e) {
    res.status = RunStatus::TimestepCollapse;
    res.message = e.what();
  } catch (const SolverDivergence& e) {
    res.status = RunStatus::SolverDivergence;
    res.message = e.what();
  } catch (const PositivityViolation& e) {
    res.status = RunStatus::PositivityViolation;
    res.message = e.what();
  } catch (const NonFinite& e) {
    res.status = RunStatus::NonFinite;
    res.message = e.what();
  }
  res.state = std::move(state_);
  res.series = std::move(series_);
  return res;
}

RunResult run(const ModelConfig& cfg) {
  Simulation sim(cfg);
  return sim.run();
}

}  // namespace ksfluid
