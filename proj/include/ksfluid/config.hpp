// Problem description: grid, model constants, initial data, analysis tuple,
// step control, scheme switches, output options. Parsed from INI-style text
// (sections, key = value, # comments); unknown keys are errors; the
// serialized form re-parses to an equal config.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ksfluid/analysis.hpp"
#include "ksfluid/grid.hpp"
#include "ksfluid/operators.hpp"
#include "ksfluid/solvers.hpp"
#include "ksfluid/state.hpp"

namespace ksfluid {

enum class PhiKind { Constant, Linear, File };

struct PhiSpec {
  PhiKind kind = PhiKind::Constant;
  double value = 0.0;
  std::array<double, 3> gravity{0.0, 0.0, 0.0};  // phi = gravity . x
  std::string path;
  bool operator==(const PhiSpec&) const = default;
};

enum class ScalarInitKind { Constant, Gaussian, File };

struct ScalarInitSpec {
  ScalarInitKind kind = ScalarInitKind::Constant;
  double value = 1.0;
  std::array<double, 3> center{0.5, 0.5, 0.5};
  double width = 0.1;
  double amplitude = 1.0;
  double offset = 0.0;
  std::string path;
  bool operator==(const ScalarInitSpec&) const = default;
};

enum class VelocityInitKind { Zero, Constant, File };

struct VelocityInitSpec {
  VelocityInitKind kind = VelocityInitKind::Zero;
  std::array<double, 3> value{0.0, 0.0, 0.0};
  std::string path;
  bool operator==(const VelocityInitSpec&) const = default;
};

struct StepControl {
  double cfl = 0.4;
  double dt_min = 1e-10;
  double dt_max = 0.05;
  double n_cap = 1e8;
  double c_floor = 1e-12;
  double positivity_tol = 1e-13;
  bool operator==(const StepControl&) const = default;
};

struct SchemeOpts {
  FaceMean c_face = FaceMean::Harmonic;
  AdvectionScheme advection = AdvectionScheme::Upwind;
  Preconditioner preconditioner = Preconditioner::Diagonal;
  bool deterministic = true;
  bool operator==(const SchemeOpts&) const = default;
};

struct OutputOpts {
  double record_interval = 0.0;  // <= 0: record every step
  std::string out_dir = "out";
  bool operator==(const OutputOpts&) const = default;
};

struct MmsOpts {
  bool enabled = false;
  bool operator==(const MmsOpts&) const = default;
};

struct ModelConfig {
  GridSpec grid;
  double chi = 0.5;
  int kappa = 0;
  double T_end = 1.0;
  PhiSpec phi;
  ScalarInitSpec n0;
  ScalarInitSpec c0;
  VelocityInitSpec u0;
  AnalysisParams analysis;
  StepControl control;
  double poisson_tol = 1e-10;
  int poisson_max_iter = 20000;
  SchemeOpts scheme;
  OutputOpts output;
  MmsOpts mms;
  std::vector<std::string> warnings;  // regime notes collected at parse time

  bool operator==(const ModelConfig& o) const;
};

/// Parses and fully validates a config. Unknown sections/keys raise
/// ParseError with the line number; violated gates raise ValidationError
/// with the gate name.
ModelConfig parse_config(const std::string& text);
ModelConfig load_config(const std::string& path);

/// Canonical serialization; parse(write_config(cfg)) == cfg.
std::string write_config(const ModelConfig& cfg);

/// Builds phi on the config grid (overridden by the built-in manufactured
/// case when mms is enabled).
ScalarField make_phi(const ModelConfig& cfg);

/// Builds the initial state: sampled initial data (or the manufactured case),
/// u0 closed and projected to the discrete divergence-free space.
SimState make_initial_state(const ModelConfig& cfg);

}  // namespace ksfluid
