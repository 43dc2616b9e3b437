#include "ksfluid/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ksfluid/fluid.hpp"
#include "ksfluid/io.hpp"
#include "ksfluid/mms.hpp"

namespace ksfluid {

bool ModelConfig::operator==(const ModelConfig& o) const {
  return grid == o.grid && chi == o.chi && kappa == o.kappa && T_end == o.T_end &&
         phi == o.phi && n0 == o.n0 && c0 == o.c0 && u0 == o.u0 && analysis == o.analysis &&
         control == o.control && poisson_tol == o.poisson_tol &&
         poisson_max_iter == o.poisson_max_iter && scheme == o.scheme && output == o.output &&
         mms == o.mms;
}

namespace {

struct Entry {
  std::vector<std::string> tokens;
  int line = 0;
  bool used = false;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
}

int parse_int(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + tok + "'", line);
  }
}

bool parse_bool(const std::string& tok, int line) {
  if (tok == "true" || tok == "1" || tok == "on") return true;
  if (tok == "false" || tok == "0" || tok == "off") return false;
  throw ParseError("expected a boolean, got '" + tok + "'", line);
}

class KeyMap {
 public:
  void insert(const std::string& key, Entry e) {
    if (entries_.count(key)) throw ParseError("duplicate key '" + key + "'", e.line);
    entries_[key] = std::move(e);
  }

  const Entry* find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  void check_all_used() const {
    for (const auto& [key, e] : entries_)
      if (!e.used) throw ParseError("unknown key '" + key + "'", e.line);
  }

 private:
  std::map<std::string, Entry> entries_;
};

ScalarInitSpec parse_scalar_init(const Entry& e) {
  if (e.tokens.empty()) throw ParseError("empty init spec", e.line);
  ScalarInitSpec s;
  const std::string& kind = e.tokens[0];
  if (kind == "constant") {
    if (e.tokens.size() != 2) throw ParseError("constant takes one value", e.line);
    s.kind = ScalarInitKind::Constant;
    s.value = parse_double(e.tokens[1], e.line);
  } else if (kind == "gaussian") {
    // gaussian cx cy [cz] width amplitude offset
    if (e.tokens.size() != 6 && e.tokens.size() != 7)
      throw ParseError("gaussian takes center (dim values), width, amplitude, offset", e.line);
    s.kind = ScalarInitKind::Gaussian;
    const std::size_t dim = e.tokens.size() - 4;
    for (std::size_t a = 0; a < dim; ++a)
      s.center[a] = parse_double(e.tokens[1 + a], e.line);
    s.width = parse_double(e.tokens[1 + dim], e.line);
    s.amplitude = parse_double(e.tokens[2 + dim], e.line);
    s.offset = parse_double(e.tokens[3 + dim], e.line);
    if (!(s.width > 0.0)) throw ParseError("gaussian width must be positive", e.line);
  } else if (kind == "file") {
    if (e.tokens.size() != 2) throw ParseError("file takes a path", e.line);
    s.kind = ScalarInitKind::File;
    s.path = e.tokens[1];
  } else {
    throw ParseError("unknown init kind '" + kind + "'", e.line);
  }
  return s;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ModelConfig parse_config(const std::string& text) {
  KeyMap map;
  {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string s = raw;
      const std::size_t hash = s.find('#');
      if (hash != std::string::npos) s = s.substr(0, hash);
      s = trim(s);
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ParseError("malformed section header", line);
        section = trim(s.substr(1, s.size() - 2));
        static const char* known[] = {"grid",    "model",  "init",   "analysis",
                                      "control", "scheme", "output", "mms"};
        bool ok = false;
        for (const char* k : known) ok = ok || section == k;
        if (!ok) throw ParseError("unknown section '" + section + "'", line);
        continue;
      }
      const std::size_t eq = s.find('=');
      if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
      if (section.empty()) throw ParseError("key outside any section", line);
      const std::string key = trim(s.substr(0, eq));
      const std::string val = trim(s.substr(eq + 1));
      if (key.empty()) throw ParseError("empty key", line);
      Entry e;
      e.line = line;
      std::istringstream toks(val);
      std::string t;
      while (toks >> t) e.tokens.push_back(t);
      if (e.tokens.empty()) throw ParseError("empty value for '" + key + "'", line);
      map.insert(section + "." + key, std::move(e));
    }
  }

  ModelConfig cfg;

  // [grid]
  int dim = 2;
  if (const Entry* e = map.find("grid.dim")) dim = parse_int(e->tokens[0], e->line);
  std::array<int, 3> cells{0, 0, 0};
  {
    const Entry* e = map.find("grid.cells");
    if (!e) throw ValidationError("grid", "grid.cells is required");
    if (static_cast<int>(e->tokens.size()) != dim)
      throw ParseError("grid.cells needs dim values", e->line);
    for (int a = 0; a < dim; ++a) cells[a] = parse_int(e->tokens[a], e->line);
  }
  std::array<double, 3> extent{1.0, 1.0, 1.0};
  if (const Entry* e = map.find("grid.extent")) {
    if (static_cast<int>(e->tokens.size()) != dim)
      throw ParseError("grid.extent needs dim values", e->line);
    for (int a = 0; a < dim; ++a) extent[a] = parse_double(e->tokens[a], e->line);
  }
  try {
    cfg.grid = GridSpec::make(dim, extent, cells);
  } catch (const ConfigError& err) {
    throw ValidationError("grid", err.what());
  }

  // [model]
  if (const Entry* e = map.find("model.chi")) cfg.chi = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("model.kappa")) cfg.kappa = parse_int(e->tokens[0], e->line);
  if (const Entry* e = map.find("model.T_end")) cfg.T_end = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("model.phi")) {
    const std::string& kind = e->tokens[0];
    if (kind == "constant") {
      if (e->tokens.size() != 2) throw ParseError("phi constant takes one value", e->line);
      cfg.phi.kind = PhiKind::Constant;
      cfg.phi.value = parse_double(e->tokens[1], e->line);
    } else if (kind == "linear") {
      if (static_cast<int>(e->tokens.size()) != dim + 1)
        throw ParseError("phi linear takes dim gravity components", e->line);
      cfg.phi.kind = PhiKind::Linear;
      for (int a = 0; a < dim; ++a)
        cfg.phi.gravity[a] = parse_double(e->tokens[1 + a], e->line);
    } else if (kind == "file") {
      if (e->tokens.size() != 2) throw ParseError("phi file takes a path", e->line);
      cfg.phi.kind = PhiKind::File;
      cfg.phi.path = e->tokens[1];
    } else {
      throw ParseError("unknown phi kind '" + kind + "'", e->line);
    }
  }

  // [init]
  cfg.n0 = ScalarInitSpec{};
  cfg.c0 = ScalarInitSpec{};
  if (const Entry* e = map.find("init.n0")) cfg.n0 = parse_scalar_init(*e);
  if (const Entry* e = map.find("init.c0")) cfg.c0 = parse_scalar_init(*e);
  if (const Entry* e = map.find("init.u0")) {
    const std::string& kind = e->tokens[0];
    if (kind == "zero") {
      cfg.u0.kind = VelocityInitKind::Zero;
    } else if (kind == "constant") {
      if (static_cast<int>(e->tokens.size()) != dim + 1)
        throw ParseError("u0 constant takes dim components", e->line);
      cfg.u0.kind = VelocityInitKind::Constant;
      for (int a = 0; a < dim; ++a) cfg.u0.value[a] = parse_double(e->tokens[1 + a], e->line);
    } else if (kind == "file") {
      if (e->tokens.size() != 2) throw ParseError("u0 file takes a path", e->line);
      cfg.u0.kind = VelocityInitKind::File;
      cfg.u0.path = e->tokens[1];
    } else {
      throw ParseError("unknown u0 kind '" + kind + "'", e->line);
    }
  }

  // [analysis]
  cfg.analysis.N = dim;
  cfg.analysis.chi = cfg.chi;
  std::optional<double> r_opt, p0_opt, r0_opt;
  if (const Entry* e = map.find("analysis.p")) cfg.analysis.p = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("analysis.r")) r_opt = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("analysis.q")) cfg.analysis.q = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("analysis.p0")) p0_opt = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("analysis.r0")) r0_opt = parse_double(e->tokens[0], e->line);
  cfg.analysis.r = r_opt ? *r_opt : 0.5 * (cfg.analysis.p - 1.0);
  if (p0_opt) {
    cfg.analysis.p0 = *p0_opt;
  } else {
    const double cap = cfg.chi > 0.0 ? 1.0 / (cfg.chi * cfg.chi) : cfg.analysis.p + 2.0;
    cfg.analysis.p0 =
        cap > cfg.analysis.p ? 0.5 * (cfg.analysis.p + cap) : cfg.analysis.p + 1.0;
  }
  cfg.analysis.r0 = r0_opt ? *r0_opt : 0.5 * (cfg.analysis.p0 - 1.0);

  // [control]
  if (const Entry* e = map.find("control.cfl")) cfg.control.cfl = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("control.dt_min"))
    cfg.control.dt_min = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("control.dt_max"))
    cfg.control.dt_max = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("control.n_cap"))
    cfg.control.n_cap = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("control.c_floor"))
    cfg.control.c_floor = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("control.positivity_tol"))
    cfg.control.positivity_tol = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("control.poisson_tol"))
    cfg.poisson_tol = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("control.poisson_max_iter"))
    cfg.poisson_max_iter = parse_int(e->tokens[0], e->line);

  // [scheme]
  if (const Entry* e = map.find("scheme.c_face")) {
    const std::string& v = e->tokens[0];
    if (v == "harmonic")
      cfg.scheme.c_face = FaceMean::Harmonic;
    else if (v == "arithmetic")
      cfg.scheme.c_face = FaceMean::Arithmetic;
    else
      throw ParseError("c_face must be harmonic or arithmetic", e->line);
  }
  if (const Entry* e = map.find("scheme.advection")) {
    const std::string& v = e->tokens[0];
    if (v == "upwind")
      cfg.scheme.advection = AdvectionScheme::Upwind;
    else if (v == "central")
      cfg.scheme.advection = AdvectionScheme::Central;
    else
      throw ParseError("advection must be upwind or central", e->line);
  }
  if (const Entry* e = map.find("scheme.preconditioner")) {
    const std::string& v = e->tokens[0];
    if (v == "diagonal")
      cfg.scheme.preconditioner = Preconditioner::Diagonal;
    else if (v == "multigrid")
      cfg.scheme.preconditioner = Preconditioner::Multigrid;
    else
      throw ParseError("preconditioner must be diagonal or multigrid", e->line);
  }
  if (const Entry* e = map.find("scheme.deterministic"))
    cfg.scheme.deterministic = parse_bool(e->tokens[0], e->line);

  // [output]
  if (const Entry* e = map.find("output.record_interval"))
    cfg.output.record_interval = parse_double(e->tokens[0], e->line);
  if (const Entry* e = map.find("output.out_dir")) cfg.output.out_dir = e->tokens[0];

  // [mms]
  if (const Entry* e = map.find("mms.enabled")) cfg.mms.enabled = parse_bool(e->tokens[0], e->line);

  map.check_all_used();

  // Validation gates.
  if (cfg.kappa != 0 && cfg.kappa != 1)
    throw ValidationError("kappa", "kappa must be 0 or 1");
  if (cfg.kappa == 1 && cfg.grid.dim == 3)
    throw ValidationError("kappa_dim",
                          "kappa=1 requires dim=2; only the Stokes fluid (kappa=0) is "
                          "supported in 3D");
  if (!(cfg.chi > 0.0)) throw ValidationError("chi_positive", "chi must be positive");
  if (!(cfg.T_end >= 0.0)) throw ValidationError("T_end", "T_end must be nonnegative");
  if (cfg.c0.kind == ScalarInitKind::Constant && !(cfg.c0.value > 0.0))
    throw ValidationError("c0_positive", "inf c0 > 0 required");
  if (cfg.c0.kind == ScalarInitKind::Gaussian &&
      !(cfg.c0.offset + std::min(cfg.c0.amplitude, 0.0) > 0.0))
    throw ValidationError("c0_positive", "inf c0 > 0 required");
  if (cfg.n0.kind == ScalarInitKind::Constant && cfg.n0.value < 0.0)
    throw ValidationError("n0_nonneg", "n0 >= 0 required");
  if (cfg.n0.kind == ScalarInitKind::Gaussian &&
      cfg.n0.offset + std::min(cfg.n0.amplitude, 0.0) < 0.0)
    throw ValidationError("n0_nonneg", "n0 >= 0 required");
  if (!(cfg.control.cfl > 0.0 && cfg.control.cfl <= 1.0))
    throw ValidationError("control", "cfl must be in (0, 1]");
  if (!(cfg.control.dt_min > 0.0 && cfg.control.dt_min <= cfg.control.dt_max))
    throw ValidationError("control", "need 0 < dt_min <= dt_max");
  if (!(cfg.control.n_cap > 0.0)) throw ValidationError("control", "n_cap must be positive");
  if (!(cfg.control.c_floor > 0.0))
    throw ValidationError("control", "c_floor must be positive");
  if (!(cfg.control.positivity_tol >= 0.0))
    throw ValidationError("control", "positivity_tol must be nonnegative");
  if (!(cfg.poisson_tol > 0.0)) throw ValidationError("control", "poisson_tol must be positive");
  if (cfg.output.record_interval < 0.0)
    throw ValidationError("output", "record_interval must be nonnegative");
  if (cfg.mms.enabled && cfg.grid.dim != 2)
    throw ValidationError("mms", "the built-in manufactured case is 2D");

  const double bound = chi_bound(cfg.grid.dim);
  if (cfg.chi >= bound)
    cfg.warnings.push_back("chi = " + fmt(cfg.chi) + " is outside the regime chi < " +
                           fmt(bound) + "; run is exploratory");
  return cfg;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string write_config(const ModelConfig& cfg) {
  std::ostringstream o;
  const int dim = cfg.grid.dim;
  o << "[grid]\n";
  o << "dim = " << dim << "\n";
  o << "cells =";
  for (int a = 0; a < dim; ++a) o << " " << cfg.grid.cells[a];
  o << "\nextent =";
  for (int a = 0; a < dim; ++a) o << " " << fmt(cfg.grid.extent[a]);
  o << "\n\n[model]\n";
  o << "chi = " << fmt(cfg.chi) << "\n";
  o << "kappa = " << cfg.kappa << "\n";
  o << "T_end = " << fmt(cfg.T_end) << "\n";
  o << "phi = ";
  switch (cfg.phi.kind) {
    case PhiKind::Constant:
      o << "constant " << fmt(cfg.phi.value);
      break;
    case PhiKind::Linear:
      o << "linear";
      for (int a = 0; a < dim; ++a) o << " " << fmt(cfg.phi.gravity[a]);
      break;
    case PhiKind::File:
      o << "file " << cfg.phi.path;
      break;
  }
  o << "\n\n[init]\n";
  auto put_scalar = [&](const char* key, const ScalarInitSpec& s) {
    o << key << " = ";
    switch (s.kind) {
      case ScalarInitKind::Constant:
        o << "constant " << fmt(s.value);
        break;
      case ScalarInitKind::Gaussian:
        o << "gaussian";
        for (int a = 0; a < dim; ++a) o << " " << fmt(s.center[a]);
        o << " " << fmt(s.width) << " " << fmt(s.amplitude) << " " << fmt(s.offset);
        break;
      case ScalarInitKind::File:
        o << "file " << s.path;
        break;
    }
    o << "\n";
  };
  put_scalar("n0", cfg.n0);
  put_scalar("c0", cfg.c0);
  o << "u0 = ";
  switch (cfg.u0.kind) {
    case VelocityInitKind::Zero:
      o << "zero";
      break;
    case VelocityInitKind::Constant:
      o << "constant";
      for (int a = 0; a < dim; ++a) o << " " << fmt(cfg.u0.value[a]);
      break;
    case VelocityInitKind::File:
      o << "file " << cfg.u0.path;
      break;
  }
  o << "\n\n[analysis]\n";
  o << "p = " << fmt(cfg.analysis.p) << "\n";
  o << "r = " << fmt(cfg.analysis.r) << "\n";
  o << "q = " << fmt(cfg.analysis.q) << "\n";
  o << "p0 = " << fmt(cfg.analysis.p0) << "\n";
  o << "r0 = " << fmt(cfg.analysis.r0) << "\n";
  o << "\n[control]\n";
  o << "cfl = " << fmt(cfg.control.cfl) << "\n";
  o << "dt_min = " << fmt(cfg.control.dt_min) << "\n";
  o << "dt_max = " << fmt(cfg.control.dt_max) << "\n";
  o << "n_cap = " << fmt(cfg.control.n_cap) << "\n";
  o << "c_floor = " << fmt(cfg.control.c_floor) << "\n";
  o << "positivity_tol = " << fmt(cfg.control.positivity_tol) << "\n";
  o << "poisson_tol = " << fmt(cfg.poisson_tol) << "\n";
  o << "poisson_max_iter = " << cfg.poisson_max_iter << "\n";
  o << "\n[scheme]\n";
  o << "c_face = " << (cfg.scheme.c_face == FaceMean::Harmonic ? "harmonic" : "arithmetic")
    << "\n";
  o << "advection = "
    << (cfg.scheme.advection == AdvectionScheme::Upwind ? "upwind" : "central") << "\n";
  o << "preconditioner = "
    << (cfg.scheme.preconditioner == Preconditioner::Diagonal ? "diagonal" : "multigrid")
    << "\n";
  o << "deterministic = " << (cfg.scheme.deterministic ? "true" : "false") << "\n";
  o << "\n[output]\n";
  o << "record_interval = " << fmt(cfg.output.record_interval) << "\n";
  o << "out_dir = " << cfg.output.out_dir << "\n";
  o << "\n[mms]\n";
  o << "enabled = " << (cfg.mms.enabled ? "true" : "false") << "\n";
  return o.str();
}

namespace {

ScalarField build_scalar(const GridSpec& g, const ScalarInitSpec& s) {
  ScalarField f(g);
  switch (s.kind) {
    case ScalarInitKind::Constant:
      f.fill(s.value);
      break;
    case ScalarInitKind::Gaussian:
      for (int i = 0; i < g.cells[0]; ++i)
        for (int j = 0; j < g.cells[1]; ++j)
          for (int k = 0; k < g.cells[2]; ++k) {
            double r2 = 0.0;
            const double x[3] = {g.cell_center(0, i), g.cell_center(1, j),
                                 g.cell_center(2, k)};
            for (int a = 0; a < g.dim; ++a) {
              const double d = x[a] - s.center[a];
              r2 += d * d;
            }
            f(i, j, k) = s.offset + s.amplitude * std::exp(-r2 / (2.0 * s.width * s.width));
          }
      break;
    case ScalarInitKind::File:
      f = read_field_file(s.path, g);
      break;
  }
  f.close();
  return f;
}

}  // namespace

ScalarField make_phi(const ModelConfig& cfg) {
  const GridSpec& g = cfg.grid;
  ScalarField phi(g);
  if (cfg.mms.enabled) {
    const MmsCase mms;
    const auto gp = mms.grad_phi();
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        phi(i, j, 0) = gp[0] * g.cell_center(0, i) + gp[1] * g.cell_center(1, j);
    phi.close();
    return phi;
  }
  switch (cfg.phi.kind) {
    case PhiKind::Constant:
      phi.fill(cfg.phi.value);
      break;
    case PhiKind::Linear:
      for (int i = 0; i < g.cells[0]; ++i)
        for (int j = 0; j < g.cells[1]; ++j)
          for (int k = 0; k < g.cells[2]; ++k) {
            const double x[3] = {g.cell_center(0, i), g.cell_center(1, j),
                                 g.cell_center(2, k)};
            double v = 0.0;
            for (int a = 0; a < g.dim; ++a) v += cfg.phi.gravity[a] * x[a];
            phi(i, j, k) = v;
          }
      break;
    case PhiKind::File:
      phi = read_field_file(cfg.phi.path, g);
      break;
  }
  phi.close();
  return phi;
}

SimState make_initial_state(const ModelConfig& cfg) {
  const GridSpec& g = cfg.grid;
  SimState st;
  st.t = 0.0;
  st.step_index = 0;
  st.fluid.poisson_tol = cfg.poisson_tol;
  st.fluid.poisson_max_iter = cfg.poisson_max_iter;
  st.fluid.P = ScalarField(g);

  if (cfg.mms.enabled) {
    const MmsCase mms;
    st.n = ScalarField(g);
    st.c = ScalarField(g);
    st.fluid.u = MacVectorField(g);
    mms.sample_n(g, 0.0, st.n);
    mms.sample_c(g, 0.0, st.c);
    mms.sample_u(g, 0.0, st.fluid.u);
  } else {
    st.n = build_scalar(g, cfg.n0);
    st.c = build_scalar(g, cfg.c0);
    st.fluid.u = MacVectorField(g);
    switch (cfg.u0.kind) {
      case VelocityInitKind::Zero:
        break;
      case VelocityInitKind::Constant:
        for (int a = 0; a < g.dim; ++a) {
          int ext[3];
          for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
          for (int i = 0; i < ext[0]; ++i)
            for (int j = 0; j < ext[1]; ++j)
              for (int k = 0; k < ext[2]; ++k)
                st.fluid.u.face(a, i, j, k) = cfg.u0.value[a];
        }
        break;
      case VelocityInitKind::File: {
        Snapshot snap = read_snapshot(cfg.u0.path);
        if (!(snap.grid == g)) throw ValidationError("u0", "u0 snapshot grid mismatch");
        st.fluid.u = snap.u;
        break;
      }
    }
  }

  if (min_value(st.n) < 0.0) throw ValidationError("n0_nonneg", "n0 >= 0 required");
  if (!(min_value(st.c) > 0.0)) throw ValidationError("c0_positive", "inf c0 > 0 required");

  st.fluid.u.close();
  // Load-time projection to the discrete divergence-free space.
  ScalarField div0 = divergence(st.fluid.u);
  const double d0 = std::max(std::abs(min_value(div0)), std::abs(max_value(div0)));
  if (d0 > cfg.poisson_tol) {
    ScalarField q(g);
    project(st.fluid.u, q, 1.0, cfg.poisson_tol, cfg.poisson_max_iter,
            cfg.scheme.preconditioner);
  }
  return st;
}

}  // namespace ksfluid
