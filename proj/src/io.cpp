#include "ksfluid/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace ksfluid {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

namespace {

void put17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void write_series(const FunctionalSeries& series, const std::string& path) {
  std::string out =
      "t,dt,mass_n,l1_c,min_c,lower_envelope,F_pr,gronwall_envelope,lq_c,kinetic_u,"
      "dirichlet_u,buoyancy_power,energy_residual,grad_c_lq,dissipation_pr,n2,npc_mix\n";
  for (const auto& r : series.records()) {
    const double cols[17] = {r.t,
                             r.dt,
                             r.mass_n,
                             r.l1_c,
                             r.min_c,
                             r.lower_envelope,
                             r.F_pr,
                             r.gronwall_envelope,
                             r.lq_c,
                             r.kinetic_u,
                             r.dirichlet_u,
                             r.buoyancy_power,
                             r.energy_residual,
                             r.grad_c_lq,
                             r.dissipation_pr,
                             r.n2,
                             r.npc_mix};
    for (int i = 0; i < 17; ++i) {
      if (i) out += ',';
      put17(out, cols[i]);
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path);
}

namespace {

void write_block(std::ofstream& f, const std::string& name, const double* data,
                 std::size_t count) {
  f << "FIELD " << name << "\n";
  f.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
}

std::vector<double> scalar_block(const ScalarField& s) {
  const GridSpec& g = s.grid();
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(g.cell_count()));
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) v.push_back(s(i, j, k));
  return v;
}

std::vector<double> face_block(const MacVectorField& u, int axis) {
  const GridSpec& g = u.grid();
  int ext[3];
  for (int b = 0; b < 3; ++b) ext[b] = (b == axis) ? g.cells[axis] + 1 : g.cells[b];
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(ext[0]) * ext[1] * ext[2]);
  for (int i = 0; i < ext[0]; ++i)
    for (int j = 0; j < ext[1]; ++j)
      for (int k = 0; k < ext[2]; ++k) v.push_back(u.face(axis, i, j, k));
  return v;
}

}  // namespace

void write_snapshot(const SimState& state, const std::string& path) {
  const GridSpec& g = state.n.grid();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "KSFLUID-SNAP v1\n";
  char buf[64];
  f << "dim=" << g.dim << " cells=";
  for (int a = 0; a < g.dim; ++a) {
    if (a) f << " ";
    f << g.cells[a];
  }
  f << " h=";
  for (int a = 0; a < g.dim; ++a) {
    if (a) f << " ";
    std::snprintf(buf, sizeof(buf), "%.17g", g.h[a]);
    f << buf;
  }
  f << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", state.t);
  f << "t=" << buf << "\n";

  auto nb = scalar_block(state.n);
  write_block(f, "n", nb.data(), nb.size());
  auto cb = scalar_block(state.c);
  write_block(f, "c", cb.data(), cb.size());
  auto pb = scalar_block(state.fluid.P);
  write_block(f, "P", pb.data(), pb.size());
  for (int a = 0; a < g.dim; ++a) {
    auto ub = face_block(state.fluid.u, a);
    write_block(f, "u" + std::to_string(a), ub.data(), ub.size());
  }
  if (!f) throw IoError("write failed: " + path);
}

namespace {

std::string read_line(std::ifstream& f, const std::string& path) {
  std::string line;
  if (!std::getline(f, line)) throw IoError("unexpected end of file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void read_block(std::ifstream& f, const std::string& path, const std::string& expect,
                std::vector<double>& data) {
  const std::string head = read_line(f, path);
  if (head != "FIELD " + expect)
    throw IoError("expected block 'FIELD " + expect + "' in " + path + ", got '" + head + "'");
  f.read(reinterpret_cast<char*>(data.data()),
         static_cast<std::streamsize>(data.size() * 8));
  if (f.gcount() != static_cast<std::streamsize>(data.size() * 8))
    throw IoError("truncated block '" + expect + "' in " + path);
}

}  // namespace

Snapshot read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  if (read_line(f, path) != "KSFLUID-SNAP v1") throw IoError("bad magic in " + path);

  const std::string dims = read_line(f, path);
  int dim = 0;
  std::array<int, 3> cells{1, 1, 1};
  std::array<double, 3> h{1.0, 1.0, 1.0};
  {
    std::istringstream in(dims);
    std::string tok;
    in >> tok;
    if (tok.rfind("dim=", 0) != 0) throw IoError("bad dims line in " + path);
    dim = std::stoi(tok.substr(4));
    if (dim != 2 && dim != 3) throw IoError("bad dim in " + path);
    in >> tok;
    if (tok.rfind("cells=", 0) != 0) throw IoError("bad dims line in " + path);
    cells[0] = std::stoi(tok.substr(6));
    for (int a = 1; a < dim; ++a) {
      in >> tok;
      if (tok.rfind("h=", 0) == 0) throw IoError("bad dims line in " + path);
      cells[a] = std::stoi(tok);
    }
    in >> tok;
    if (tok.rfind("h=", 0) != 0) throw IoError("bad dims line in " + path);
    h[0] = std::stod(tok.substr(2));
    for (int a = 1; a < dim; ++a) {
      in >> tok;
      h[a] = std::stod(tok);
    }
    if (!in) throw IoError("bad dims line in " + path);
  }
  std::array<double, 3> extent{1.0, 1.0, 1.0};
  for (int a = 0; a < dim; ++a) extent[a] = h[a] * cells[a];

  Snapshot snap;
  snap.grid = GridSpec::make(dim, extent, cells);
  {
    const std::string tline = read_line(f, path);
    if (tline.rfind("t=", 0) != 0) throw IoError("bad time line in " + path);
    snap.t = std::stod(tline.substr(2));
  }
  const GridSpec& g = snap.grid;
  snap.n = ScalarField(g);
  snap.c = ScalarField(g);
  snap.P = ScalarField(g);
  snap.u = MacVectorField(g);

  std::vector<double> buf(static_cast<std::size_t>(g.cell_count()));
  auto load_scalar = [&](const std::string& name, ScalarField& s) {
    read_block(f, path, name, buf);
    std::size_t m = 0;
    for (int i = 0; i < g.cells[0]; ++i)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int k = 0; k < g.cells[2]; ++k) s(i, j, k) = buf[m++];
    s.close();
  };
  load_scalar("n", snap.n);
  load_scalar("c", snap.c);
  load_scalar("P", snap.P);
  for (int a = 0; a < g.dim; ++a) {
    int ext[3];
    for (int b = 0; b < 3; ++b) ext[b] = (b == a) ? g.cells[a] + 1 : g.cells[b];
    std::vector<double> fb(static_cast<std::size_t>(ext[0]) * ext[1] * ext[2]);
    read_block(f, path, "u" + std::to_string(a), fb);
    std::size_t m = 0;
    for (int i = 0; i < ext[0]; ++i)
      for (int j = 0; j < ext[1]; ++j)
        for (int k = 0; k < ext[2]; ++k) snap.u.face(a, i, j, k) = fb[m++];
  }
  snap.u.close();
  return snap;
}

ScalarField read_field_file(const std::string& path, const GridSpec& grid) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line) || line != "KSFLUID-FIELD v1")
    throw IoError("bad field-file magic in " + path);
  std::string tok;
  f >> tok;
  if (tok != "cells") throw IoError("expected 'cells' in " + path);
  for (int a = 0; a < grid.dim; ++a) {
    int n = 0;
    if (!(f >> n) || n != grid.cells[a])
      throw IoError("field file cells mismatch in " + path);
  }
  ScalarField out(grid);
  for (int i = 0; i < grid.cells[0]; ++i)
    for (int j = 0; j < grid.cells[1]; ++j)
      for (int k = 0; k < grid.cells[2]; ++k) {
        double v;
        if (!(f >> v)) throw IoError("field file too short: " + path);
        out(i, j, k) = v;
      }
  out.close();
  return out;
}

void write_field_file(const ScalarField& s, const std::string& path) {
  const GridSpec& g = s.grid();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "KSFLUID-FIELD v1\ncells";
  for (int a = 0; a < g.dim; ++a) f << " " << g.cells[a];
  f << "\n";
  char buf[40];
  for (int i = 0; i < g.cells[0]; ++i)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int k = 0; k < g.cells[2]; ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", s(i, j, k));
        f << buf;
      }
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace ksfluid
