#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gravgas/errors.hpp"

namespace gravgas {

// One output time of a 1D field solution. `coord` is r (spherical) or x
// (planar); `cumulative` is m(r,t) or g(x,t).
struct FieldSnapshot {
  double t = 0.0;
  std::vector<double> coord;
  std::vector<double> density;
  std::vector<double> velocity;
  std::vector<double> cumulative;

  std::size_t size() const { return coord.size(); }
};

using SphericalState = FieldSnapshot;

struct SlabState : FieldSnapshot {
  // Current positions of the density-profile knots (moving slab edges).
  std::vector<double> edges;
};

namespace detail {

// 17 significant digits round-trips any double exactly.
inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string snapshot_to_csv(const FieldSnapshot& s) {
  std::string out = "t,coord,density,velocity,cumulative\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += detail::format_full(s.t);
    out += ',';
    out += detail::format_full(s.coord[i]);
    out += ',';
    out += detail::format_full(s.density[i]);
    out += ',';
    out += detail::format_full(s.velocity[i]);
    out += ',';
    out += detail::format_full(s.cumulative[i]);
    out += '\n';
  }
  return out;
}

inline void write_snapshot_csv(const FieldSnapshot& s, const std::filesystem::path& path) {
  if (s.density.size() != s.size() || s.velocity.size() != s.size() ||
      s.cumulative.size() != s.size())
    throw Error("snapshot field lengths differ");
  std::ofstream f(path, std::ios::binary);  // binary keeps byte output identical
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << snapshot_to_csv(s);
  if (!f) throw Error("write failed for " + path.string());
}

inline FieldSnapshot read_snapshot_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != "t,coord,density,velocity,cumulative")
    throw Error("bad snapshot header in " + path.string());
  FieldSnapshot s;
  bool first = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double vals[5];
    char comma;
    for (int k = 0; k < 5; ++k) {
      if (!(ss >> vals[k])) throw Error("bad snapshot row in " + path.string());
      if (k < 4 && !(ss >> comma)) throw Error("bad snapshot row in " + path.string());
    }
    if (first) {
      s.t = vals[0];
      first = false;
    }
    s.coord.push_back(vals[1]);
    s.density.push_back(vals[2]);
    s.velocity.push_back(vals[3]);
    s.cumulative.push_back(vals[4]);
  }
  return s;
}

}  // namespace gravgas
