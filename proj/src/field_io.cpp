#include "field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace kw {

void write_field(const ScalarField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot open field file for writing: " + path);
  const Grid& g = *field.grid();
  out << "dims";
  for (int a = 0; a < g.dim(); ++a) out << ' ' << g.points(a);
  out << "\nperiods";
  char buf[64];
  for (int a = 0; a < g.dim(); ++a) {
    std::snprintf(buf, sizeof(buf), "%.17g", g.period(a));
    out << ' ' << buf;
  }
  out << '\n';
  for (double v : field.values()) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << '\n';
  }
  if (!out.good()) fail(ErrorCode::io, "failed writing field file: " + path);
}

ScalarField read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open field file: " + path);

  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::io, "field file is empty: " + path);
  std::istringstream dims(line);
  std::string tag;
  dims >> tag;
  if (tag != "dims") fail(ErrorCode::io, "field file must start with a 'dims' line");
  GridSpec spec;
  int n = 0;
  while (dims >> n) {
    if (spec.dim >= kMaxDim) fail(ErrorCode::io, "too many grid axes in field file");
    spec.points[static_cast<size_t>(spec.dim++)] = n;
  }
  if (spec.dim == 0) fail(ErrorCode::io, "no axis sizes in field file");

  if (!std::getline(in, line)) fail(ErrorCode::io, "missing 'periods' line");
  std::istringstream pers(line);
  pers >> tag;
  if (tag != "periods") fail(ErrorCode::io, "second line must be 'periods'");
  int np = 0;
  double L = 0.0;
  while (pers >> L) {
    if (np >= spec.dim) fail(ErrorCode::io, "period count does not match dims");
    spec.periods[static_cast<size_t>(np++)] = L;
  }
  if (np != spec.dim) fail(ErrorCode::io, "period count does not match dims");

  GridPtr grid = build_grid(spec);
  std::vector<double> values;
  values.reserve(grid->node_count());
  double v = 0.0;
  while (in >> v) values.push_back(v);
  if (values.size() != grid->node_count()) {
    std::ostringstream os;
    os << "field file has " << values.size() << " values but the grid has "
       << grid->node_count() << " nodes";
    fail(ErrorCode::io, os.str());
  }
  return ScalarField::from_values(std::move(grid), std::move(values));
}

}  // namespace kw
