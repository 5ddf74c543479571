#include "dunes/field_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dunes {

std::string format_double(double v) {
  char buf[40];
  // %.17g always round-trips; trim to the shortest form that still does.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(const ScalarField& z, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  const Grid& g = z.grid();
  out << "# " << g.nx << "," << g.ny << "," << format_double(g.lx) << ","
      << format_double(g.ly) << "\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) out << ",";
      out << format_double(z.at(i, j));
    }
    out << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path);
}

ScalarField read_field_csv(const std::string& path, BoundaryKind bk) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  std::string header;
  if (!std::getline(in, header) || header.rfind("# ", 0) != 0)
    throw ConfigError("field csv: missing '# nx,ny,lx,ly' header in " + path);
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  {
    std::istringstream hs(header.substr(2));
    char c1, c2, c3;
    if (!(hs >> nx >> c1 >> ny >> c2 >> lx >> c3 >> ly) || c1 != ',' ||
        c2 != ',' || c3 != ',')
      throw ConfigError("field csv: malformed header in " + path);
  }
  Grid g(nx, ny, lx, ly, bk);
  ScalarField z(g);
  for (int j = 0; j < ny; ++j) {
    std::string line;
    if (!std::getline(in, line))
      throw ConfigError("field csv: truncated file " + path);
    std::istringstream ls(line);
    std::string tok;
    for (int i = 0; i < nx; ++i) {
      if (!std::getline(ls, tok, ','))
        throw ConfigError("field csv: short row in " + path);
      z.at(i, j) = std::stod(tok);
    }
  }
  return z;
}

}  // namespace dunes
