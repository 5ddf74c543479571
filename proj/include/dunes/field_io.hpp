#pragma once

#include <string>

#include "dunes/grid.hpp"

namespace dunes {

/// Writes a field as flat CSV, row-major (one line per y-row), preceded by a
/// metadata header line `# nx,ny,lx,ly`. Deterministic formatting: repeated
/// runs produce byte-identical files.
void write_field_csv(const ScalarField& z, const std::string& path);

/// Reads a field written by write_field_csv. Throws ConfigError on a
/// malformed file.
ScalarField read_field_csv(const std::string& path,
                           BoundaryKind bk = BoundaryKind::Robin);

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

}  // namespace dunes
