#pragma once

/// Text field dumps. Format:
///   dims N1 [N2 [N3]]
///   periods L1 [...]
///   one value per line, row-major, 17 significant digits.

#include <string>

#include "manifold.hpp"

namespace kw {

void write_field(const ScalarField& field, const std::string& path);
ScalarField read_field(const std::string& path);

}  // namespace kw
