#pragma once

#include "abreu/field.hpp"

#include <filesystem>

namespace abreu {

// Rows "x,y,value": interior nodes first, then boundary hits (if present).
void write_field_csv(const std::filesystem::path& path, const ScalarField& field);

// Reads a dump produced by write_field_csv onto `grid`; rows are matched to
// nodes and hits by coordinates. Throws ErrorKind::Io / IncompleteData.
ScalarField read_field_csv(const std::filesystem::path& path, GridPtr grid);

}  // namespace abreu
