#pragma once

#include <string>

#include "hesslab/grid.hpp"

namespace hesslab {

// Field dump: header "x[,y[,z]],u", one row per non-exterior node in
// row-major node order.
std::string field_to_csv(const GridField& field);

// Writes to <path>.tmp and renames onto path, so readers never see a
// partial file.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace hesslab
