#pragma once

#include "nsrenorm/field.hpp"

#include <string>

namespace nsrenorm {

/// Field snapshot format, version 1. Plain text:
///
///   nsrenorm-field 1
///   grid_n <N>
///   box_l <L>            (%.17g, round-trips to identical bits)
///   modes <count>
///   <k1> <k2> <k3> <re_u> <im_u> <re_v> <im_v> <re_w> <im_w>
///   ...
///
/// One row per stored half-lattice mode, in storage order. Writing the
/// same field twice produces byte-identical files.
void save_field(const VelocityField& f, const std::string& path);
VelocityField load_field(const std::string& path);

std::string field_to_string(const VelocityField& f);
VelocityField field_from_string(const std::string& text);

} // namespace nsrenorm
