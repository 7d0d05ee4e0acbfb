#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "vlp/solver.hpp"

namespace vlp {

/// A parsed `vlp-config v1` file.
///
/// The file is flat `key = value` text after the version line; `#` starts
/// a comment. Keys:
///   alpha b gamma n L N T M       problem and lattice
///   mode = global | local
///   p                             global: space exponent (number or exponent file)
///   q                             global: optional, must equal the critical value;
///                                 local: the constant space exponent
///   p_time qbar                   local: time exponent (number or time-exponent
///                                 file) and data exponent (number or exponent file)
///   u0 force                      number (constant field) or field file
///   force_form = direct | potential
///   tol K_max seed trials         solver controls
/// Relative paths are resolved against the config file's directory. The force
/// file holds one time-independent field replicated on every time node.
struct RunSettings {
  ProblemSpec spec;
  double tol = 1e-8;
  int K_max = 50;
  std::uint64_t seed = 1;
  int trials = 64;
};

RunSettings parse_config(std::istream& in, const std::filesystem::path& base_dir);
RunSettings load_config(const std::filesystem::path& path);

}  // namespace vlp
