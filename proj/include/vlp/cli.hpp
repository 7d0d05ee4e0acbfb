#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vlp {

/// Runs one `vlp` sub-command. `args` excludes the program name. Returns 0
/// when every check passes, 1 when a check fails, 2 on usage, I/O or domain
/// errors (after a one-line diagnostic on `err`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vlp
