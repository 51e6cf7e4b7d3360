#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphlike::cli {

/// Runs a subcommand (gen, resist, measure, decomp, converge, invariance).
/// Exit code 0 when every asserted invariant of the invoked operation holds,
/// 2 with a JSON failure record on `err` otherwise, 1 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphlike::cli
