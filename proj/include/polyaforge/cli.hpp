#pragma once

#include <iosfwd>

namespace polyaforge {

/// Entry point of the `polyaforge` binary. Returns 0 on success, 1 when a
/// verification fails and 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polyaforge
