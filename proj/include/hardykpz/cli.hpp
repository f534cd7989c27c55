#pragma once

#include <string>
#include <vector>

namespace hk::cli {

// Exit codes: 0 success (any solver classification), 1 oracle tolerance failure,
// 2 config or domain error, 3 internal error.
auto run(std::vector<std::string> const &args) -> int;
auto run(int argc, char **argv) -> int;

} // namespace hk::cli
