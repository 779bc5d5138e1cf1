#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phc {

// Dispatches one invocation. Exit codes: 0 success, 1 structured failure
// (no witness, sampler exhausted, inequality violated, invalid witness),
// 2 parse or configuration error, 3 budget exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace phc
