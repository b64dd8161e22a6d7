#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mas {

/// Command-line driver. Exit codes: 0 success, 1 negative verdict
/// (unsatisfied, not bisimilar, incompatible, theorem hard failure),
/// 2 usage or parse error, 3 resource cap exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mas
