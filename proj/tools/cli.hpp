#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace posttitle::cli {

// Exit codes: 0 success, 1 per-record failures, 2 usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace posttitle::cli
