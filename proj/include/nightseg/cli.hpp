#pragma once

#include <string>
#include <vector>

namespace nightseg::cli {

// Entry point behind the nightseg executable, callable in-process for tests.
// args excludes the program name. Returns 0 on success, 1 when some items of
// a batch failed but at least one succeeded, 2 on fatal or usage errors.
int run(const std::vector<std::string>& args);

}  // namespace nightseg::cli
