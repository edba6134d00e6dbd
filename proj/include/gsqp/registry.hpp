#pragma once

#include <vector>

#include "gsqp/problem.hpp"

namespace gsqp {

/// Built-in test instances with hand-coded oracles and analytic constants
/// where they are derivable. Throws on unknown names.
ProblemInstance registry_get(const std::string& name);
std::vector<std::string> registry_names();

}  // namespace gsqp
