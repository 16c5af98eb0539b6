#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "chase/engine.hpp"

namespace chase::cli {

enum ExitCode { ok = 0, domain_error = 1, usage_error = 2 };

// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Script file: one trigger per line, `rule_id var=term ...`; `%` starts a comment.
std::vector<TriggerDescriptor> parse_script(std::string_view text);
std::string print_script(const std::vector<TriggerDescriptor>& script);

}  // namespace chase::cli
