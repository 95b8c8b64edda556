#pragma once

#include "absgrid/syntax.hpp"

namespace absgrid {

struct ParseOptions {
  // When set, every #bind must reference a declared sort and fact constants
  // at sorted positions must lie in their domains. Encoding files that leave
  // sort declarations to the instance parse with this off and are validated
  // once merged.
  bool require_sorts_resolved = true;
};

Program parse_program(const std::string& text, const ParseOptions& opts = {});
Program parse_file(const std::string& path, const ParseOptions& opts = {});

// Post-merge validation: declared signature sorts exist, fact constants lie
// in their domains. Throws SyntaxError.
void validate_sorts(const Program& p);

}  // namespace absgrid
