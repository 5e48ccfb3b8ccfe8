#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sf {

// Entry point behind the singforge binary, split out so tests can drive it
// with string streams. args excludes the program name. Exit codes: 0 when
// the command succeeds and any verdict holds, 1 when a verification fails,
// 2 on usage errors (synopsis goes to err), 3 on domain errors.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sf
