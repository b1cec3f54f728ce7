#pragma once

// Command-line front end, exposed as a library function so tests can drive
// it in-process.  Deterministic data goes to `out`; the run report goes to
// `err`.  Exit codes: 0 ok, 2 parse error, 3 numerical failure,
// 4 truncation insufficient.

#include <iosfwd>
#include <string>
#include <vector>

namespace lindkit::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lindkit::cli
