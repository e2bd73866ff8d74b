#pragma once

// Command surface of the hexspine tool. Reports go to `out` as JSON (or CSV
// for sweeps); failures go to `err` as a one-line JSON object.
//
// Exit codes: 0 success, 2 usage or precondition failure, 3 a numeric
// invariant failed.

#include <ostream>

namespace hexspine {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hexspine
