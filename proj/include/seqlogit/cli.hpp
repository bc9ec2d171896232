#pragma once

// Command-line front end: select, fit, export, synth and tangents.

#include <iosfwd>
#include <string>
#include <vector>

namespace seqlogit {

/// Exit codes: 0 success or proven optimum, 2 time limit reached with an
/// incumbent, 1 on any error (diagnostic written to `err`).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace seqlogit
