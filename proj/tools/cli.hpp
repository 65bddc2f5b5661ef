#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rotorcut::cli {

/// Entry point of the rotorcut tool; args excludes the program name. Returns
/// the process exit code, nonzero on any error (reported on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace rotorcut::cli
