// Command-line front end: generate / verify / reconstruct / check-lemma /
// check-claim / separating-prime. Every run is a deterministic function of
// its inputs and the seed; artifacts are written atomically.
#pragma once

#include <string>
#include <vector>

namespace reciplab {

// Exit status: 0 success; 1 verification or reconstruction failure (the JSON
// report is still written when an output path was given); 2 usage or config
// errors, including malformed input files.
int run_command(const std::vector<std::string>& args);
int run_command(int argc, const char* const* argv);

}  // namespace reciplab
