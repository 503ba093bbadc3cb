// Command-line front end: one verb per analysis, text or JSON reports.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "polyrw/rewrite.hpp"

namespace polyrw {

struct Command {
    std::string verb;  // validate | normalize | branchings | confluence | basis | termination | fdt | obstruction | words
    std::string poly;
    std::string cert;    // certificate file: interpretation names, one per line
    std::string interp;  // single interpretation file, used as a one-level certificate
    std::string cell;    // diagram (or word, for 2-polygraphs) to normalize
    std::size_t max_steps = default_max_steps;
    std::size_t size_bound = 4;
    std::size_t width_bound = 4;
    std::string output = "text";  // text | json
    std::vector<std::string> candidates;
    std::string target;
    std::string dvals;  // "alpha=1,beta=-1"
};

const std::vector<std::string>& verbs();

// Report on `out`; 0 when the analysis completed (negative verdicts included),
// 1 on input errors, which are reported on `err`.
int run(const Command& c, std::ostream& out, std::ostream& err);

}  // namespace polyrw
