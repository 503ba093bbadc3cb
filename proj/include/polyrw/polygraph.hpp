// Polygraph files: parsing, validation and serialization.
#pragma once

#include <string>
#include <vector>

#include "polyrw/core.hpp"

namespace polyrw {

struct Violation {
    std::string kind;  // duplicate | unknown | composability | globularity | ill_formed | empty_lhs
    std::string cell;
    std::string message;
};

// Parses and validates; throws ParseError or TypeError.
Polygraph parse_polygraph(const std::string& text);
Polygraph load_polygraph(const std::string& path);
// Syntax errors still throw; typing problems are appended to `report` and the
// offending 3-cells are dropped from the result.
Polygraph parse_polygraph_report(const std::string& text, std::vector<Violation>& report);

std::vector<Violation> validate(const Polygraph& p);

std::string serialize_polygraph(const Polygraph& p);

// Parses a diagram expression against the 2-cells of p; result is canonical.
Diagram parse_diagram(const Polygraph& p, const std::string& text);
// Parses a word ("a b c" or "empty(x)").
Word parse_word(const Polygraph& p, const std::string& text);

// Expression form of a diagram, accepted back by parse_diagram.
std::string diagram_expr(const Diagram& d);

std::string read_file(const std::string& path);

}  // namespace polyrw
