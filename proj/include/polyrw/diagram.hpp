// The free 2-category over a polygraph's 2-cells.
#pragma once

#include <string>
#include <vector>

#include "polyrw/core.hpp"

namespace polyrw {

struct WhiskerContext {
    Diagram top;
    Word left;
    Word right;
    Diagram bottom;
};

bool operator==(const WhiskerContext& a, const WhiskerContext& b);

Diagram identity(const Word& w);
// One-slice diagram of a generator with empty whiskers.
Diagram generator(const Polygraph& p, const std::string& name);

bool well_formed(const Polygraph& p, const Diagram& d);
Word source(const Polygraph& p, const Diagram& d);
Word target(const Polygraph& p, const Diagram& d);

Diagram compose_h(const Polygraph& p, const Diagram& d1, const Diagram& d2);
Diagram compose_v(const Polygraph& p, const Diagram& d1, const Diagram& d2);
// left ⋆0 d ⋆0 right.
Diagram whisker(const Polygraph& p, const Word& left, const Diagram& d, const Word& right);

Diagram canonicalize(const Polygraph& p, const Diagram& d);
bool equal_up_to_exchange(const Polygraph& p, const Diagram& d1, const Diagram& d2);

std::size_t count_occurrences(const Diagram& d, const std::string& gen);

// All contexts c with c[pattern] exchange-equal to d, sorted topmost-leftmost.
// Throws Error when the pattern has no slices.
std::vector<WhiskerContext> enumerate_matches(const Polygraph& p, const Diagram& d, const Diagram& pattern);

// c.top ; (c.left * d * c.right) ; c.bottom, canonicalized.
Diagram plug(const Polygraph& p, const WhiskerContext& c, const Diagram& d);

// One slice per line as "left | gen | right"; identities print as "id(word)".
std::string dump(const Diagram& d);

}  // namespace polyrw
