// Whisker-context matching on frames.
#pragma once

#include <vector>

#include "frame.hpp"

namespace polyrw::detail {

struct FContext {
    Frame top;  // canonical; src is the outer source
    Ids left;   // starts at top.pt
    Ids right;
    Frame bottom;  // canonical

    bool operator==(const FContext& o) const {
        return top == o.top && left == o.left && right == o.right && bottom == o.bottom;
    }
};

struct FMatch {
    FContext ctx;
    std::vector<int> redex;  // sorted indices of the matched layers in the canonical diagram
};

// Contexts in which the layers `subset` of canonical `d` form an occurrence of
// canonical pattern `p`. Usually zero or one; degenerate exchanges may add more.
std::vector<FMatch> match_subset(const Sig& s, const Frame& d, const std::vector<int>& subset, const Frame& p);

// Every occurrence of `p` in canonical `d`, deduplicated, ordered by first
// matched layer and then by left whisker width.
std::vector<FMatch> find_matches(const Sig& s, const Frame& d, const Frame& p);

// True when `p` occurs somewhere in `d`; stops at the first hit.
bool has_match(const Sig& s, const Frame& d, const Frame& p);

// Canonical c[x]; `xpos` receives the sorted positions of x's layers.
Frame plug(const Sig& s, const FContext& c, const Frame& x, std::vector<int>* xpos = nullptr);

}  // namespace polyrw::detail
