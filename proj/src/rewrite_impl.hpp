// Frame-level rewriting used by the normalizer and the branching analysis.
#pragma once

#include <vector>

#include "match.hpp"
#include "polyrw/rewrite.hpp"

namespace polyrw::detail {

struct FRule {
    std::string name;
    Frame src;  // canonical
    Frame tgt;  // canonical
};

std::vector<FRule> compile_rules(const Polygraph& p);

struct FStep {
    int rule = 0;
    bool inverse = false;
    FContext ctx;

    bool operator==(const FStep& o) const { return rule == o.rule && inverse == o.inverse && ctx == o.ctx; }
};

struct FRedex {
    FStep step;
    std::vector<int> slices;  // matched layers of the canonical source
};

// All forward redexes of canonical d, grouped by rule in declaration order.
std::vector<FRedex> redexes(const Sig& s, const std::vector<FRule>& rules, const Frame& d);
// Leftmost-topmost redex, if any.
std::optional<FRedex> first_redex(const Sig& s, const std::vector<FRule>& rules, const Frame& d);

Frame apply(const Sig& s, const std::vector<FRule>& rules, const FStep& st);
Frame source_of(const Sig& s, const std::vector<FRule>& rules, const FStep& st);

struct FNormal {
    Frame result;
    std::vector<FStep> steps;
    bool normal = true;
};

FNormal normalize_frame(const Sig& s, const std::vector<FRule>& rules, const Frame& d, std::size_t max_steps);

FContext to_fcontext(const Sig& s, const WhiskerContext& c);
WhiskerContext to_context(const Sig& s, const FContext& c, std::size_t hole_width);
RewriteStep to_step(const Sig& s, const std::vector<FRule>& rules, const FStep& st);
FStep to_fstep(const Sig& s, const std::vector<FRule>& rules, const RewriteStep& st);

}  // namespace polyrw::detail
