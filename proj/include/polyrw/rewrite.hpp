// Rewriting 2-cells by 3-cells: redexes, steps, normalization and traces.
#pragma once

#include <string>
#include <vector>

#include "polyrw/diagram.hpp"

namespace polyrw {

enum class Direction { forward, inverse };

struct RewriteStep {
    std::string rule;
    Direction dir = Direction::forward;
    WhiskerContext context;
};

// A cell of the free track 3-category: a start diagram and signed steps.
struct Trace {
    Diagram start;
    std::vector<RewriteStep> steps;
};

enum class NormStatus { normal, step_limit };

struct NormalizeResult {
    Diagram result;
    Trace trace;
    NormStatus status = NormStatus::normal;
};

inline constexpr std::size_t default_max_steps = 10000;

// Forward steps with source d: rule declaration order, then topmost-leftmost.
std::vector<RewriteStep> find_redexes(const Polygraph& p, const Diagram& d);
bool is_normal(const Polygraph& p, const Diagram& d);

Diagram step_source(const Polygraph& p, const RewriteStep& s);
Diagram apply_step(const Polygraph& p, const RewriteStep& s);

// Leftmost-topmost strategy.
NormalizeResult normalize(const Polygraph& p, const Diagram& d, std::size_t max_steps = default_max_steps);

// Every intermediate diagram, starting with t.start; throws Error when a step
// does not apply to the diagram before it.
std::vector<Diagram> replay(const Polygraph& p, const Trace& t);
Diagram trace_end(const Polygraph& p, const Trace& t);

Trace trace_inverse(const Polygraph& p, const Trace& t);
Trace trace_compose(const Polygraph& p, const Trace& t1, const Trace& t2);

bool operator==(const RewriteStep& a, const RewriteStep& b);
bool operator==(const Trace& a, const Trace& b);

std::string to_string(Direction d);
std::string to_string(NormStatus s);

// {"start": dump, "steps": [{rule, dir, top, left, right, bottom}]}
std::string trace_json(const Trace& t);

}  // namespace polyrw
