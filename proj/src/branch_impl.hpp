// Frame-level pieces of the branching analysis.
#pragma once

#include <optional>
#include <vector>

#include "polyrw/branchings.hpp"
#include "rewrite_impl.hpp"

namespace polyrw::detail {

// Wire identities through a frame. Source wires are 0..|src|-1.
struct Wires {
    std::vector<Ids> cuts;  // wire ids per cut
    std::vector<int> producer, consumer, type;  // per wire; -1 at the boundary
};

Wires trace_wires(const Sig& s, const Frame& f);

// succ[i]: layers consuming a wire produced by layer i.
std::vector<std::vector<int>> successors(const Wires& w, std::size_t layers);

// Same diagram with layers sorted by rank (stable); nullopt when dependent
// layers would have to cross. perm[i] = input index of output layer i.
std::optional<Frame> reorder(const Sig& s, const Frame& f, const std::vector<int>& rank, std::vector<int>* perm);

// Wires untouched by every layer on the left and on the right.
std::pair<std::size_t, std::size_t> side_whiskers(const Sig& s, const Frame& f);
Frame strip(const Sig& s, const Frame& f, std::size_t left, std::size_t right);

// Layers [from, to) of f as a frame starting at cut `from`.
Frame slice_frame(const Sig& s, const Frame& f, std::size_t from, std::size_t to);

// Every arrangement of f reachable by exchanges (not canonicalized).
std::vector<Frame> arrangements(const Sig& s, const Frame& f);

struct Overlap {
    Frame source;  // canonical
    int rule_a = 0, rule_b = 0;
    std::vector<int> slices_a, slices_b;
};

// Overlaps of rule a's source with rule b's source covering the whole
// diagram, sharing a slice and without side wires.
std::vector<Overlap> overlaps(const Sig& s, const std::vector<FRule>& rules, int a, int b);

struct ClassInfo {
    BranchingClass cls;
    bool a_upper = true;  // the first rule in the branching name is rule a
};

// Throws Error on disjoint occurrences.
ClassInfo classify_frame(const Sig& s, const Frame& S, const std::vector<int>& ra, const std::vector<int>& rb);

struct FTemplate {
    int rule_a = 0, rule_b = 0;
    BranchTag tag = BranchTag::right_indexed;
    Frame upper, shared, lower;  // canonical
    Ids u, v;
};

std::vector<FTemplate> templates(const Sig& s, const std::vector<FRule>& rules);

struct Filled {
    Frame source;  // canonical
    std::vector<int> slices_a, slices_b, hole;
};

// Source of the template filled with k; nullopt on a boundary mismatch.
std::optional<Filled> fill(const Sig& s, const FTemplate& t, const Frame& k);

// Every hole layer lies between occurrence layers and no wire runs untouched along a side.
bool minimal(const Sig& s, const Filled& f);

}  // namespace polyrw::detail
