// Critical branchings of 3-polygraphs: enumeration, classification, indexed
// instances, confluence, homotopy bases and the finite derivation type report.
#pragma once

#include <string>
#include <vector>

#include "polyrw/interpret.hpp"
#include "polyrw/rewrite.hpp"

namespace polyrw {

struct Branching {
    Diagram source;
    RewriteStep step_a, step_b;
};

enum class BranchTag { trivial, inclusion, regular, right_indexed, left_indexed, multi_indexed };
std::string to_string(BranchTag t);

// The hole k of an indexed branching: k goes from anchor_left (wires left by
// the first pattern) plus free source wires to anchor_right (wires entering
// the second pattern) plus free target wires. Free parts are unconstrained.
struct HoleSpec {
    Word anchor_left;
    Word anchor_right;
    bool free_on_right = true;  // free wires sit right of the anchors (right-indexed)
};

struct BranchingClass {
    BranchTag tag = BranchTag::trivial;
    int subcase = 0;  // regular: 1..4 for the vertical shapes, 0 when both parts sit on one side
    std::vector<HoleSpec> holes;
};

// A right- or left-indexed family: upper ; (shared beside k) ; lower.
struct IndexedTemplate {
    std::string rule_a;  // rule owning `upper`
    std::string rule_b;  // rule owning `lower`
    BranchTag tag = BranchTag::right_indexed;
    Diagram upper;   // rule_a's source minus the shared part
    Diagram shared;  // common part, bottom of rule_a's source and top of rule_b's
    Diagram lower;   // rule_b's source minus the shared part
    HoleSpec hole;
};

struct CriticalBranchings {
    std::vector<Branching> concrete;  // inclusion and regular
    std::vector<IndexedTemplate> indexed;
};

CriticalBranchings enumerate_critical_branchings(const Polygraph& p);

// Throws Error when the branching is trivial or not minimal.
BranchingClass classify(const Branching& b, const Polygraph& p);

// Branching obtained by filling the hole with k; throws TypeError on a boundary mismatch.
Branching instantiate(const Polygraph& p, const IndexedTemplate& t, const Diagram& k);

struct Instances {
    std::vector<Branching> branchings;
    std::vector<Diagram> fillings;
    bool saturated = false;
};

// Normal fillings k with at most size_bound slices and every cut at most
// width_bound wide whose filled branching is minimal.
Instances enumerate_normal_instances(const IndexedTemplate& t, const Polygraph& p, std::size_t size_bound,
                                     std::size_t width_bound);

using HomotopyGenerator = Sphere;

enum class Confluence { confluent, not_confluent, inconclusive };
std::string to_string(Confluence c);

struct ConfluenceResult {
    Confluence verdict = Confluence::inconclusive;
    HomotopyGenerator generator;  // filled when confluent
    Diagram normal_a, normal_b;
    std::string reason;
};

// `terminating`: a termination certificate was accepted. Without it distinct
// normal forms only give an inconclusive verdict.
ConfluenceResult check_branching_confluence(const Branching& b, const Polygraph& p, bool terminating,
                                            std::size_t max_steps = default_max_steps);

struct Bounds {
    std::size_t max_steps = default_max_steps;
    std::size_t size_bound = 4;
    std::size_t width_bound = 4;
};

struct BranchingEntry {
    std::string name;
    Branching branching;
    BranchingClass cls;
    ConfluenceResult confluence;
};

struct TemplateEntry {
    std::string name;
    IndexedTemplate tmpl;
    std::vector<BranchingEntry> instances;
    bool saturated = false;
};

struct FdtReport {
    bool terminating = false;
    std::vector<BranchingEntry> concrete;
    std::vector<TemplateEntry> indexed;
    std::vector<HomotopyGenerator> basis;
    std::string verdict;  // fdt_certified | fdt_bound_certified | not_confluent | inconclusive
    std::size_t size_bound = 0;
    std::vector<std::string> notes;
};

FdtReport fdt_report(const Polygraph& p, bool terminating, const Bounds& bounds = {});

// Named and classified branchings and templates only: no confluence checks,
// no instances, empty verdict.
FdtReport branching_report(const Polygraph& p);

// One generator per concrete branching and per normal instance; throws Error
// naming the first branching that is not confluent.
std::vector<HomotopyGenerator> build_homotopy_basis(const Polygraph& p, bool terminating, const Bounds& bounds = {});

std::string fdt_json(const FdtReport& r);

}  // namespace polyrw
