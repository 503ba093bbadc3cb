// Modules M_{X,Y,G}, derivations, termination certificates and obstruction checks.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyrw/rewrite.hpp"

namespace polyrw {

// c + sum coef[i] * v_i over a fixed variable list.
struct Affine {
    long long constant = 0;
    std::vector<long long> coef;

    long long eval(const std::vector<long long>& v) const;
    bool is_zero() const;
};

bool operator==(const Affine& a, const Affine& b);

// Value of a derivation: an integer part plus a sparse combination of basis
// generators indexed by naturals (used only by the free abelian group).
struct GroupElem {
    long long z = 0;
    std::map<long long, long long> basis;

    GroupElem& operator+=(const GroupElem& o);
    bool operator==(const GroupElem& o) const { return z == o.z && basis == o.basis; }
};

std::string to_string(const GroupElem& g);

struct GroupExpr {
    Affine scalar;
    std::vector<std::pair<long long, Affine>> basis;  // multiplicity, index form
};

// X (covariant) or Y (contravariant) data: per-1-cell coordinate minimums and
// per-2-cell affine maps. A trivial module has arity 0 everywhere.
struct ModuleData {
    bool trivial = true;
    std::map<std::string, std::vector<long long>> mins;
    std::map<std::string, std::vector<Affine>> maps;

    std::size_t arity(const std::string& cell1) const;
};

enum class Group { Z, FreeAbelian };

struct Interpretation {
    std::string name;
    Group group = Group::Z;
    ModuleData X, Y;
    // For a 3-polygraph, keyed by 2-cell with variables (x..., y...).
    // For a 2-polygraph, keyed by 1-cell with no variables.
    std::map<std::string, GroupExpr> d;
};

// Throws ParseError on syntax, TypeError on arity or sign problems.
Interpretation parse_interpretation(const std::string& text, const Polygraph& p);
Interpretation load_interpretation(const std::string& path, const Polygraph& p);

// Certificate file: interpretation names, resolved to <dir>/<name>.interp.
std::vector<Interpretation> load_certificate(const std::string& path, const Polygraph& p);

std::size_t x_arity(const Interpretation& I, const Word& w);
std::size_t y_arity(const Interpretation& I, const Word& w);
// Per-coordinate minimums of a boundary word.
std::vector<long long> x_mins(const Interpretation& I, const Word& w);
std::vector<long long> y_mins(const Interpretation& I, const Word& w);

// X on the source word, giving X on the target word.
std::vector<long long> eval_X(const Interpretation& I, const Polygraph& p, const Diagram& d,
                              const std::vector<long long>& inputs);
// Y on the target word, giving Y on the source word.
std::vector<long long> eval_Y(const Interpretation& I, const Polygraph& p, const Diagram& d,
                              const std::vector<long long>& inputs);
GroupElem eval_d(const Interpretation& I, const Polygraph& p, const Diagram& d, const std::vector<long long>& x,
                 const std::vector<long long>& y);

enum class RuleLevel { strict, equal, fails };
std::string to_string(RuleLevel r);

struct RuleVerdict {
    std::string rule;
    std::vector<RuleLevel> levels;
    std::vector<std::string> notes;  // one per level, empty when nothing to say
    bool decreasing = false;
};

struct CertificateReport {
    bool terminating = false;
    std::vector<RuleVerdict> rules;
};

CertificateReport check_certificate(const Polygraph& p, const std::vector<Interpretation>& levels);

struct ObstructionReport {
    bool obstructed = false;
    std::vector<std::pair<long long, long long>> candidate_values;
    long long target_lhs = 0;
    long long target_rhs = 0;
};

// Value of a trace under integer 3-cell values: signed sum over its steps.
long long trace_value(const Trace& t, const std::map<std::string, long long>& dvals);

struct Sphere {
    std::string name;
    Trace lhs, rhs;
};

ObstructionReport derivation_obstruction(const std::vector<Sphere>& candidates, const Sphere& target,
                                         const std::map<std::string, long long>& dvals);

std::string certificate_json(const CertificateReport& r);

}  // namespace polyrw
