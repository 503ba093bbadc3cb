// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polyrw/branchings.hpp"
#include "polyrw/diagram.hpp"
#include "polyrw/interpret.hpp"
#include "polyrw/polygraph.hpp"
#include "polyrw/rewrite.hpp"
#include "polyrw/words.hpp"
#include "support.hpp"

using namespace polyrw;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream why;

    void expect(bool cond, const std::string& what) {
        if (cond) return;
        if (!ok) why << "; ";
        ok = false;
        why << what;
    }
};

bool accepted(const Polygraph& p, const std::string& cert) {
    return check_certificate(p, load_certificate(testing::fixture_path(cert), p)).terminating;
}

std::vector<std::string> concrete_names(const FdtReport& r) {
    std::vector<std::string> out;
    for (const auto& e : r.concrete) out.push_back(e.name);
    std::sort(out.begin(), out.end());
    return out;
}

const BranchingEntry* find_entry(const FdtReport& r, const std::string& name) {
    for (const auto& e : r.concrete)
        if (e.name == name) return &e;
    for (const auto& t : r.indexed)
        for (const auto& e : t.instances)
            if (e.name == name) return &e;
    return nullptr;
}

Sphere oriented(const Sphere& g, const std::string& first_rule) {
    if (!g.lhs.steps.empty() && g.lhs.steps.front().rule == first_rule) return g;
    return Sphere{g.name, g.rhs, g.lhs};
}

void word_case(Outcome& o) {
    Polygraph p = testing::fixture("aa.poly");
    auto rep = word_confluence_report(p, accepted(p, "aa.cert"));
    o.expect(rep.pairs.size() == 1, "critical pairs " + std::to_string(rep.pairs.size()));
    o.expect(!rep.pairs.empty() && rep.pairs[0].joinable, "pair not joinable");
    o.expect(rep.basis.size() == 1, "basis size " + std::to_string(rep.basis.size()));
}

void monoid(Outcome& o) {
    Polygraph p = testing::fixture("monoid.poly");
    bool term = accepted(p, "monoid.cert");
    o.expect(term, "certificate rejected");
    FdtReport r = fdt_report(p, term);
    o.expect(concrete_names(r) ==
                 std::vector<std::string>{"alphaalpha", "alpharho", "lambdaalpha", "lambdarho", "rhoalpha"},
             "branching names");
    for (const auto& e : r.concrete) {
        o.expect(e.cls.tag == BranchTag::regular, e.name + " not regular");
        o.expect(e.confluence.verdict == Confluence::confluent, e.name + " not confluent");
    }
    o.expect(r.indexed.empty(), "unexpected templates");
    std::set<std::string> basis;
    for (const auto& g : r.basis) basis.insert(g.name);
    o.expect(basis.size() == 5 && r.basis.size() == 5, "basis size " + std::to_string(r.basis.size()));
}

void monoid_obstructions(Outcome& o) {
    Polygraph p = testing::fixture("monoid.poly");
    FdtReport r = fdt_report(p, accepted(p, "monoid.cert"));
    const auto* aa_e = find_entry(r, "alphaalpha");
    const auto* ar_e = find_entry(r, "rhoalpha");
    o.expect(aa_e && ar_e, "missing branchings");
    if (!aa_e || !ar_e) return;
    Sphere aa = aa_e->confluence.generator;
    if (aa.lhs.steps.size() < aa.rhs.steps.size()) aa = Sphere{aa.name, aa.rhs, aa.lhs};
    Sphere ar = oriented(ar_e->confluence.generator, "alpha");
    auto o1 = derivation_obstruction({aa}, ar, {{"alpha", 0}, {"lambda", 1}, {"rho", 0}});
    o.expect(o1.obstructed && o1.target_lhs == 1 && o1.target_rhs == 0,
             "d1 gives (" + std::to_string(o1.target_lhs) + "," + std::to_string(o1.target_rhs) + ")");
    auto o2 = derivation_obstruction({ar}, aa, {{"alpha", 1}, {"lambda", -1}, {"rho", 0}});
    o.expect(o2.obstructed && o2.target_lhs == 3 && o2.target_rhs == 2,
             "d2 gives (" + std::to_string(o2.target_lhs) + "," + std::to_string(o2.target_rhs) + ")");
}

void permutations(Outcome& o) {
    Polygraph p = testing::fixture("perm.poly");
    bool term = accepted(p, "perm.cert");
    o.expect(term, "certificate rejected");
    FdtReport r = fdt_report(p, term, Bounds{default_max_steps, 3, 4});
    o.expect(concrete_names(r) == std::vector<std::string>{"invinv", "invyb", "ybinv"}, "branching names");
    for (const auto& e : r.concrete) {
        o.expect(e.cls.tag == BranchTag::regular, e.name + " not regular");
        o.expect(e.confluence.verdict == Confluence::confluent, e.name + " not confluent");
    }
    o.expect(r.indexed.size() == 1, "templates " + std::to_string(r.indexed.size()));
    if (r.indexed.size() != 1) return;
    const auto& t = r.indexed[0];
    o.expect(t.tmpl.tag == BranchTag::right_indexed, "template not right-indexed");
    Instances ins = enumerate_normal_instances(t.tmpl, p, 3, 4);
    std::vector<std::string> fills;
    for (const auto& k : ins.fillings) fills.push_back(diagram_expr(k));
    o.expect(fills == std::vector<std::string>{"id(w)", "tau"}, "instances differ");
    o.expect(ins.saturated, "instances not saturated");
    for (const auto& e : t.instances)
        o.expect(e.confluence.verdict == Confluence::confluent, e.name + " not confluent");
    o.expect(r.verdict == "fdt_bound_certified", "verdict " + r.verdict);
    o.expect(r.basis.size() == 5, "basis size " + std::to_string(r.basis.size()));
}

void permutation_normal_forms(Outcome& o) {
    Polygraph perm = testing::fixture("perm.poly");
    o.expect(accepted(perm, "perm.cert"), "certificate rejected");
    const auto& s = perm.sig();
    const std::size_t expect[] = {1, 2, 6};
    for (int n = 1; n <= 3; ++n) {
        detail::Ids src(static_cast<std::size_t>(n), 0);
        std::set<std::string> normals;
        for (const auto& f : testing::all_frames(s, src, 0, 4, static_cast<std::size_t>(n))) {
            auto r = normalize(perm, detail::diagram_of(s, f));
            if (r.status != NormStatus::normal) {
                o.expect(false, "normalization did not finish");
                return;
            }
            normals.insert(dump(r.result));
        }
        o.expect(normals.size() == expect[n - 1],
                 "n=" + std::to_string(n) + " gives " + std::to_string(normals.size()));
    }
}

void counterexample(Outcome& o) {
    Polygraph p = testing::fixture("counterexample.poly");
    bool term = false;
    try {
        term = accepted(p, "counterexample.cert");
    } catch (const Error& e) {
        o.expect(false, std::string("certificate: ") + e.what());
    }
    o.expect(term, "two-level certificate rejected");
    FdtReport r = fdt_report(p, true, Bounds{default_max_steps, 4, 4});
    o.expect(concrete_names(r) == std::vector<std::string>{"alphagamma", "betadelta", "deltagamma", "gammadelta"},
             "branching names");
    for (const auto& e : r.concrete) {
        o.expect(e.cls.tag == BranchTag::regular, e.name + " not regular");
        o.expect(e.confluence.verdict == Confluence::confluent, e.name + " not confluent");
    }
    o.expect(r.indexed.size() == 1, "templates " + std::to_string(r.indexed.size()));
    if (r.indexed.size() != 1) return;
    const auto& t = r.indexed[0].tmpl;
    o.expect(t.tag == BranchTag::right_indexed, "template not right-indexed");
    Instances four = enumerate_normal_instances(t, p, 4, 4);
    Instances six = enumerate_normal_instances(t, p, 6, 4);
    o.expect(six.branchings.size() > four.branchings.size(),
             "no growth: " + std::to_string(four.branchings.size()) + " -> " + std::to_string(six.branchings.size()));
    o.expect(!six.saturated, "saturated at size 6");
}

void counterexample_obstruction(Outcome& o) {
    Polygraph p = testing::fixture("counterexample.poly");
    FdtReport r = fdt_report(p, true, Bounds{default_max_steps, 2, 4});
    std::vector<Sphere> gamma0;
    for (const auto& e : r.concrete) gamma0.push_back(e.confluence.generator);
    const auto* xi0 = find_entry(r, "alphabeta(id(w))");
    o.expect(gamma0.size() == 4 && xi0, "missing generators");
    if (!xi0) return;
    auto ob = derivation_obstruction(gamma0, xi0->confluence.generator,
                                     {{"alpha", 1}, {"beta", -1}, {"gamma", 0}, {"delta", 0}});
    o.expect(ob.obstructed && ob.target_lhs == 1 && ob.target_rhs == -1,
             "values (" + std::to_string(ob.target_lhs) + "," + std::to_string(ob.target_rhs) + ")");
}

// Property suites.

using Vals = std::vector<long long>;

Vals random_inputs(const Vals& mins, std::mt19937& rng) {
    Vals v = mins;
    for (auto& x : v) x += std::uniform_int_distribution<long long>(0, 3)(rng);
    return v;
}

Diagram random_diagram(const Polygraph& p, std::mt19937& rng, int size, std::size_t width) {
    const auto& s = p.sig();
    auto src = testing::random_word(s, 0, 3, rng);
    return detail::diagram_of(s, testing::random_frame(s, src, 0, size, width, rng));
}

void canonical_oracle(Outcome& o, const std::string& file, std::vector<int> widths) {
    Polygraph p = testing::fixture(file);
    const auto& s = p.sig();
    for (int wdt : widths) {
        detail::Ids src(static_cast<std::size_t>(wdt), 0);
        std::map<std::vector<detail::Layer>, std::size_t> class_of, canon_owner;
        std::size_t classes = 0;
        for (const auto& f : testing::all_frames(s, src, 0, 4, 4)) {
            if (class_of.count(f.layers)) continue;
            auto cls = testing::exchange_class(s, f);
            std::size_t id = classes++;
            auto canon = detail::canonical(s, f).layers;
            bool ok = cls.count(canon) > 0 && canon_owner.emplace(canon, id).second;
            for (const auto& m : cls) {
                class_of[m] = id;
                if (detail::canonical(s, testing::Frame{src, 0, m}).layers != canon) ok = false;
            }
            if (!ok) {
                o.expect(false, "canonical form disagrees on " + file);
                return;
            }
        }
    }
}

void replay(Outcome& o) {
    for (const char* file : {"monoid.poly", "perm.poly", "counterexample.poly"}) {
        Polygraph p = testing::fixture(file);
        FdtReport r = fdt_report(p, true, Bounds{default_max_steps, 3, 4});
        for (const auto& g : r.basis) {
            bool same = g.lhs.start == g.rhs.start &&
                        equal_up_to_exchange(p, trace_end(p, g.lhs), trace_end(p, g.rhs));
            o.expect(same, std::string(file) + " " + g.name + " does not replay");
        }
    }
}

struct Levels {
    const char* poly;
    const char* cert;
    std::vector<const char*> interps;
};

const std::vector<Levels> interp_cases = {
    {"monoid.poly", "monoid.cert", {"monoid_size.interp"}},
    {"perm.poly", "perm.cert", {"perm_cross.interp"}},
    {"counterexample.poly", "counterexample.cert", {"ce_count.interp", "ce_weight.interp"}},
};

void derivation_law(Outcome& o) {
    std::mt19937 rng(11);
    int checked = 0;
    for (const auto& c : interp_cases) {
        Polygraph p = testing::fixture(c.poly);
        const auto& s = p.sig();
        for (const char* name : c.interps) {
            Interpretation I = load_interpretation(testing::fixture_path(name), p);
            for (int n = 0; n < 200; ++n) {
                Diagram d1 = random_diagram(p, rng, 3, 5);
                auto f2 = testing::random_frame(s, detail::ids_of(s, target(p, d1)), 0, 3, 5, rng);
                Diagram d2 = detail::diagram_of(s, f2);
                Vals x = random_inputs(x_mins(I, d1.source), rng);
                Vals y = random_inputs(y_mins(I, target(p, d2)), rng);
                GroupElem lhs = eval_d(I, p, compose_v(p, d1, d2), x, y);
                GroupElem rhs = eval_d(I, p, d1, x, eval_Y(I, p, d2, y));
                rhs += eval_d(I, p, d2, eval_X(I, p, d1, x), y);
                if (!(lhs == rhs)) {
                    o.expect(false, std::string("law fails for ") + name);
                    return;
                }
                ++checked;
            }
        }
    }
    o.expect(checked >= 200, "too few pairs");
}

void lexicographic_decrease(Outcome& o) {
    std::mt19937 rng(3);
    for (const auto& c : interp_cases) {
        Polygraph p = testing::fixture(c.poly);
        auto levels = load_certificate(testing::fixture_path(c.cert), p);
        if (!check_certificate(p, levels).terminating) continue;  // only accepted certificates are claimed
        int steps = 0;
        Diagram d = random_diagram(p, rng, 6, 5);
        while (steps < 1000) {
            auto rs = find_redexes(p, d);
            if (rs.empty()) {
                d = random_diagram(p, rng, 6, 5);
                continue;
            }
            const auto& st = rs[std::uniform_int_distribution<std::size_t>(0, rs.size() - 1)(rng)];
            Diagram before = step_source(p, st);
            Diagram after = apply_step(p, st);
            std::vector<long long> vb, va;
            for (const auto& I : levels) {
                Vals x = random_inputs(x_mins(I, before.source), rng);
                Vals y = random_inputs(y_mins(I, target(p, before)), rng);
                vb.push_back(eval_d(I, p, before, x, y).z);
                va.push_back(eval_d(I, p, after, x, y).z);
            }
            if (!(va < vb)) {
                o.expect(false, std::string("no decrease on ") + c.poly);
                break;
            }
            d = after;
            ++steps;
        }
    }
}

void properties(Outcome& o) {
    canonical_oracle(o, "perm.poly", {1, 2, 3});
    canonical_oracle(o, "monoid.poly", {0, 1, 2, 3});
    canonical_oracle(o, "counterexample.poly", {0, 1, 2});
    replay(o);
    derivation_law(o);
    lexicographic_decrease(o);
}

void xi(Outcome& o) {
    Polygraph p = testing::fixture("xi.poly");
    bool term = accepted(p, "xi.cert");
    o.expect(term, "certificate rejected");
    FdtReport r = fdt_report(p, term);
    o.expect(r.concrete.size() == 1, "branchings " + std::to_string(r.concrete.size()));
    if (!r.concrete.empty())
        o.expect(r.concrete[0].confluence.verdict == Confluence::not_confluent, "branching verdict");
    o.expect(r.verdict == "not_confluent", "verdict " + r.verdict);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"word case aa => a", word_case},
        {"monoid branchings and basis", monoid},
        {"monoid obstructions", monoid_obstructions},
        {"permutations", permutations},
        {"permutation normal forms", permutation_normal_forms},
        {"counterexample", counterexample},
        {"counterexample obstruction", counterexample_obstruction},
        {"property suites", properties},
        {"reversed presentation", xi},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first;
        if (!o.ok) {
            std::cout << ": " << o.why.str();
            ++failed;
        }
        std::cout << "\n";
    }
    return failed ? 1 : 0;
}
