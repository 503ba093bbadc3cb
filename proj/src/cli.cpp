// Verb dispatch and report formatting for the polyrw tool.
#include "polyrw/cli.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "polyrw/branchings.hpp"
#include "polyrw/interpret.hpp"
#include "polyrw/polygraph.hpp"
#include "polyrw/words.hpp"

namespace polyrw {

using nlohmann::json;

const std::vector<std::string>& verbs() {
    static const std::vector<std::string> v{"validate", "normalize",   "branchings",  "confluence", "basis",
                                            "termination", "fdt",      "obstruction", "words"};
    return v;
}

namespace {

struct Ctx {
    const Command& c;
    std::ostream& out;
    bool as_json;
};

void emit(Ctx& x, json j, const std::string& text) {
    if (x.as_json) {
        j["schema"] = 1;
        j["verb"] = x.c.verb;
        x.out << j.dump(2) << "\n";
    } else {
        x.out << text;
    }
}

void need_dim(const Polygraph& p, int dim) {
    if (p.dimension != dim)
        throw Error("this verb needs a " + std::to_string(dim) + "-polygraph; '" + p.name + "' has dimension " +
                    std::to_string(p.dimension));
}

Bounds bounds_of(const Command& c) { return Bounds{c.max_steps, c.size_bound, c.width_bound}; }

// Certificate from --cert or --interp; empty when neither is given.
std::vector<Interpretation> levels_of(const Command& c, const Polygraph& p) {
    if (!c.cert.empty() && !c.interp.empty()) throw Error("give either --cert or --interp, not both");
    if (!c.cert.empty()) return load_certificate(c.cert, p);
    if (!c.interp.empty()) return {load_interpretation(c.interp, p)};
    return {};
}

bool certified(const Command& c, const Polygraph& p, std::string* verdict) {
    auto levels = levels_of(c, p);
    if (levels.empty()) {
        if (verdict) *verdict = "none";
        return false;
    }
    bool ok = check_certificate(p, levels).terminating;
    if (verdict) *verdict = ok ? "terminating" : "rejected";
    return ok;
}

std::string rules_of(const Trace& t) {
    std::string s;
    for (const auto& st : t.steps) {
        if (!s.empty()) s += " ";
        s += st.rule;
        if (st.dir == Direction::inverse) s += "^-1";
    }
    return s.empty() ? "-" : s;
}

std::string word_steps(const std::vector<WordStep>& v) {
    std::string s;
    for (const auto& st : v) s += (s.empty() ? "" : " ") + st.rule + "@" + std::to_string(st.pos);
    return s.empty() ? "-" : s;
}

std::string class_text(const BranchingClass& c) {
    std::string s = to_string(c.tag);
    if (c.tag == BranchTag::regular) s += " subcase " + std::to_string(c.subcase);
    return s;
}

int validate_verb(Ctx& x) {
    std::vector<Violation> report;
    Polygraph p = parse_polygraph_report(read_file(x.c.poly), report);
    for (const auto& v : validate(p)) report.push_back(v);
    json j{{"valid", report.empty()}, {"violations", json::array()}};
    std::ostringstream t;
    for (const auto& v : report) {
        j["violations"].push_back({{"kind", v.kind}, {"cell", v.cell}, {"message", v.message}});
        t << v.kind << " " << v.cell << ": " << v.message << "\n";
    }
    if (report.empty()) t << "valid\n";
    emit(x, j, t.str());
    return 0;
}

int normalize_verb(Ctx& x, const Polygraph& p) {
    if (x.c.cell.empty()) throw Error("normalize needs --cell");
    std::ostringstream t;
    if (p.dimension == 2) {
        auto r = normalize_word(p, parse_word(p, x.c.cell), x.c.max_steps);
        json steps = json::array();
        for (const auto& s : r.steps) steps.push_back({{"rule", s.rule}, {"pos", s.pos}});
        t << "result: " << to_string(r.result) << "\nsteps: " << r.steps.size() << " (" << word_steps(r.steps)
          << ")\nstatus: " << to_string(r.status) << "\n";
        emit(x, {{"result", to_string(r.result)}, {"steps", steps}, {"status", to_string(r.status)}}, t.str());
        return 0;
    }
    auto r = normalize(p, parse_diagram(p, x.c.cell), x.c.max_steps);
    t << "result: " << diagram_expr(r.result) << "\nsteps: " << r.trace.steps.size() << " (" << rules_of(r.trace)
      << ")\nstatus: " << to_string(r.status) << "\n";
    emit(x,
         {{"result", diagram_expr(r.result)},
          {"trace", json::parse(trace_json(r.trace))},
          {"step_count", r.trace.steps.size()},
          {"status", to_string(r.status)}},
         t.str());
    return 0;
}

json hole_json(const HoleSpec& h) {
    return {{"anchor_left", to_string(h.anchor_left)},
            {"anchor_right", to_string(h.anchor_right)},
            {"free_side", h.free_on_right ? "right" : "left"}};
}

int branchings_verb(Ctx& x, const Polygraph& p) {
    need_dim(p, 3);
    FdtReport r = branching_report(p);
    json j{{"concrete", json::array()}, {"indexed", json::array()}};
    std::ostringstream t;
    std::map<std::string, int> counts;
    for (const auto& e : r.concrete) {
        json b{{"name", e.name},
               {"class", to_string(e.cls.tag)},
               {"source", diagram_expr(e.branching.source)},
               {"step_a", e.branching.step_a.rule},
               {"step_b", e.branching.step_b.rule}};
        if (e.cls.tag == BranchTag::regular) b["subcase"] = e.cls.subcase;
        j["concrete"].push_back(b);
        ++counts[to_string(e.cls.tag)];
        t << e.name << "  " << class_text(e.cls) << "  " << diagram_expr(e.branching.source) << "\n";
    }
    for (const auto& te : r.indexed) {
        j["indexed"].push_back({{"template", te.name},
                                {"class", to_string(te.tmpl.tag)},
                                {"upper", diagram_expr(te.tmpl.upper)},
                                {"shared", diagram_expr(te.tmpl.shared)},
                                {"lower", diagram_expr(te.tmpl.lower)},
                                {"holes", json::array({hole_json(te.tmpl.hole)})}});
        ++counts[to_string(te.tmpl.tag)];
        t << te.name << "  " << to_string(te.tmpl.tag) << "  hole " << to_string(te.tmpl.hole.anchor_left) << " -> "
          << to_string(te.tmpl.hole.anchor_right) << ", free wires on the " << (te.tmpl.hole.free_on_right ? "right" : "left")
          << "\n";
    }
    j["counts"] = counts;
    t << "total:";
    for (const auto& [k, n] : counts) t << " " << n << " " << k;
    t << "\n";
    emit(x, j, t.str());
    return 0;
}

template <class F>
void each_entry(const FdtReport& r, F f) {
    for (const auto& e : r.concrete) f(e);
    for (const auto& te : r.indexed)
        for (const auto& e : te.instances) f(e);
}

int confluence_verb(Ctx& x, const Polygraph& p) {
    need_dim(p, 3);
    std::string cert;
    const bool term = certified(x.c, p, &cert);
    FdtReport r = fdt_report(p, term, bounds_of(x.c));
    json j{{"branchings", json::array()}, {"certificate", cert}};
    std::ostringstream t;
    bool all = true;
    each_entry(r, [&](const BranchingEntry& e) {
        json b{{"name", e.name}, {"verdict", to_string(e.confluence.verdict)}};
        if (!e.confluence.reason.empty()) b["reason"] = e.confluence.reason;
        b["normal_a"] = diagram_expr(e.confluence.normal_a);
        b["normal_b"] = diagram_expr(e.confluence.normal_b);
        j["branchings"].push_back(b);
        all &= e.confluence.verdict == Confluence::confluent;
        t << e.name << ": " << to_string(e.confluence.verdict) << "\n";
    });
    j["all_confluent"] = all;
    t << "all confluent: " << (all ? "yes" : "no") << "\n";
    emit(x, j, t.str());
    return 0;
}

json sphere_json(const Sphere& g) {
    return {{"name", g.name}, {"lhs", json::parse(trace_json(g.lhs))}, {"rhs", json::parse(trace_json(g.rhs))}};
}

int basis_verb(Ctx& x, const Polygraph& p) {
    need_dim(p, 3);
    std::string cert;
    const bool term = certified(x.c, p, &cert);
    FdtReport r = fdt_report(p, term, bounds_of(x.c));
    json j{{"basis", json::array()}, {"certificate", cert}};
    std::ostringstream t;
    for (const auto& g : r.basis) {
        j["basis"].push_back(sphere_json(g));
        t << g.name << ": " << rules_of(g.lhs) << "  =  " << rules_of(g.rhs) << "\n";
    }
    std::vector<std::string> missing;
    each_entry(r, [&](const BranchingEntry& e) {
        if (e.confluence.verdict != Confluence::confluent) missing.push_back(e.name);
    });
    j["complete"] = missing.empty();
    j["missing"] = missing;
    j["size"] = r.basis.size();
    t << "size: " << r.basis.size() << "\n";
    for (const auto& m : missing) t << "missing: " << m << "\n";
    emit(x, j, t.str());
    return 0;
}

int termination_verb(Ctx& x, const Polygraph& p) {
    auto levels = levels_of(x.c, p);
    if (levels.empty()) throw Error("termination needs --cert or --interp");
    auto r = check_certificate(p, levels);
    std::ostringstream t;
    for (const auto& v : r.rules) {
        t << v.rule << ":";
        for (std::size_t k = 0; k < v.levels.size(); ++k) {
            t << " " << to_string(v.levels[k]);
            if (!v.notes[k].empty()) t << " (" << v.notes[k] << ")";
        }
        t << (v.decreasing ? "" : "  [not decreasing]") << "\n";
    }
    t << "verdict: " << (r.terminating ? "terminating" : "rejected") << "\n";
    emit(x, json::parse(certificate_json(r)), t.str());
    return 0;
}

int fdt_verb(Ctx& x, const Polygraph& p) {
    need_dim(p, 3);
    std::string cert;
    const bool term = certified(x.c, p, &cert);
    FdtReport r = fdt_report(p, term, bounds_of(x.c));
    json j = json::parse(fdt_json(r));
    j["certificate"] = cert;
    std::ostringstream t;
    t << "certificate: " << cert << "\n";
    for (const auto& e : r.concrete)
        t << e.name << "  " << class_text(e.cls) << "  " << to_string(e.confluence.verdict) << "\n";
    for (const auto& te : r.indexed) {
        t << te.name << "  " << to_string(te.tmpl.tag) << "  " << te.instances.size() << " instances"
          << (te.saturated ? ", saturated" : ", not saturated") << "\n";
        for (const auto& e : te.instances) t << "  " << e.name << "  " << to_string(e.confluence.verdict) << "\n";
    }
    for (const auto& n : r.notes) t << "note: " << n << "\n";
    t << "basis size: " << r.basis.size() << "\nverdict: " << r.verdict;
    if (r.verdict == "fdt_bound_certified") t << " (size bound " << r.size_bound << ")";
    t << "\n";
    emit(x, j, t.str());
    return 0;
}

std::map<std::string, long long> parse_dvals(const std::string& text, const Polygraph& p) {
    std::map<std::string, long long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("--dvals entry '" + item + "' is not name=value");
        std::string name = item.substr(0, eq);
        bool known = false;
        for (const auto& c : p.cells3) known |= c.name == name;
        if (!known) throw Error("--dvals names unknown 3-cell '" + name + "'");
        try {
            std::size_t used = 0;
            out[name] = std::stoll(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw Error("--dvals value for '" + name + "' is not an integer");
        }
    }
    return out;
}

int obstruction_verb(Ctx& x, const Polygraph& p) {
    need_dim(p, 3);
    if (x.c.target.empty() || x.c.dvals.empty()) throw Error("obstruction needs --target and --dvals");
    const auto dvals = parse_dvals(x.c.dvals, p);
    FdtReport r = fdt_report(p, certified(x.c, p, nullptr), bounds_of(x.c));
    // "~name" reads the generator from its second trace.
    auto find = [&](const std::string& spec) {
        const bool flip = !spec.empty() && spec[0] == '~';
        const std::string name = flip ? spec.substr(1) : spec;
        const BranchingEntry* hit = nullptr;
        each_entry(r, [&](const BranchingEntry& e) {
            if (e.name == name) hit = &e;
        });
        if (!hit) throw Error("no branching named '" + name + "'");
        if (hit->confluence.verdict != Confluence::confluent) throw Error("branching '" + name + "' has no generator");
        Sphere g = hit->confluence.generator;
        if (flip) g = Sphere{spec, g.rhs, g.lhs};
        return g;
    };
    std::vector<Sphere> cands;
    for (const auto& n : x.c.candidates) cands.push_back(find(n));
    const Sphere target = find(x.c.target);
    auto o = derivation_obstruction(cands, target, dvals);
    json j{{"obstructed", o.obstructed}, {"candidates", json::array()}};
    std::ostringstream t;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        j["candidates"].push_back(
            {{"name", x.c.candidates[i]}, {"lhs", o.candidate_values[i].first}, {"rhs", o.candidate_values[i].second}});
        t << x.c.candidates[i] << ": " << o.candidate_values[i].first << " vs " << o.candidate_values[i].second << "\n";
    }
    j["target"] = {{"name", x.c.target}, {"lhs", o.target_lhs}, {"rhs", o.target_rhs}};
    t << "target " << x.c.target << ": " << o.target_lhs << " vs " << o.target_rhs << "\n";
    t << "verdict: " << (o.obstructed ? "obstructed" : "no_information") << "\n";
    j["verdict"] = o.obstructed ? "obstructed" : "no_information";
    emit(x, j, t.str());
    return 0;
}

int words_verb(Ctx& x, const Polygraph& p) {
    need_dim(p, 2);
    std::string cert;
    const bool term = certified(x.c, p, &cert);
    auto r = word_confluence_report(p, term, x.c.max_steps);
    json j = json::parse(word_report_json(r));
    j["certificate"] = cert;
    std::ostringstream t;
    t << "certificate: " << cert << "\n";
    for (const auto& pr : r.pairs)
        t << to_string(pr.pair.kind) << " " << to_string(pr.pair.peak) << ": " << pr.pair.a.rule << "@" << pr.pair.a.pos
          << " / " << pr.pair.b.rule << "@" << pr.pair.b.pos << " -> " << to_string(pr.normal_a) << " / "
          << to_string(pr.normal_b) << (pr.joinable ? "  joinable" : "  not joinable") << "\n";
    t << "critical pairs: " << r.pairs.size() << "\nbasis size: " << r.basis.size() << "\nverdict: " << r.verdict
      << "\n";
    emit(x, j, t.str());
    return 0;
}

}  // namespace

int run(const Command& c, std::ostream& out, std::ostream& err) {
    try {
        if (c.output != "text" && c.output != "json") throw Error("--output must be text or json");
        if (c.max_steps == 0 || c.size_bound == 0 || c.width_bound == 0) throw Error("bounds must be positive");
        if (c.poly.empty()) throw Error("--poly is required");
        Ctx x{c, out, c.output == "json"};
        if (c.verb == "validate") return validate_verb(x);
        Polygraph p = load_polygraph(c.poly);
        if (c.verb == "normalize") return normalize_verb(x, p);
        if (c.verb == "branchings") return branchings_verb(x, p);
        if (c.verb == "confluence") return confluence_verb(x, p);
        if (c.verb == "basis") return basis_verb(x, p);
        if (c.verb == "termination") return termination_verb(x, p);
        if (c.verb == "fdt") return fdt_verb(x, p);
        if (c.verb == "obstruction") return obstruction_verb(x, p);
        if (c.verb == "words") return words_verb(x, p);
        throw Error("unknown verb '" + c.verb + "'");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace polyrw
