// Critical branchings, indexed instances, confluence and FDT reports.
#include "polyrw/branchings.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "branch_impl.hpp"
#include "json.hpp"
#include "polyrw/polygraph.hpp"

namespace polyrw {

using namespace detail;

std::string to_string(BranchTag t) {
    switch (t) {
        case BranchTag::trivial: return "trivial";
        case BranchTag::inclusion: return "inclusion";
        case BranchTag::regular: return "regular";
        case BranchTag::right_indexed: return "right_indexed";
        case BranchTag::left_indexed: return "left_indexed";
        case BranchTag::multi_indexed: return "multi_indexed";
    }
    return "?";
}

std::string to_string(Confluence c) {
    switch (c) {
        case Confluence::confluent: return "confluent";
        case Confluence::not_confluent: return "not_confluent";
        case Confluence::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

int rule_index(const std::vector<FRule>& rules, const std::string& name) {
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (rules[i].name == name) return static_cast<int>(i);
    throw Error("unknown 3-cell '" + name + "'");
}

Word word_from(const Sig& s, const Ids& w) { return word_of(s, w, w.empty() ? 0 : s.c1src[w.front()]); }

RewriteStep step_at(const Sig& s, const std::vector<FRule>& rules, const Frame& S, int rule,
                    const std::vector<int>& slices) {
    auto m = match_subset(s, S, slices, rules[rule].src);
    if (m.empty()) throw Error("internal: occurrence of '" + rules[rule].name + "' not found");
    return to_step(s, rules, FStep{rule, false, m.front().ctx});
}

Branching make_branching(const Sig& s, const std::vector<FRule>& rules, const Frame& S, int a,
                         const std::vector<int>& sa, int b, const std::vector<int>& sb) {
    return Branching{diagram_of(s, S), step_at(s, rules, S, a, sa), step_at(s, rules, S, b, sb)};
}

FTemplate lower_template(const Sig& s, const std::vector<FRule>& rules, const IndexedTemplate& t) {
    if (t.tag != BranchTag::right_indexed && t.tag != BranchTag::left_indexed)
        throw TypeError("template must be right_indexed or left_indexed");
    FTemplate f;
    f.rule_a = rule_index(rules, t.rule_a);
    f.rule_b = rule_index(rules, t.rule_b);
    f.tag = t.tag;
    f.upper = canonical(s, frame_of(s, t.upper));
    f.shared = canonical(s, frame_of(s, t.shared));
    f.lower = canonical(s, frame_of(s, t.lower));
    f.u = ids_of(s, t.hole.anchor_left);
    f.v = ids_of(s, t.hole.anchor_right);
    return f;
}

IndexedTemplate raise_template(const Sig& s, const std::vector<FRule>& rules, const FTemplate& f) {
    IndexedTemplate t;
    t.rule_a = rules[f.rule_a].name;
    t.rule_b = rules[f.rule_b].name;
    t.tag = f.tag;
    t.upper = diagram_of(s, f.upper);
    t.shared = diagram_of(s, f.shared);
    t.lower = diagram_of(s, f.lower);
    t.hole.anchor_left = word_from(s, f.u);
    t.hole.anchor_right = word_from(s, f.v);
    t.hole.free_on_right = f.tag == BranchTag::right_indexed;
    return t;
}

struct Found {
    std::vector<BranchingEntry> concrete;
    std::vector<std::pair<std::string, FTemplate>> indexed;
};

std::string unique_name(std::map<std::string, int>& used, const std::string& base) {
    const int n = ++used[base];
    return n == 1 ? base : base + "_" + std::to_string(n);
}

Found collect(const Polygraph& p) {
    const Sig& s = p.sig();
    const auto rules = compile_rules(p);
    Found out;
    std::map<std::string, int> used;
    for (std::size_t a = 0; a < rules.size(); ++a) {
        for (std::size_t b = a; b < rules.size(); ++b) {
            for (const Overlap& o : overlaps(s, rules, static_cast<int>(a), static_cast<int>(b))) {
                ClassInfo ci = classify_frame(s, o.source, o.slices_a, o.slices_b);
                if (ci.cls.tag == BranchTag::right_indexed || ci.cls.tag == BranchTag::left_indexed) continue;
                BranchingEntry e;
                const bool swap = !ci.a_upper;
                e.branching = swap ? make_branching(s, rules, o.source, o.rule_b, o.slices_b, o.rule_a, o.slices_a)
                                   : make_branching(s, rules, o.source, o.rule_a, o.slices_a, o.rule_b, o.slices_b);
                e.name = unique_name(used, e.branching.step_a.rule + e.branching.step_b.rule);
                e.cls = ci.cls;
                out.concrete.push_back(std::move(e));
            }
        }
    }
    for (const FTemplate& t : templates(s, rules))
        out.indexed.emplace_back(unique_name(used, rules[t.rule_a].name + rules[t.rule_b].name), t);
    return out;
}

// Per wire of k's target: whether it descends from the anchor wires.
std::vector<char> anchored(const Sig& s, const Frame& k, std::size_t anchor, bool right) {
    const Wires w = trace_wires(s, k);
    std::vector<char> from(w.type.size(), 0);
    for (std::size_t i = 0; i < anchor; ++i) from[right ? i : k.src.size() - 1 - i] = 1;
    for (std::size_t id = k.src.size(); id < w.type.size(); ++id) {
        const int layer = w.producer[id];
        for (std::size_t j = 0; j < w.type.size(); ++j)
            if (w.consumer[j] == layer && from[j]) from[id] = 1;
    }
    std::vector<char> out;
    for (int id : w.cuts.back()) out.push_back(from[id]);
    return out;
}

std::vector<Frame> fillings(const Sig& s, const std::vector<FRule>& rules, const FTemplate& t, std::size_t size_bound,
                            std::size_t width_bound, std::vector<Filled>* filled) {
    if (t.u.size() > width_bound) return {};
    const bool right = t.tag == BranchTag::right_indexed;
    // Free words beside the anchor, grown away from it.
    std::vector<Ids> free{{}};
    const int start = right ? s.c1tgt[t.u.back()] : s.c1src[t.u.front()];
    for (std::size_t i = 0; i < free.size(); ++i) {
        if (free[i].size() + t.u.size() >= width_bound) continue;
        const int at = free[i].empty() ? start : right ? s.c1tgt[free[i].back()] : s.c1src[free[i].front()];
        for (std::size_t c = 0; c < s.c1.size(); ++c) {
            if ((right ? s.c1src[c] : s.c1tgt[c]) != at) continue;
            Ids w = free[i];
            if (right) w.push_back(static_cast<int>(c));
            else w.insert(w.begin(), static_cast<int>(c));
            free.push_back(std::move(w));
        }
    }
    auto normal = [&](const Frame& k) {
        for (const auto& r : rules)
            if (has_match(s, k, r.src)) return false;
        return true;
    };
    std::vector<Frame> out;
    std::unordered_set<Frame, FrameHash> seen;
    for (const Ids& x : free) {
        Frame id;
        id.src = right ? t.u : x;
        id.src.insert(id.src.end(), right ? x.begin() : t.u.begin(), right ? x.end() : t.u.end());
        id.pt = s.c1src[id.src.front()];
        std::vector<Frame> level{id};
        seen.insert(id);
        for (std::size_t size = 0; size <= size_bound && !level.empty(); ++size) {
            std::vector<Frame> next;
            for (const Frame& k : level) {
                if (auto f = fill(s, t, k); f && minimal(s, *f)) {
                    out.push_back(k);
                    if (filled) filled->push_back(std::move(*f));
                }
                if (size == size_bound) continue;
                const Ids cut = target_of(s, k);
                const std::vector<char> mark = anchored(s, k, t.u.size(), right);
                for (std::size_t g = 0; g < s.gens.size(); ++g) {
                    const std::size_t in = s.gens[g].src.size(), outw = s.gens[g].tgt.size();
                    if (in > cut.size() || cut.size() - in + outw > width_bound) continue;
                    for (std::size_t off = 0; off + in <= cut.size(); ++off) {
                        // A hole layer not fed by the anchor never becomes minimal again.
                        if (std::none_of(mark.begin() + static_cast<long>(off),
                                         mark.begin() + static_cast<long>(off + in), [](char c) { return c; }))
                            continue;
                        Frame n = k;
                        n.layers.push_back(Layer{static_cast<int>(off), static_cast<int>(g)});
                        if (!well_formed(s, n)) continue;
                        n = canonical(s, n);
                        if (!seen.insert(n).second || !normal(n)) continue;
                        next.push_back(std::move(n));
                    }
                }
            }
            level = std::move(next);
        }
    }
    return out;
}

}  // namespace

CriticalBranchings enumerate_critical_branchings(const Polygraph& p) {
    const Sig& s = p.sig();
    const auto rules = compile_rules(p);
    Found f = collect(p);
    CriticalBranchings out;
    for (auto& e : f.concrete) out.concrete.push_back(std::move(e.branching));
    for (const auto& [name, t] : f.indexed) out.indexed.push_back(raise_template(s, rules, t));
    return out;
}

BranchingClass classify(const Branching& b, const Polygraph& p) {
    const Sig& s = p.sig();
    const auto rules = compile_rules(p);
    const Frame S = canonical(s, frame_of(s, b.source));
    std::vector<int> sa, sb;
    auto locate = [&](const RewriteStep& st, std::vector<int>& pos) {
        FStep f = to_fstep(s, rules, st);
        const Frame& pat = f.inverse ? rules[f.rule].tgt : rules[f.rule].src;
        if (!(plug(s, f.ctx, pat, &pos) == S)) throw Error("step '" + st.rule + "' does not start at the branching source");
    };
    locate(b.step_a, sa);
    locate(b.step_b, sb);
    if (sa == sb && b.step_a.rule == b.step_b.rule) throw Error("both steps rewrite the same occurrence");
    BranchingClass c = classify_frame(s, S, sa, sb).cls;
    Filled f{S, sa, sb, {}};
    for (int i = 0; i < static_cast<int>(S.layers.size()); ++i)
        if (!std::binary_search(sa.begin(), sa.end(), i) && !std::binary_search(sb.begin(), sb.end(), i))
            f.hole.push_back(i);
    if (!minimal(s, f)) throw Error("branching is not minimal");
    return c;
}

Branching instantiate(const Polygraph& p, const IndexedTemplate& t, const Diagram& k) {
    const Sig& s = p.sig();
    const auto rules = compile_rules(p);
    const FTemplate ft = lower_template(s, rules, t);
    auto f = fill(s, ft, frame_of(s, k));
    if (!f) throw TypeError("filling does not fit the hole of " + t.rule_a + t.rule_b);
    return make_branching(s, rules, f->source, ft.rule_a, f->slices_a, ft.rule_b, f->slices_b);
}

Instances enumerate_normal_instances(const IndexedTemplate& t, const Polygraph& p, std::size_t size_bound,
                                     std::size_t width_bound) {
    const Sig& s = p.sig();
    const auto rules = compile_rules(p);
    const FTemplate ft = lower_template(s, rules, t);
    std::vector<Filled> filled;
    auto ks = fillings(s, rules, ft, size_bound, width_bound, &filled);
    Instances out;
    out.saturated = true;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i].layers.size() == size_bound) out.saturated = false;
        out.fillings.push_back(diagram_of(s, ks[i]));
        out.branchings.push_back(
            make_branching(s, rules, filled[i].source, ft.rule_a, filled[i].slices_a, ft.rule_b, filled[i].slices_b));
    }
    return out;
}

ConfluenceResult check_branching_confluence(const Branching& b, const Polygraph& p, bool terminating,
                                            std::size_t max_steps) {
    ConfluenceResult r;
    const NormalizeResult na = normalize(p, apply_step(p, b.step_a), max_steps);
    const NormalizeResult nb = normalize(p, apply_step(p, b.step_b), max_steps);
    r.normal_a = na.result;
    r.normal_b = nb.result;
    if (na.status != NormStatus::normal || nb.status != NormStatus::normal) {
        r.reason = "step limit reached while normalizing";
        return r;
    }
    if (!equal_up_to_exchange(p, na.result, nb.result)) {
        if (terminating) r.verdict = Confluence::not_confluent;
        else r.reason = "distinct normal forms without a termination certificate";
        return r;
    }
    r.verdict = Confluence::confluent;
    r.generator.lhs = Trace{b.source, {b.step_a}};
    r.generator.rhs = Trace{b.source, {b.step_b}};
    for (const auto& st : na.trace.steps) r.generator.lhs.steps.push_back(st);
    for (const auto& st : nb.trace.steps) r.generator.rhs.steps.push_back(st);
    return r;
}

FdtReport fdt_report(const Polygraph& p, bool terminating, const Bounds& bounds) {
    const Sig& s = p.sig();
    const auto rules = compile_rules(p);
    Found found = collect(p);
    FdtReport r;
    r.terminating = terminating;
    r.size_bound = bounds.size_bound;
    bool any_bad = false, any_open = false, multi = false;
    auto settle = [&](BranchingEntry& e) {
        e.confluence = check_branching_confluence(e.branching, p, terminating, bounds.max_steps);
        e.confluence.generator.name = e.name;
        if (e.confluence.verdict == Confluence::confluent) r.basis.push_back(e.confluence.generator);
        any_bad |= e.confluence.verdict == Confluence::not_confluent;
        any_open |= e.confluence.verdict == Confluence::inconclusive;
    };
    for (auto& e : found.concrete) {
        multi |= e.cls.tag == BranchTag::multi_indexed;
        settle(e);
        r.concrete.push_back(std::move(e));
    }
    bool saturated = true;
    for (const auto& [name, ft] : found.indexed) {
        TemplateEntry te;
        te.name = name;
        te.tmpl = raise_template(s, rules, ft);
        std::vector<Filled> filled;
        auto ks = fillings(s, rules, ft, bounds.size_bound, bounds.width_bound, &filled);
        te.saturated = true;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            if (ks[i].layers.size() == bounds.size_bound) te.saturated = false;
            BranchingEntry e;
            e.name = name + "(" + diagram_expr(diagram_of(s, ks[i])) + ")";
            e.branching = make_branching(s, rules, filled[i].source, ft.rule_a, filled[i].slices_a, ft.rule_b,
                                         filled[i].slices_b);
            e.cls.tag = ft.tag;
            e.cls.holes.push_back(te.tmpl.hole);
            settle(e);
            te.instances.push_back(std::move(e));
        }
        saturated &= te.saturated;
        r.indexed.push_back(std::move(te));
    }
    if (multi) r.notes.push_back("multi-indexed branchings are listed concretely; their families are not enumerated");
    if (!terminating) {
        r.verdict = "inconclusive";
        r.notes.push_back("no accepted termination certificate");
    } else if (any_bad) {
        r.verdict = "not_confluent";
    } else if (any_open || multi) {
        r.verdict = "inconclusive";
    } else if (r.indexed.empty()) {
        r.verdict = "fdt_certified";
    } else if (saturated) {
        r.verdict = "fdt_bound_certified";
    } else {
        r.verdict = "inconclusive";
        r.notes.push_back("indexed instances still grow at size bound " + std::to_string(bounds.size_bound));
    }
    return r;
}

FdtReport branching_report(const Polygraph& p) {
    const Sig& s = p.sig();
    const auto rules = compile_rules(p);
    Found found = collect(p);
    FdtReport r;
    r.concrete = std::move(found.concrete);
    for (const auto& [name, ft] : found.indexed) {
        TemplateEntry te;
        te.name = name;
        te.tmpl = raise_template(s, rules, ft);
        r.indexed.push_back(std::move(te));
    }
    return r;
}

std::vector<HomotopyGenerator> build_homotopy_basis(const Polygraph& p, bool terminating, const Bounds& bounds) {
    FdtReport r = fdt_report(p, terminating, bounds);
    auto check = [](const BranchingEntry& e) {
        if (e.confluence.verdict != Confluence::confluent)
            throw Error("branching " + e.name + " is " + to_string(e.confluence.verdict) +
                        (e.confluence.reason.empty() ? "" : ": " + e.confluence.reason));
    };
    for (const auto& e : r.concrete) check(e);
    for (const auto& t : r.indexed)
        for (const auto& e : t.instances) check(e);
    return r.basis;
}

namespace {

nlohmann::json entry_json(const BranchingEntry& e) {
    nlohmann::json j{{"name", e.name},
                     {"class", to_string(e.cls.tag)},
                     {"source", diagram_expr(e.branching.source)},
                     {"confluence", to_string(e.confluence.verdict)}};
    if (e.cls.tag == BranchTag::regular) j["subcase"] = e.cls.subcase;
    if (!e.confluence.reason.empty()) j["reason"] = e.confluence.reason;
    if (e.confluence.verdict != Confluence::inconclusive) {
        j["normal_a"] = diagram_expr(e.confluence.normal_a);
        j["normal_b"] = diagram_expr(e.confluence.normal_b);
    }
    return j;
}

}  // namespace

std::string fdt_json(const FdtReport& r) {
    using nlohmann::json;
    json j;
    j["concrete"] = json::array();
    for (const auto& e : r.concrete) j["concrete"].push_back(entry_json(e));
    j["indexed"] = json::array();
    for (const auto& t : r.indexed) {
        json inst = json::array();
        for (const auto& e : t.instances) inst.push_back(entry_json(e));
        json hole{{"anchor_left", to_string(t.tmpl.hole.anchor_left)},
                  {"anchor_right", to_string(t.tmpl.hole.anchor_right)},
                  {"free_side", t.tmpl.hole.free_on_right ? "right" : "left"}};
        j["indexed"].push_back({{"template", t.name},
                                {"class", to_string(t.tmpl.tag)},
                                {"upper", diagram_expr(t.tmpl.upper)},
                                {"shared", diagram_expr(t.tmpl.shared)},
                                {"lower", diagram_expr(t.tmpl.lower)},
                                {"holes", json::array({hole})},
                                {"instances", inst},
                                {"saturated", t.saturated}});
    }
    j["basis"] = json::array();
    for (const auto& g : r.basis)
        j["basis"].push_back({{"name", g.name}, {"lhs", json::parse(trace_json(g.lhs))}, {"rhs", json::parse(trace_json(g.rhs))}});
    j["verdict"] = r.verdict;
    j["terminating"] = r.terminating;
    j["size_bound"] = r.size_bound;
    j["notes"] = r.notes;
    return j.dump();
}

}  // namespace polyrw
