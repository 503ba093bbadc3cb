#include <algorithm>
#include <tuple>

#include "json.hpp"
#include "rewrite_impl.hpp"

namespace polyrw {

namespace detail {

std::vector<FRule> compile_rules(const Polygraph& p) {
    const Sig& s = p.sig();
    std::vector<FRule> out;
    for (const auto& c : p.cells3) {
        if (c.src.slices.empty()) throw Error("rule '" + c.name + "' has a degenerate source");
        out.push_back({c.name, canonical(s, frame_of(s, c.src)), canonical(s, frame_of(s, c.tgt))});
    }
    return out;
}

std::vector<FRedex> redexes(const Sig& s, const std::vector<FRule>& rules, const Frame& d) {
    std::vector<FRedex> out;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        for (auto& m : find_matches(s, d, rules[r].src)) {
            FRedex x;
            x.step.rule = static_cast<int>(r);
            x.step.ctx = std::move(m.ctx);
            x.slices = std::move(m.redex);
            out.push_back(std::move(x));
        }
    }
    return out;
}

std::optional<FRedex> first_redex(const Sig& s, const std::vector<FRule>& rules, const Frame& d) {
    std::optional<FRedex> best;
    auto key = [](const FRedex& x) {
        return std::make_tuple(x.slices.front(), x.step.ctx.left.size(), x.step.rule);
    };
    for (auto& x : redexes(s, rules, d))
        if (!best || key(x) < key(*best)) best = std::move(x);
    return best;
}

Frame apply(const Sig& s, const std::vector<FRule>& rules, const FStep& st) {
    const FRule& r = rules.at(static_cast<std::size_t>(st.rule));
    return plug(s, st.ctx, st.inverse ? r.src : r.tgt);
}

Frame source_of(const Sig& s, const std::vector<FRule>& rules, const FStep& st) {
    const FRule& r = rules.at(static_cast<std::size_t>(st.rule));
    return plug(s, st.ctx, st.inverse ? r.tgt : r.src);
}

FNormal normalize_frame(const Sig& s, const std::vector<FRule>& rules, const Frame& d, std::size_t max_steps) {
    FNormal out;
    out.result = canonical(s, d);
    while (true) {
        auto x = first_redex(s, rules, out.result);
        if (!x) return out;
        if (out.steps.size() >= max_steps) {
            out.normal = false;
            return out;
        }
        out.result = apply(s, rules, x->step);
        out.steps.push_back(std::move(x->step));
    }
}

FContext to_fcontext(const Sig& s, const WhiskerContext& c) {
    FContext f;
    f.top = canonical(s, frame_of(s, c.top));
    f.left = ids_of(s, c.left);
    f.right = ids_of(s, c.right);
    f.bottom = canonical(s, frame_of(s, c.bottom));
    return f;
}

WhiskerContext to_context(const Sig& s, const FContext& c, std::size_t hole_width) {
    WhiskerContext w;
    w.top = diagram_of(s, c.top);
    w.left = word_of(s, c.left, c.top.pt);
    Ids cut = target_of(s, c.top);
    w.right = word_of(s, c.right, point_at(s, cut, c.top.pt, c.left.size() + hole_width));
    w.bottom = diagram_of(s, c.bottom);
    return w;
}

RewriteStep to_step(const Sig& s, const std::vector<FRule>& rules, const FStep& st) {
    const FRule& r = rules.at(static_cast<std::size_t>(st.rule));
    RewriteStep out;
    out.rule = r.name;
    out.dir = st.inverse ? Direction::inverse : Direction::forward;
    out.context = to_context(s, st.ctx, (st.inverse ? r.tgt : r.src).src.size());
    return out;
}

FStep to_fstep(const Sig& s, const std::vector<FRule>& rules, const RewriteStep& st) {
    FStep out;
    auto it = std::find_if(rules.begin(), rules.end(), [&](const FRule& r) { return r.name == st.rule; });
    if (it == rules.end()) throw TypeError("unknown 3-cell '" + st.rule + "'");
    out.rule = static_cast<int>(it - rules.begin());
    out.inverse = st.dir == Direction::inverse;
    out.ctx = to_fcontext(s, st.context);
    return out;
}

}  // namespace detail

using detail::Frame;

std::vector<RewriteStep> find_redexes(const Polygraph& p, const Diagram& d) {
    const auto& s = p.sig();
    auto rules = detail::compile_rules(p);
    Frame f = detail::canonical(s, detail::frame_of(s, d));
    std::vector<RewriteStep> out;
    for (const auto& x : detail::redexes(s, rules, f)) out.push_back(detail::to_step(s, rules, x.step));
    return out;
}

bool is_normal(const Polygraph& p, const Diagram& d) {
    const auto& s = p.sig();
    auto rules = detail::compile_rules(p);
    Frame f = detail::canonical(s, detail::frame_of(s, d));
    for (const auto& r : rules)
        if (detail::has_match(s, f, r.src)) return false;
    return true;
}

Diagram step_source(const Polygraph& p, const RewriteStep& st) {
    const auto& s = p.sig();
    auto rules = detail::compile_rules(p);
    return detail::diagram_of(s, detail::source_of(s, rules, detail::to_fstep(s, rules, st)));
}

Diagram apply_step(const Polygraph& p, const RewriteStep& st) {
    const auto& s = p.sig();
    auto rules = detail::compile_rules(p);
    return detail::diagram_of(s, detail::apply(s, rules, detail::to_fstep(s, rules, st)));
}

NormalizeResult normalize(const Polygraph& p, const Diagram& d, std::size_t max_steps) {
    const auto& s = p.sig();
    auto rules = detail::compile_rules(p);
    Frame f = detail::canonical(s, detail::frame_of(s, d));
    auto n = detail::normalize_frame(s, rules, f, max_steps);
    NormalizeResult out;
    out.result = detail::diagram_of(s, n.result);
    out.trace.start = detail::diagram_of(s, f);
    for (const auto& st : n.steps) out.trace.steps.push_back(detail::to_step(s, rules, st));
    out.status = n.normal ? NormStatus::normal : NormStatus::step_limit;
    return out;
}

std::vector<Diagram> replay(const Polygraph& p, const Trace& t) {
    const auto& s = p.sig();
    auto rules = detail::compile_rules(p);
    Frame cur = detail::canonical(s, detail::frame_of(s, t.start));
    std::vector<Diagram> out{detail::diagram_of(s, cur)};
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        auto st = detail::to_fstep(s, rules, t.steps[i]);
        if (!(detail::source_of(s, rules, st) == cur))
            throw Error("trace step " + std::to_string(i) + " does not start at the previous diagram");
        cur = detail::apply(s, rules, st);
        out.push_back(detail::diagram_of(s, cur));
    }
    return out;
}

Diagram trace_end(const Polygraph& p, const Trace& t) { return replay(p, t).back(); }

Trace trace_inverse(const Polygraph& p, const Trace& t) {
    Trace out;
    out.start = trace_end(p, t);
    for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it) {
        RewriteStep st = *it;
        st.dir = st.dir == Direction::forward ? Direction::inverse : Direction::forward;
        out.steps.push_back(std::move(st));
    }
    return out;
}

Trace trace_compose(const Polygraph& p, const Trace& t1, const Trace& t2) {
    if (!equal_up_to_exchange(p, trace_end(p, t1), t2.start))
        throw TypeError("trace_compose: end of the first trace differs from the start of the second");
    Trace out = t1;
    out.start = canonicalize(p, t1.start);
    out.steps.insert(out.steps.end(), t2.steps.begin(), t2.steps.end());
    return out;
}

bool operator==(const RewriteStep& a, const RewriteStep& b) {
    return a.rule == b.rule && a.dir == b.dir && a.context == b.context;
}

bool operator==(const Trace& a, const Trace& b) { return a.start == b.start && a.steps == b.steps; }

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "inverse"; }
std::string to_string(NormStatus s) { return s == NormStatus::normal ? "normal" : "step_limit"; }

std::string trace_json(const Trace& t) {
    nlohmann::json j;
    j["start"] = dump(t.start);
    j["steps"] = nlohmann::json::array();
    for (const auto& st : t.steps) {
        j["steps"].push_back({{"rule", st.rule},
                              {"dir", to_string(st.dir)},
                              {"top", dump(st.context.top)},
                              {"left", to_string(st.context.left)},
                              {"right", to_string(st.context.right)},
                              {"bottom", dump(st.context.bottom)}});
    }
    return j.dump();
}

}  // namespace polyrw
