#include "polyrw/words.hpp"

#include <algorithm>

#include "frame.hpp"
#include "json.hpp"

namespace polyrw {

namespace {

const WordRule& rule_named(const Polygraph& p, const std::string& name) {
    for (const auto& r : p.rules)
        if (r.name == name) return r;
    throw TypeError("unknown rule '" + name + "'");
}

bool occurs_at(const std::vector<std::string>& w, const std::vector<std::string>& pat, std::size_t pos) {
    return pos + pat.size() <= w.size() && std::equal(pat.begin(), pat.end(), w.begin() + static_cast<long>(pos));
}

std::string joined(const std::vector<WordStep>& steps) {
    std::string out;
    for (const auto& s : steps) out += s.rule + "@" + std::to_string(s.pos) + " ";
    return out;
}

}  // namespace

Word apply_word_step(const Polygraph& p, const Word& w, const WordStep& s) {
    const WordRule& r = rule_named(p, s.rule);
    if (!occurs_at(w.cells, r.lhs.cells, s.pos))
        throw TypeError("rule '" + s.rule + "' does not apply at position " + std::to_string(s.pos));
    const auto& sig = p.sig();
    Word out;
    out.cells.assign(w.cells.begin(), w.cells.begin() + static_cast<long>(s.pos));
    out.cells.insert(out.cells.end(), r.rhs.cells.begin(), r.rhs.cells.end());
    out.cells.insert(out.cells.end(), w.cells.begin() + static_cast<long>(s.pos + r.lhs.size()), w.cells.end());
    out.point = w.point;
    if (out.cells.empty() && !w.cells.empty()) out.point = sig.c0[static_cast<std::size_t>(detail::word_point(sig, w))];
    if (!out.cells.empty()) out.point = sig.c0[static_cast<std::size_t>(sig.c1src[sig.cell1(out.cells.front())])];
    return out;
}

std::vector<WordStep> word_redexes(const Polygraph& p, const Word& w) {
    std::vector<WordStep> out;
    for (std::size_t pos = 0; pos < w.size(); ++pos)
        for (const auto& r : p.rules)
            if (occurs_at(w.cells, r.lhs.cells, pos)) out.push_back({r.name, pos});
    return out;
}

WordNormalizeResult normalize_word(const Polygraph& p, const Word& w, std::size_t max_steps) {
    WordNormalizeResult out;
    out.result = w;
    while (true) {
        auto rs = word_redexes(p, out.result);
        if (rs.empty()) return out;
        if (out.steps.size() >= max_steps) {
            out.status = NormStatus::step_limit;
            return out;
        }
        // Innermost: no other redex lies strictly inside. Leftmost among those,
        // then shortest, then rule order.
        auto len = [&](const WordStep& s) { return rule_named(p, s.rule).lhs.size(); };
        const WordStep* best = nullptr;
        for (const auto& a : rs) {
            bool inner = true;
            for (const auto& b : rs) {
                if (&a == &b) continue;
                bool inside = b.pos >= a.pos && b.pos + len(b) <= a.pos + len(a);
                if (inside && len(b) < len(a)) inner = false;
            }
            if (!inner) continue;
            if (!best || a.pos < best->pos || (a.pos == best->pos && len(a) < len(*best))) best = &a;
        }
        WordStep st = *best;
        out.result = apply_word_step(p, out.result, st);
        out.steps.push_back(st);
    }
}

std::vector<WordCriticalPair> word_critical_pairs(const Polygraph& p) {
    std::vector<WordCriticalPair> out;
    const auto& rules = p.rules;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& l1 = rules[i].lhs.cells;
        for (std::size_t j = 0; j < rules.size(); ++j) {
            const auto& l2 = rules[j].lhs.cells;
            // Overlaps: a proper suffix of l1 is a proper prefix of l2.
            for (std::size_t k = 1; k < l1.size() && k < l2.size(); ++k) {
                if (!std::equal(l1.end() - static_cast<long>(k), l1.end(), l2.begin())) continue;
                WordCriticalPair cp;
                cp.kind = WordPairKind::overlap;
                cp.peak.cells = l1;
                cp.peak.cells.insert(cp.peak.cells.end(), l2.begin() + static_cast<long>(k), l2.end());
                cp.peak.point = rules[i].lhs.point;
                cp.a = {rules[i].name, 0};
                cp.b = {rules[j].name, l1.size() - k};
                out.push_back(std::move(cp));
            }
            // Inclusions: l2 occurs inside l1.
            if (l2.size() > l1.size()) continue;
            for (std::size_t pos = 0; pos + l2.size() <= l1.size(); ++pos) {
                if (!occurs_at(l1, l2, pos)) continue;
                if (i == j && pos == 0) continue;
                if (l1.size() == l2.size() && j < i) continue;
                WordCriticalPair cp;
                cp.kind = WordPairKind::inclusion;
                cp.peak = rules[i].lhs;
                cp.a = {rules[i].name, 0};
                cp.b = {rules[j].name, pos};
                out.push_back(std::move(cp));
            }
        }
    }
    return out;
}

WordReport word_confluence_report(const Polygraph& p, bool terminating, std::size_t max_steps) {
    WordReport rep;
    bool complete = true;
    for (const auto& cp : word_critical_pairs(p)) {
        WordPairReport pr;
        pr.pair = cp;
        auto side = [&](const WordStep& first, Word& nf, std::vector<WordStep>& trace) {
            Word w = apply_word_step(p, cp.peak, first);
            auto n = normalize_word(p, w, max_steps);
            nf = n.result;
            trace.push_back(first);
            trace.insert(trace.end(), n.steps.begin(), n.steps.end());
            return n.status == NormStatus::normal;
        };
        bool ca = side(cp.a, pr.normal_a, pr.trace_a);
        bool cb = side(cp.b, pr.normal_b, pr.trace_b);
        pr.complete = ca && cb;
        pr.joinable = pr.complete && pr.normal_a == pr.normal_b;
        complete = complete && pr.complete;
        if (pr.joinable) {
            rep.basis.push_back({cp.a.rule + cp.b.rule, cp.peak, pr.trace_a, pr.trace_b});
        } else {
            rep.joinable = false;
        }
        rep.pairs.push_back(std::move(pr));
    }
    bool diverged = false;
    for (const auto& pr : rep.pairs)
        if (pr.complete && !pr.joinable) diverged = true;
    if (diverged && terminating)
        rep.verdict = "not_confluent";
    else if (rep.joinable && complete && terminating)
        rep.verdict = "fdt_certified";
    else
        rep.verdict = "inconclusive";
    return rep;
}

std::string to_string(WordPairKind k) { return k == WordPairKind::overlap ? "overlap" : "inclusion"; }

std::string word_report_json(const WordReport& r) {
    using nlohmann::json;
    json j;
    j["pairs"] = json::array();
    for (const auto& pr : r.pairs) {
        j["pairs"].push_back({{"kind", to_string(pr.pair.kind)},
                              {"peak", to_string(pr.pair.peak)},
                              {"step_a", {{"rule", pr.pair.a.rule}, {"pos", pr.pair.a.pos}}},
                              {"step_b", {{"rule", pr.pair.b.rule}, {"pos", pr.pair.b.pos}}},
                              {"normal_a", to_string(pr.normal_a)},
                              {"normal_b", to_string(pr.normal_b)},
                              {"joinable", pr.joinable}});
    }
    j["joinable"] = r.joinable;
    j["basis_size"] = r.basis.size();
    j["basis"] = json::array();
    for (const auto& b : r.basis)
        j["basis"].push_back({{"name", b.name}, {"source", to_string(b.source)}, {"lhs", joined(b.lhs)}, {"rhs", joined(b.rhs)}});
    j["verdict"] = r.verdict;
    return j.dump();
}

}  // namespace polyrw
