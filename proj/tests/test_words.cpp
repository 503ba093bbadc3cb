#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "doctest.h"
#include "polyrw/polygraph.hpp"
#include "polyrw/words.hpp"
#include "support.hpp"

using namespace polyrw;

namespace {

Polygraph words_poly(const std::string& rules, const std::string& letters = "a b c d") {
    std::string text = "polygraph t { cell0 x; ";
    std::string cur;
    for (char ch : letters + " ") {
        if (ch == ' ') {
            if (!cur.empty()) text += "cell1 " + cur + " : x -> x; ";
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return parse_polygraph(text + rules + " }");
}

Word wd(const std::string& s) {
    Word w;
    w.point = "x";
    for (char ch : s) w.cells.push_back(std::string(1, ch));
    return w;
}

std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t max_len) {
    std::vector<Word> out{Word({}, "x")};
    std::vector<Word> level = out;
    for (std::size_t n = 0; n < max_len; ++n) {
        std::vector<Word> next;
        for (const auto& w : level)
            for (const auto& a : alphabet) {
                Word v = w;
                v.cells.push_back(a);
                next.push_back(v);
            }
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

// Words reachable from w by any rewriting.
std::set<std::vector<std::string>> descendants(const Polygraph& p, const Word& w) {
    std::set<std::vector<std::string>> seen{w.cells};
    std::deque<Word> q{w};
    while (!q.empty()) {
        Word cur = q.front();
        q.pop_front();
        for (const auto& s : word_redexes(p, cur)) {
            Word n = apply_word_step(p, cur, s);
            if (seen.insert(n.cells).second) q.push_back(n);
        }
    }
    return seen;
}

}  // namespace

TEST_CASE("normalize_word") {
    Polygraph aa = testing::fixture("aa.poly");
    auto r = normalize_word(aa, wd("aaa"));
    CHECK(to_string(r.result) == "a");
    CHECK(r.steps.size() == 2);
    CHECK(normalize_word(aa, wd("a")).steps.empty());
    for (const auto& w : all_words({"a"}, 6)) {
        if (w.empty()) continue;
        auto n = normalize_word(aa, w);
        CHECK(to_string(n.result) == "a");
        CHECK(n.steps.size() == w.size() - 1);
    }
    CHECK(normalize_word(aa, wd("aaaa"), 1).status == NormStatus::step_limit);
}

TEST_CASE("leftmost-innermost picks the inner redex") {
    Polygraph p = words_poly("rule big : a b c => d; rule small : b => c;");
    auto r = normalize_word(p, wd("abc"));
    REQUIRE(!r.steps.empty());
    CHECK(r.steps[0].rule == "small");
}

TEST_CASE("word_critical_pairs") {
    auto cps = word_critical_pairs(testing::fixture("aa.poly"));
    REQUIRE(cps.size() == 1);
    CHECK(to_string(cps[0].peak) == "a a a");
    CHECK(word_critical_pairs(words_poly("rule r : a a => a; rule s : b b => b;")).size() == 2);
    CHECK(word_critical_pairs(words_poly("rule r : a => b; rule s : c => d;")).empty());
    auto two = word_critical_pairs(words_poly("rule r : a b => c; rule s : b a => d;"));
    REQUIRE(two.size() == 2);
    std::set<std::string> peaks;
    for (const auto& c : two) peaks.insert(to_string(c.peak));
    CHECK(peaks == std::set<std::string>{"a b a", "b a b"});
    auto inc = word_critical_pairs(words_poly("rule r : a b a => c; rule s : b => d;"));
    // b inside aba, plus the self-overlap of aba on "a".
    REQUIRE(inc.size() == 2);
    CHECK(std::count_if(inc.begin(), inc.end(), [](const WordCriticalPair& c) {
              return c.kind == WordPairKind::inclusion;
          }) == 1);
}

TEST_CASE("critical pairs cover every local branching") {
    std::vector<std::pair<std::string, std::string>> systems{
        {"rule r : a a => a;", "a"},
        {"rule r : a b => c; rule s : b a => d;", "a b c d"},
        {"rule r : a b => a; rule s : b a => b;", "a b"},
        {"rule r : a b a => c; rule s : b => d; rule t : a a => b;", "a b c d"}};
    for (const auto& [rules, letters] : systems) {
        Polygraph p = words_poly(rules, letters);
        auto cps = word_critical_pairs(p);
        std::vector<std::string> alphabet;
        for (const auto& c : p.cells1) alphabet.push_back(c.name);
        std::size_t max_len = alphabet.size() > 2 ? 5 : 8;
        for (const auto& w : all_words(alphabet, max_len)) {
            auto rs = word_redexes(p, w);
            for (std::size_t i = 0; i < rs.size(); ++i)
                for (std::size_t j = i + 1; j < rs.size(); ++j) {
                    const auto& a = rs[i];
                    const auto& b = rs[j];
                    auto len = [&](const WordStep& s) {
                        for (const auto& r : p.rules)
                            if (r.name == s.rule) return r.lhs.size();
                        return std::size_t{0};
                    };
                    bool disjoint = a.pos + len(a) <= b.pos || b.pos + len(b) <= a.pos;
                    if (disjoint) continue;
                    bool covered = false;
                    for (const auto& cp : cps)
                        for (std::size_t q = 0; q + cp.peak.size() <= w.size() && !covered; ++q) {
                            WordStep x{cp.a.rule, q + cp.a.pos}, y{cp.b.rule, q + cp.b.pos};
                            if (!std::equal(cp.peak.cells.begin(), cp.peak.cells.end(), w.cells.begin() + static_cast<long>(q)))
                                continue;
                            covered = (x == a && y == b) || (x == b && y == a);
                        }
                    CHECK_MESSAGE(covered, rules << " at " << to_string(w));
                }
        }
    }
}

TEST_CASE("word_confluence_report") {
    auto rep = word_confluence_report(testing::fixture("aa.poly"), true);
    REQUIRE(rep.pairs.size() == 1);
    CHECK(rep.pairs[0].joinable);
    CHECK(rep.basis.size() == 1);
    CHECK(rep.verdict == "fdt_certified");
    CHECK(word_confluence_report(testing::fixture("aa.poly"), false).verdict == "inconclusive");
    for (const auto& s : rep.basis) {
        Word a = s.source, b = s.source;
        for (const auto& st : s.lhs) a = apply_word_step(testing::fixture("aa.poly"), a, st);
        for (const auto& st : s.rhs) b = apply_word_step(testing::fixture("aa.poly"), b, st);
        CHECK(a == b);
    }

    auto none = word_confluence_report(words_poly(""), true);
    CHECK(none.pairs.empty());
    CHECK(none.basis.empty());
    CHECK(none.joinable);

    // Oracle: two reducts are joinable iff their descendant sets intersect.
    Polygraph p = words_poly("rule r : a b => a; rule s : b a => b;", "a b");
    auto r2 = word_confluence_report(p, true);
    REQUIRE(r2.pairs.size() == 2);
    for (const auto& pr : r2.pairs) {
        Word x = apply_word_step(p, pr.pair.peak, pr.pair.a);
        Word y = apply_word_step(p, pr.pair.peak, pr.pair.b);
        auto dx = descendants(p, x), dy = descendants(p, y);
        bool meet = false;
        for (const auto& v : dx) meet = meet || dy.count(v);
        CHECK(pr.joinable == meet);
    }
}
