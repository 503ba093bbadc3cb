#include <random>

#include "doctest.h"
#include "match.hpp"
#include "polyrw/diagram.hpp"
#include "polyrw/polygraph.hpp"
#include "support.hpp"

using namespace polyrw;

namespace {

Slice sl(std::vector<std::string> l, std::string g, std::vector<std::string> r) {
    return Slice{Word(std::move(l), "x"), std::move(g), Word(std::move(r), "x")};
}

Word ws(int n) { return Word(std::vector<std::string>(static_cast<std::size_t>(n), "w"), "x"); }

}  // namespace

TEST_CASE("canonicalize examples") {
    Polygraph p = testing::fixture("perm.poly");
    Diagram d{ws(4), {sl({"w", "w"}, "tau", {}), sl({}, "tau", {"w", "w"})}};
    Diagram c = canonicalize(p, d);
    REQUIRE(c.size() == 2);
    CHECK(c.slices[0] == sl({}, "tau", {"w", "w"}));
    CHECK(c.slices[1] == sl({"w", "w"}, "tau", {}));
    CHECK(canonicalize(p, c) == c);

    const Diagram& yb = p.cells3[1].src;
    CHECK(canonicalize(p, yb) == yb);
    CHECK(yb.slices[0] == sl({}, "tau", {"w"}));
    CHECK(yb.slices[1] == sl({"w"}, "tau", {}));
    CHECK(!equal_up_to_exchange(p, p.cells3[1].src, p.cells3[1].tgt));
}

TEST_CASE("compose examples") {
    Polygraph p = testing::fixture("perm.poly");
    Diagram tau = generator(p, "tau");
    Diagram a = compose_h(p, tau, identity(ws(1)));
    REQUIRE(a.size() == 1);
    CHECK(a.slices[0] == sl({}, "tau", {"w"}));
    Diagram tt = compose_h(p, tau, tau);
    CHECK(tt.slices == std::vector<Slice>{sl({}, "tau", {"w", "w"}), sl({"w", "w"}, "tau", {})});
    CHECK(compose_v(p, tau, tau) == p.cells3[0].src);
    CHECK(compose_v(p, identity(ws(2)), tau) == tau);
    CHECK_THROWS_AS(compose_v(p, tau, identity(ws(3))), TypeError);

    Diagram x = parse_diagram(p, "((tau * id(w w)) ; (id(w w) * tau))");
    Diagram y = parse_diagram(p, "((id(w w) * tau) ; (tau * id(w w)))");
    CHECK(equal_up_to_exchange(p, x, y));
}

TEST_CASE("compose_h agrees with both interleavings") {
    Polygraph p = testing::fixture("counterexample.poly");
    const auto& s = p.sig();
    std::mt19937 rng(7);
    auto frames = testing::all_frames(s, {0}, 0, 3, 4);
    auto frames2 = testing::all_frames(s, {}, 0, 2, 4);
    frames.insert(frames.end(), frames2.begin(), frames2.end());
    std::uniform_int_distribution<std::size_t> pick(0, frames.size() - 1);
    for (int k = 0; k < 20; ++k) {
        Diagram d1 = detail::diagram_of(s, frames[pick(rng)]);
        Diagram d2 = detail::diagram_of(s, frames[pick(rng)]);
        Diagram h = compose_h(p, d1, d2);
        CHECK(h.size() == d1.size() + d2.size());
        Diagram i1 = compose_v(p, whisker(p, {}, d1, source(p, d2)), whisker(p, target(p, d1), d2, {}));
        Diagram i2 = compose_v(p, whisker(p, source(p, d1), d2, {}), whisker(p, {}, d1, target(p, d2)));
        CHECK(equal_up_to_exchange(p, h, i1));
        CHECK(equal_up_to_exchange(p, h, i2));
    }
}

TEST_CASE("count_occurrences") {
    Polygraph ce = testing::fixture("counterexample.poly");
    const Diagram& sgamma = ce.cells3[2].src;
    CHECK(count_occurrences(sgamma, "n") == 1);
    CHECK(count_occurrences(identity(ws(2)), "n") == 0);
    Diagram d = compose_v(ce, sgamma, generator(ce, "o"));
    CHECK(count_occurrences(d, "o") == 1);
    CHECK(count_occurrences(d, "n") + count_occurrences(d, "u") == 2);
}

TEST_CASE("canonical form agrees with the BFS exchange-class oracle") {
    struct Case {
        const char* file;
        std::vector<int> widths;
    };
    for (const Case& c : {Case{"perm.poly", {1, 2, 3}}, Case{"monoid.poly", {0, 1, 2, 3}},
                          Case{"counterexample.poly", {0, 1, 2}}}) {
        Polygraph p = testing::fixture(c.file);
        const auto& s = p.sig();
        std::size_t classes = 0;
        for (int wdt : c.widths) {
            detail::Ids src(static_cast<std::size_t>(wdt), 0);
            auto frames = testing::all_frames(s, src, 0, 4, 4);
            std::map<std::vector<detail::Layer>, std::size_t> class_of;
            std::map<std::vector<detail::Layer>, std::size_t> canon_owner;
            bool ok = true;
            for (const auto& f : frames) {
                if (class_of.count(f.layers)) continue;
                auto cls = testing::exchange_class(s, f);
                std::size_t id = classes++;
                auto canon = detail::canonical(s, f).layers;
                for (const auto& m : cls) {
                    class_of[m] = id;
                    if (detail::canonical(s, testing::Frame{src, 0, m}).layers != canon) {
                        if (ok) MESSAGE("class split:\n" << detail::dump(s, f) << "vs\n" << detail::dump(s, testing::Frame{src, 0, m}));
                        ok = false;
                    }
                }
                if (!canon_owner.emplace(canon, id).second) {
                    if (ok) MESSAGE("classes merged:\n" << detail::dump(s, f));
                    ok = false;
                }
                if (!cls.count(canon)) ok = false;
            }
            CHECK_MESSAGE(ok, std::string(c.file) << " width " << wdt);
        }
        CHECK(classes > 0);
    }
}

TEST_CASE("enumerate_matches") {
    Polygraph mon = testing::fixture("monoid.poly");
    Diagram d = parse_diagram(mon, "((m * id(w w)) ; (m * id(w)) ; m)");
    const Diagram& salpha = mon.cells3[0].src;
    auto ms = enumerate_matches(mon, d, salpha);
    CHECK(ms.size() == 2);
    for (const auto& c : ms) CHECK(equal_up_to_exchange(mon, plug(mon, c, salpha), d));

    auto self = enumerate_matches(mon, salpha, salpha);
    REQUIRE(self.size() == 1);
    CHECK(self[0].top.size() == 0);
    CHECK(self[0].bottom.size() == 0);
    CHECK(self[0].left.empty());
    CHECK(self[0].right.empty());

    CHECK(enumerate_matches(mon, identity(ws(2)), generator(mon, "m")).empty());
    CHECK_THROWS_AS(enumerate_matches(mon, d, identity(ws(1))), Error);
}

TEST_CASE("matches agree with brute-force decomposition") {
    // Oracle: every context whose plug gives d, found by trying all top/bottom
    // frames and whisker splits at small sizes.
    for (const char* file : {"perm.poly", "monoid.poly", "counterexample.poly"}) {
        Polygraph p = testing::fixture(file);
        const auto& s = p.sig();
        std::vector<detail::Frame> patterns;
        for (const auto& c : p.cells3) patterns.push_back(detail::frame_of(s, c.src));
        for (int wdt : {1, 2, 3}) {
            detail::Ids src(static_cast<std::size_t>(wdt), 0);
            auto frames = testing::all_frames(s, src, 0, 4, 4);
            for (const auto& pat : patterns) {
                for (const auto& f : frames) {
                    if (f.layers.size() < pat.layers.size()) continue;
                    detail::Frame cf = detail::canonical(s, f);
                    auto found = detail::find_matches(s, cf, pat);
                    // Brute force: split off the top k layers of some arrangement in the class.
                    std::set<std::tuple<std::vector<detail::Layer>, detail::Ids, detail::Ids, std::vector<detail::Layer>>> oracle;
                    for (const auto& arr : testing::exchange_class(s, cf)) {
                        for (std::size_t k = 0; k + pat.layers.size() <= arr.size(); ++k) {
                            detail::Frame top{src, 0, std::vector<detail::Layer>(arr.begin(), arr.begin() + static_cast<long>(k))};
                            detail::Ids cut = detail::target_of(s, top);
                            detail::Frame blk{cut, 0, std::vector<detail::Layer>(arr.begin() + static_cast<long>(k),
                                                                                 arr.begin() + static_cast<long>(k + pat.layers.size()))};
                            for (std::size_t l = 0; l + pat.src.size() <= cut.size(); ++l) {
                                detail::Ids left(cut.begin(), cut.begin() + static_cast<long>(l));
                                detail::Ids right(cut.begin() + static_cast<long>(l + pat.src.size()), cut.end());
                                if (detail::whisker(pat, left, 0, right).layers != blk.layers ||
                                    detail::whisker(pat, left, 0, right).src != cut)
                                    continue;
                                detail::Frame bot{detail::target_of(s, blk), 0,
                                                  std::vector<detail::Layer>(arr.begin() + static_cast<long>(k + pat.layers.size()), arr.end())};
                                oracle.insert({detail::canonical(s, top).layers, left, right, detail::canonical(s, bot).layers});
                            }
                        }
                    }
                    // Contexts equal modulo exchange on contexts are merged in `found`;
                    // the oracle keeps all of them, so compare through plugging.
                    std::set<std::vector<int>> found_sets, oracle_sets;
                    for (const auto& m : found) found_sets.insert(m.redex);
                    for (const auto& [t, l, r, b] : oracle) {
                        detail::FContext c{detail::Frame{src, 0, t}, l, r, detail::Frame{detail::Ids{}, 0, b}};
                        c.bottom.src = detail::target_of(s, *detail::vcat(s, c.top, detail::whisker(pat, l, 0, r)));
                        std::vector<int> pos;
                        detail::plug(s, c, pat, &pos);
                        oracle_sets.insert(pos);
                    }
                    CHECK_MESSAGE(found_sets == oracle_sets, std::string(file) << "\n" << detail::dump(s, cf));
                }
            }
        }
    }
}
