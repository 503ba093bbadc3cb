#include <random>

#include "doctest.h"
#include "json.hpp"
#include "polyrw/diagram.hpp"
#include "polyrw/interpret.hpp"
#include "polyrw/polygraph.hpp"
#include "support.hpp"

using namespace polyrw;

namespace {

Interpretation interp(const Polygraph& p, const std::string& name) {
    return load_interpretation(testing::fixture_path(name), p);
}

const Cell3& rule(const Polygraph& p, const std::string& name) {
    for (const auto& c : p.cells3)
        if (c.name == name) return c;
    throw Error("no rule " + name);
}

const Cell2& gen(const Polygraph& p, const std::string& name) {
    for (const auto& c : p.cells2)
        if (c.name == name) return c;
    throw Error("no 2-cell " + name);
}

std::size_t arity(const ModuleData& m, const std::vector<std::string>& cells, std::size_t from, std::size_t n) {
    std::size_t a = 0;
    for (std::size_t i = from; i < from + n; ++i) a += m.arity(cells[i]);
    return a;
}

using Vals = std::vector<long long>;

Vals apply_map(const std::vector<Affine>* map, const Vals& v, std::size_t at, std::size_t n) {
    Vals in(v.begin() + static_cast<long>(at), v.begin() + static_cast<long>(at + n));
    Vals out(v.begin(), v.begin() + static_cast<long>(at));
    if (map)
        for (const auto& a : *map) out.push_back(a.eval(in));
    out.insert(out.end(), v.begin() + static_cast<long>(at + n), v.end());
    return out;
}

const std::vector<Affine>* find_map(const ModuleData& m, const std::string& g) {
    auto it = m.maps.find(g);
    return it == m.maps.end() ? nullptr : &it->second;
}

// Slice-by-slice evaluator on the whiskered form, independent of the frame code.
struct Oracle {
    const Polygraph& p;
    const Interpretation& I;

    std::vector<Vals> xs(const Diagram& d, const Vals& x) const {
        std::vector<Vals> out{x};
        for (const auto& sl : d.slices) {
            const auto& g = gen(p, sl.gen);
            std::size_t la = arity(I.X, sl.left.cells, 0, sl.left.size());
            std::size_t ga = arity(I.X, g.src.cells, 0, g.src.size());
            out.push_back(apply_map(find_map(I.X, sl.gen), out.back(), la, ga));
        }
        return out;
    }

    std::vector<Vals> ys(const Diagram& d, const Vals& y) const {
        std::vector<Vals> out(d.size() + 1);
        out.back() = y;
        for (std::size_t k = d.size(); k-- > 0;) {
            const auto& sl = d.slices[k];
            const auto& g = gen(p, sl.gen);
            std::size_t la = arity(I.Y, sl.left.cells, 0, sl.left.size());
            std::size_t ga = arity(I.Y, g.tgt.cells, 0, g.tgt.size());
            out[k] = apply_map(find_map(I.Y, sl.gen), out[k + 1], la, ga);
        }
        return out;
    }

    long long d(const Diagram& dg, const Vals& x, const Vals& y) const {
        auto X = xs(dg, x);
        auto Y = ys(dg, y);
        long long total = 0;
        for (std::size_t k = 0; k < dg.size(); ++k) {
            const auto& sl = dg.slices[k];
            auto it = I.d.find(sl.gen);
            if (it == I.d.end()) continue;
            const auto& g = gen(p, sl.gen);
            std::size_t lx = arity(I.X, sl.left.cells, 0, sl.left.size());
            std::size_t ly = arity(I.Y, sl.left.cells, 0, sl.left.size());
            std::size_t gx = arity(I.X, g.src.cells, 0, g.src.size());
            std::size_t gy = arity(I.Y, g.tgt.cells, 0, g.tgt.size());
            Vals args(X[k].begin() + static_cast<long>(lx), X[k].begin() + static_cast<long>(lx + gx));
            args.insert(args.end(), Y[k + 1].begin() + static_cast<long>(ly),
                        Y[k + 1].begin() + static_cast<long>(ly + gy));
            total += it->second.scalar.eval(args);
        }
        return total;
    }
};

Vals random_inputs(const Vals& mins, std::mt19937& rng) {
    Vals v = mins;
    for (auto& x : v) x += std::uniform_int_distribution<long long>(0, 3)(rng);
    return v;
}

Diagram random_diagram(const Polygraph& p, std::mt19937& rng, int size, std::size_t width) {
    const auto& s = p.sig();
    auto src = testing::random_word(s, 0, 3, rng);
    auto f = testing::random_frame(s, src, 0, size, width, rng);
    return detail::diagram_of(s, f);
}

struct Case {
    const char* poly;
    std::vector<const char*> interps;
};

const std::vector<Case> cases = {
    {"monoid.poly", {"monoid_size.interp"}},
    {"perm.poly", {"perm_cross.interp"}},
    {"counterexample.poly", {"ce_count.interp", "ce_weight.interp"}},
};

}  // namespace

TEST_CASE("parse_interpretation") {
    Polygraph perm = testing::fixture("perm.poly");
    Interpretation I = interp(perm, "perm_cross.interp");
    CHECK(I.name == "perm_cross");
    CHECK(I.X.arity("w") == 1);
    REQUIRE(I.X.maps.at("tau").size() == 2);
    CHECK(I.X.maps.at("tau")[0].eval({4, 7}) == 8);
    CHECK(I.X.maps.at("tau")[1].eval({4, 7}) == 4);
    CHECK(I.Y.trivial);

    Polygraph mon = testing::fixture("monoid.poly");
    Interpretation M = interp(mon, "monoid_size.interp");
    CHECK(M.X.mins.at("w") == std::vector<long long>{1});

    const std::string head = "interpretation t { group Z; X { w : nat(min = 0); ";
    CHECK_THROWS_AS(parse_interpretation(head + "tau(i, j, k) = (i, j); } Y trivial; d { } }", perm), TypeError);
    CHECK_THROWS_AS(parse_interpretation(head + "tau(i, j) = (i); } Y trivial; d { } }", perm), TypeError);
    CHECK_THROWS_AS(parse_interpretation(head + "tau(i, j) = (j - i, i); } Y trivial; d { } }", perm), TypeError);
    CHECK_THROWS_AS(parse_interpretation(head + "} Y trivial; d { } }", perm), TypeError);
    CHECK_THROWS_AS(parse_interpretation(head + "tau(i, j) = (j, i); } Y trivial; d { tau(i | ) = i; } }", perm),
                    TypeError);
    CHECK_THROWS_AS(parse_interpretation(head + "tau(i, j) = (j, q); } Y trivial; d { } }", perm), ParseError);
    CHECK_THROWS_AS(parse_interpretation("interpretation t { group Q; X trivial; Y trivial; d { } }", perm),
                    ParseError);
    CHECK_THROWS_AS(parse_interpretation(
                        "interpretation t { group Z; X trivial; Y trivial; d { tau(|) = basis(1); } }", perm),
                    TypeError);
    CHECK_NOTHROW(parse_interpretation(
        "interpretation t { group FreeAbelian; X trivial; Y trivial; d { tau(|) = 1 + basis(2) + -basis(3); } }",
        perm));
}

TEST_CASE("eval_X") {
    Polygraph perm = testing::fixture("perm.poly");
    Interpretation I = interp(perm, "perm_cross.interp");
    const Diagram& yb = rule(perm, "yb").src;
    CHECK(eval_X(I, perm, yb, {1, 0, 0}) == Vals{2, 1, 1});
    CHECK(eval_X(I, perm, rule(perm, "yb").tgt, {1, 0, 0}) == Vals{2, 1, 1});
    CHECK(eval_X(I, perm, identity(Word({"w", "w"}, "x")), {5, 6}) == Vals{5, 6});
    CHECK_THROWS_AS(eval_X(I, perm, yb, {1, 0}), TypeError);

    Polygraph mon = testing::fixture("monoid.poly");
    Interpretation M = interp(mon, "monoid_size.interp");
    CHECK_THROWS_AS(eval_X(M, mon, rule(mon, "alpha").src, {0, 1, 1}), TypeError);
    CHECK(eval_X(M, mon, rule(mon, "alpha").src, {1, 2, 3}) == Vals{6});
}

TEST_CASE("eval_d") {
    Polygraph mon = testing::fixture("monoid.poly");
    Interpretation M = interp(mon, "monoid_size.interp");
    CHECK(eval_d(M, mon, rule(mon, "alpha").src, {1, 1, 1}, {}).z == 3);
    for (long long i = 1; i < 4; ++i)
        for (long long j = 1; j < 4; ++j)
            for (long long k = 1; k < 4; ++k) CHECK(eval_d(M, mon, rule(mon, "alpha").src, {i, j, k}, {}).z == 2 * i + j);
    CHECK(eval_d(M, mon, identity(Word({"w"}, "x")), {4}, {}).z == 0);

    Polygraph perm = testing::fixture("perm.poly");
    Interpretation P = interp(perm, "perm_cross.interp");
    CHECK(eval_d(P, perm, rule(perm, "yb").src, {1, 0, 0}, {}).z == 3);

    Polygraph ce = testing::fixture("counterexample.poly");
    Interpretation W = interp(ce, "ce_weight.interp");
    for (long long i = 0; i < 4; ++i)
        for (long long j = 0; j < 4; ++j) {
            CHECK(eval_d(W, ce, rule(ce, "alpha").src, {}, {i, j}).z -
                      eval_d(W, ce, rule(ce, "alpha").tgt, {}, {i, j}).z ==
                  1);
            CHECK(eval_d(W, ce, rule(ce, "beta").src, {i, j}, {}).z - eval_d(W, ce, rule(ce, "beta").tgt, {i, j}, {}).z ==
                  1);
        }

    Interpretation F = parse_interpretation(
        "interpretation f { group FreeAbelian; X { w : nat(min = 0); tau(i, j) = (j + 1, i); } Y trivial;"
        " d { tau(i, j |) = basis(i) + -basis(j); } }",
        perm);
    GroupElem g = eval_d(F, perm, rule(perm, "inv").src, {0, 2}, {});
    // tau(0,2) then tau(3,0): e0 - e2 + e3 - e0.
    CHECK(g.z == 0);
    CHECK(g.basis == std::map<long long, long long>{{2, -1}, {3, 1}});
}

TEST_CASE("evaluation agrees with the slice oracle on random diagrams") {
    std::mt19937 rng(7);
    for (const auto& c : cases) {
        Polygraph p = testing::fixture(c.poly);
        for (const char* name : c.interps) {
            Interpretation I = interp(p, name);
            Oracle o{p, I};
            for (int n = 0; n < 50; ++n) {
                Diagram d = random_diagram(p, rng, 5, 5);
                Word tgt = target(p, d);
                Vals x = random_inputs(x_mins(I, d.source), rng);
                Vals y = random_inputs(y_mins(I, tgt), rng);
                CHECK(eval_X(I, p, d, x) == o.xs(d, x).back());
                CHECK(eval_Y(I, p, d, y) == o.ys(d, y).front());
                CHECK(eval_d(I, p, d, x, y).z == o.d(d, x, y));
            }
        }
    }
}

TEST_CASE("derivation law on random composable pairs") {
    std::mt19937 rng(11);
    int checked = 0;
    for (const auto& c : cases) {
        Polygraph p = testing::fixture(c.poly);
        const auto& s = p.sig();
        for (const char* name : c.interps) {
            Interpretation I = interp(p, name);
            for (int n = 0; n < 200; ++n) {
                Diagram d1 = random_diagram(p, rng, 3, 5);
                Word mid = target(p, d1);
                auto f2 = testing::random_frame(s, detail::ids_of(s, mid), 0, 3, 5, rng);
                Diagram d2 = detail::diagram_of(s, f2);
                Diagram d12 = compose_v(p, d1, d2);
                Vals x = random_inputs(x_mins(I, d1.source), rng);
                Vals y = random_inputs(y_mins(I, target(p, d2)), rng);
                GroupElem lhs = eval_d(I, p, d12, x, y);
                GroupElem rhs = eval_d(I, p, d1, x, eval_Y(I, p, d2, y));
                rhs += eval_d(I, p, d2, eval_X(I, p, d1, x), y);
                CHECK(lhs == rhs);
                ++checked;

                // Horizontal composites split over the two column blocks.
                Diagram h = compose_h(p, d1, d2);
                Vals x2 = random_inputs(x_mins(I, d2.source), rng);
                Vals y1 = random_inputs(y_mins(I, mid), rng);
                Vals hx = x, hy = y1;
                hx.insert(hx.end(), x2.begin(), x2.end());
                hy.insert(hy.end(), y.begin(), y.end());
                GroupElem split = eval_d(I, p, d1, x, y1);
                split += eval_d(I, p, d2, x2, y);
                CHECK(eval_d(I, p, h, hx, hy) == split);
            }
        }
    }
    CHECK(checked >= 200);
}

TEST_CASE("check_certificate") {
    Polygraph mon = testing::fixture("monoid.poly");
    auto r = check_certificate(mon, load_certificate(testing::fixture_path("monoid.cert"), mon));
    CHECK(r.terminating);
    for (const auto& v : r.rules) CHECK(v.levels == std::vector<RuleLevel>{RuleLevel::strict});

    auto z = check_certificate(mon, load_certificate(testing::fixture_path("monoid_zero.cert"), mon));
    CHECK_FALSE(z.terminating);
    CHECK(z.rules.at(0).rule == "alpha");
    CHECK_FALSE(z.rules.at(0).decreasing);
    CHECK(z.rules.at(0).levels.at(0) != RuleLevel::strict);

    Polygraph perm = testing::fixture("perm.poly");
    CHECK(check_certificate(perm, load_certificate(testing::fixture_path("perm.cert"), perm)).terminating);

    // The weighted level for the counterexample is not monotone: X(s alpha) = (1, 0)
    // and X(t alpha) = (0, 1) are incomparable, likewise Y on beta. The
    // certificate is rejected; see the context test below.
    Polygraph ce = testing::fixture("counterexample.poly");
    auto cr = check_certificate(ce, load_certificate(testing::fixture_path("counterexample.cert"), ce));
    CHECK_FALSE(cr.terminating);
    std::map<std::string, RuleVerdict> lv;
    for (const auto& v : cr.rules) lv[v.rule] = v;
    CHECK(lv["alpha"].levels[0] == RuleLevel::equal);
    CHECK(lv["beta"].levels[0] == RuleLevel::equal);
    CHECK(lv["gamma"].levels[0] == RuleLevel::strict);
    CHECK(lv["delta"].levels[0] == RuleLevel::strict);
    CHECK(lv["gamma"].decreasing);
    CHECK(lv["delta"].decreasing);
    CHECK(lv["alpha"].levels[1] == RuleLevel::fails);
    CHECK(lv["alpha"].notes[1].rfind("X(s) >= X(t)", 0) == 0);
    CHECK(lv["beta"].levels[1] == RuleLevel::fails);
    CHECK(lv["beta"].notes[1].rfind("Y(s) >= Y(t)", 0) == 0);
    auto j = nlohmann::json::parse(certificate_json(cr));
    CHECK(j["verdict"] == "rejected");
    CHECK(j["rules"].size() == 4);

    Polygraph aa = testing::fixture("aa.poly");
    CHECK(check_certificate(aa, load_certificate(testing::fixture_path("aa.cert"), aa)).terminating);

    Interpretation fa = parse_interpretation(
        "interpretation f { group FreeAbelian; X trivial; Y trivial; d { tau(|) = basis(0); } }", perm);
    auto fr = check_certificate(perm, {fa});
    CHECK_FALSE(fr.terminating);
    CHECK_FALSE(fr.rules[0].notes[0].empty());
}

TEST_CASE("the weighted counterexample level does not decrease in context") {
    // An alpha step whose left strand then feeds the left input of u: the
    // gain at the redex is cancelled below it.
    Polygraph ce = testing::fixture("counterexample.poly");
    Interpretation W = interp(ce, "ce_weight.interp");
    Diagram s = parse_diagram(ce, "((n * id(w)) ; (o * id(w w)) ; (id(w) * u))");
    Diagram t = parse_diagram(ce, "((n * id(w)) ; (id(w) * o * id(w)) ; (id(w) * u))");
    bool via_alpha = false;
    for (const auto& st : find_redexes(ce, s))
        if (st.rule == "alpha" && equal_up_to_exchange(ce, apply_step(ce, st), t)) via_alpha = true;
    CHECK(via_alpha);
    for (long long x = 0; x < 4; ++x)
        for (long long y = 0; y < 4; ++y) CHECK(eval_d(W, ce, s, {x}, {y}) == eval_d(W, ce, t, {x}, {y}));
}

TEST_CASE("affine dominance agrees with input enumeration") {
    for (const auto& c : cases) {
        Polygraph p = testing::fixture(c.poly);
        for (const char* name : c.interps) {
            Interpretation I = interp(p, name);
            auto rep = check_certificate(p, {I});
            for (std::size_t r = 0; r < p.cells3.size(); ++r) {
                const Cell3& a = p.cells3[r];
                Word v = target(p, a.src);
                Vals xm = x_mins(I, a.src.source), ym = y_mins(I, v);
                std::size_t n = xm.size() + ym.size();
                bool all_pos = true, all_zero = true, xy = true;
                std::vector<long long> idx(n, 0);
                while (true) {
                    Vals x = xm, y = ym;
                    for (std::size_t i = 0; i < xm.size(); ++i) x[i] += idx[i];
                    for (std::size_t i = 0; i < ym.size(); ++i) y[i] += idx[xm.size() + i];
                    long long diff = eval_d(I, p, a.src, x, y).z - eval_d(I, p, a.tgt, x, y).z;
                    all_pos = all_pos && diff >= 1;
                    all_zero = all_zero && diff == 0;
                    auto xs = eval_X(I, p, a.src, x), xt = eval_X(I, p, a.tgt, x);
                    auto ys = eval_Y(I, p, a.src, y), yt = eval_Y(I, p, a.tgt, y);
                    for (std::size_t i = 0; i < xs.size(); ++i) xy = xy && xs[i] >= xt[i];
                    for (std::size_t i = 0; i < ys.size(); ++i) xy = xy && ys[i] >= yt[i];
                    std::size_t k = 0;
                    while (k < n && ++idx[k] > 3) idx[k++] = 0;
                    if (k == n) break;
                }
                RuleLevel got = rep.rules[r].levels[0];
                if (got == RuleLevel::strict) CHECK((all_pos && xy));
                if (got == RuleLevel::equal) CHECK((all_zero && xy));
                if (got == RuleLevel::fails) CHECK((!xy || !(all_pos || all_zero)));
            }
        }
    }
}

TEST_CASE("accepted certificates decrease along random reductions") {
    std::mt19937 rng(3);
    for (const auto& c : cases) {
        Polygraph p = testing::fixture(c.poly);
        if (std::string(c.poly) == "counterexample.poly") continue;  // certificate rejected
        std::vector<Interpretation> levels;
        for (const char* name : c.interps) levels.push_back(interp(p, name));
        REQUIRE(check_certificate(p, levels).terminating);
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
            CHECK(va < vb);
            d = after;
            ++steps;
        }
    }
}

TEST_CASE("derivation_obstruction on synthetic traces") {
    auto tr = [](std::vector<std::pair<std::string, Direction>> steps) {
        Trace t;
        for (auto& [r, dir] : steps) {
            RewriteStep s;
            s.rule = r;
            s.dir = dir;
            t.steps.push_back(s);
        }
        return t;
    };
    auto F = Direction::forward, B = Direction::inverse;
    std::map<std::string, long long> dv{{"a", 1}, {"b", -1}};
    CHECK(trace_value(tr({{"a", F}, {"b", B}, {"c", F}}), dv) == 2);
    Sphere cand{"c", tr({{"a", F}, {"b", F}}), tr({})};
    Sphere target{"t", tr({{"a", F}}), tr({{"b", F}})};
    auto r = derivation_obstruction({cand}, target, dv);
    CHECK(r.obstructed);
    CHECK(r.target_lhs == 1);
    CHECK(r.target_rhs == -1);
    Sphere bad{"c", tr({{"a", F}}), tr({})};
    CHECK_FALSE(derivation_obstruction({bad}, target, dv).obstructed);
}
