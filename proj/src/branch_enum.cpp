// Overlap search, wire tracing and classification of branchings on frames.
#include <algorithm>
#include <map>
#include <set>

#include "branch_impl.hpp"

namespace polyrw::detail {

Wires trace_wires(const Sig& s, const Frame& f) {
    Wires w;
    Ids cut;
    for (std::size_t i = 0; i < f.src.size(); ++i) {
        cut.push_back(static_cast<int>(i));
        w.producer.push_back(-1);
        w.consumer.push_back(-1);
        w.type.push_back(f.src[i]);
    }
    w.cuts.push_back(cut);
    for (std::size_t k = 0; k < f.layers.size(); ++k) {
        const Layer& l = f.layers[k];
        const Gen& g = s.gens[l.gen];
        auto first = cut.begin() + l.off;
        for (auto it = first; it != first + static_cast<long>(g.src.size()); ++it) w.consumer[*it] = static_cast<int>(k);
        Ids made;
        for (int t : g.tgt) {
            made.push_back(static_cast<int>(w.type.size()));
            w.producer.push_back(static_cast<int>(k));
            w.consumer.push_back(-1);
            w.type.push_back(t);
        }
        first = cut.erase(first, first + static_cast<long>(g.src.size()));
        cut.insert(first, made.begin(), made.end());
        w.cuts.push_back(cut);
    }
    return w;
}

std::vector<std::vector<int>> successors(const Wires& w, std::size_t layers) {
    std::vector<std::vector<int>> succ(layers);
    for (std::size_t i = 0; i < w.producer.size(); ++i) {
        if (w.producer[i] < 0 || w.consumer[i] < 0) continue;
        auto& v = succ[w.producer[i]];
        if (std::find(v.begin(), v.end(), w.consumer[i]) == v.end()) v.push_back(w.consumer[i]);
    }
    return succ;
}

std::optional<Frame> reorder(const Sig& s, const Frame& f, const std::vector<int>& rank, std::vector<int>* perm) {
    Frame out = f;
    std::vector<int> p(f.layers.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < out.layers.size(); ++i) {
            if (rank[p[i]] <= rank[p[i + 1]]) continue;
            auto ex = exchanges(s, out.layers[i], out.layers[i + 1]);
            if (ex.empty()) return std::nullopt;
            out.layers[i] = ex.front().first;
            out.layers[i + 1] = ex.front().second;
            std::swap(p[i], p[i + 1]);
            changed = true;
        }
    }
    if (perm) *perm = std::move(p);
    return out;
}

std::pair<std::size_t, std::size_t> side_whiskers(const Sig& s, const Frame& f) {
    auto cuts = cuts_of(s, f);
    std::size_t left = f.src.size(), right = f.src.size();
    for (std::size_t k = 0; k < f.layers.size(); ++k) {
        const std::size_t off = static_cast<std::size_t>(f.layers[k].off);
        const std::size_t end = off + s.gens[f.layers[k].gen].src.size();
        left = std::min(left, off);
        right = std::min(right, cuts[k].size() - end);
    }
    if (f.layers.empty()) right = 0;
    return {left, right};
}

Frame strip(const Sig& s, const Frame& f, std::size_t left, std::size_t right) {
    Frame out;
    out.src.assign(f.src.begin() + static_cast<long>(left), f.src.end() - static_cast<long>(right));
    out.pt = point_at(s, f.src, f.pt, left);
    for (const auto& l : f.layers) out.layers.push_back(Layer{l.off - static_cast<int>(left), l.gen});
    return out;
}

Frame slice_frame(const Sig& s, const Frame& f, std::size_t from, std::size_t to) {
    auto cuts = cuts_of(s, f);
    Frame out;
    out.src = cuts[from];
    out.pt = f.pt;
    out.layers.assign(f.layers.begin() + static_cast<long>(from), f.layers.begin() + static_cast<long>(to));
    return out;
}

std::vector<Frame> arrangements(const Sig& s, const Frame& f) {
    std::set<std::vector<Layer>> seen{f.layers};
    std::vector<Frame> out{f};
    for (std::size_t qi = 0; qi < out.size(); ++qi) {
        for (std::size_t i = 0; i + 1 < out[qi].layers.size(); ++i) {
            for (const auto& [up, down] : exchanges(s, out[qi].layers[i], out[qi].layers[i + 1])) {
                Frame n = out[qi];
                n.layers[i] = up;
                n.layers[i + 1] = down;
                if (seen.insert(n.layers).second) out.push_back(std::move(n));
            }
        }
    }
    return out;
}

namespace {

bool composable(const Sig& s, const Ids& w, int pt) {
    for (int x : w) {
        if (s.c1src[x] != pt) return false;
        pt = s.c1tgt[x];
    }
    return true;
}

// Adds generator g above f at `off` (relative to f.src), widening f with the
// wires of g's target that hang over either side.
std::optional<Frame> prepend(const Sig& s, const Frame& f, int g, int off) {
    const Gen& G = s.gens[g];
    const int n = static_cast<int>(f.src.size()), t = static_cast<int>(G.tgt.size());
    const int spill_l = std::max(0, -off), spill_r = std::max(0, off + t - n);
    if (spill_l + spill_r > t) return std::nullopt;
    Ids left(G.tgt.begin(), G.tgt.begin() + spill_l), right(G.tgt.end() - spill_r, G.tgt.end());
    int lpt = f.pt;
    if (!left.empty()) lpt = s.c1src[left.front()];
    Frame w = whisker(f, left, lpt, right);
    const int o = off + spill_l;
    if (!std::equal(G.tgt.begin(), G.tgt.end(), w.src.begin() + o)) return std::nullopt;
    if (G.tgt.empty() && point_at(s, w.src, w.pt, static_cast<std::size_t>(o)) != G.right_point) return std::nullopt;
    Frame out;
    out.pt = w.pt;
    out.src.assign(w.src.begin(), w.src.begin() + o);
    out.src.insert(out.src.end(), G.src.begin(), G.src.end());
    out.src.insert(out.src.end(), w.src.begin() + o + t, w.src.end());
    out.layers.push_back(Layer{o, g});
    out.layers.insert(out.layers.end(), w.layers.begin(), w.layers.end());
    if (!composable(s, out.src, out.pt) || !well_formed(s, out)) return std::nullopt;
    return out;
}

// Adds generator g below f at `off` (relative to f's target), widening f with
// the wires of g's source that hang over either side.
std::optional<Frame> append(const Sig& s, const Frame& f, int g, int off) {
    const Gen& G = s.gens[g];
    Ids tgt = target_of(s, f);
    const int n = static_cast<int>(tgt.size()), k = static_cast<int>(G.src.size());
    const int spill_l = std::max(0, -off), spill_r = std::max(0, off + k - n);
    if (spill_l + spill_r > k) return std::nullopt;
    Ids left(G.src.begin(), G.src.begin() + spill_l), right(G.src.end() - spill_r, G.src.end());
    int lpt = f.pt;
    if (!left.empty()) lpt = s.c1src[left.front()];
    Frame w = whisker(f, left, lpt, right);
    w.layers.push_back(Layer{off + spill_l, g});
    if (!composable(s, w.src, w.pt) || !well_formed(s, w)) return std::nullopt;
    return w;
}

std::vector<int> rule_gens(const Frame& f) {
    std::set<int> g;
    for (const auto& l : f.layers) g.insert(l.gen);
    return {g.begin(), g.end()};
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> sorted_inter(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

std::vector<Overlap> overlaps(const Sig& s, const std::vector<FRule>& rules, int a, int b) {
    const Frame& pa = rules[a].src;
    const Frame& pb = rules[b].src;
    if (pa.layers.empty() || pb.layers.empty()) return {};
    const std::vector<int> gens = rule_gens(pb);
    std::unordered_map<Frame, int, FrameHash> seen;
    std::vector<Frame> all{canonical(s, pa)}, frontier = all;
    seen.emplace(all.front(), 0);
    for (std::size_t depth = 1; depth < pb.layers.size(); ++depth) {
        std::vector<Frame> next;
        auto keep = [&](std::optional<Frame> f) {
            if (!f) return;
            Frame c = canonical(s, *f);
            if (seen.emplace(c, 0).second) next.push_back(std::move(c));
        };
        for (const Frame& f : frontier) {
            const int n_src = static_cast<int>(f.src.size());
            const int n_tgt = static_cast<int>(target_of(s, f).size());
            for (int g : gens) {
                const int t = static_cast<int>(s.gens[g].tgt.size()), k = static_cast<int>(s.gens[g].src.size());
                for (int off = -std::max(0, t - 1); off <= n_src; ++off) keep(prepend(s, f, g, off));
                for (int off = -std::max(0, k - 1); off <= n_tgt; ++off) keep(append(s, f, g, off));
            }
        }
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
    }

    std::vector<Overlap> out;
    std::set<std::tuple<std::vector<Layer>, Ids, std::vector<int>, std::vector<int>>> keys;
    for (const Frame& S : all) {
        const auto [wl, wr] = side_whiskers(s, S);
        if (wl != 0 || wr != 0) continue;
        auto ma = find_matches(s, S, pa);
        auto mb = a == b ? ma : find_matches(s, S, pb);
        for (const auto& x : ma) {
            for (const auto& y : mb) {
                if (a == b && x.redex == y.redex) continue;
                if (sorted_inter(x.redex, y.redex).empty()) continue;
                if (sorted_union(x.redex, y.redex).size() != S.layers.size()) continue;
                auto k1 = x.redex, k2 = y.redex;
                if (a == b && k2 < k1) std::swap(k1, k2);
                if (!keys.emplace(S.layers, S.src, k1, k2).second) continue;
                out.push_back(Overlap{S, a, b, k1, k2});
            }
        }
    }
    return out;
}


namespace {

enum Role { K = 0, F = 1, G = 2, H = 3 };

bool edge(const Wires& w, const std::vector<int>& role, int from, int to) {
    for (std::size_t i = 0; i < w.producer.size(); ++i)
        if (w.producer[i] >= 0 && w.consumer[i] >= 0 && role[w.producer[i]] == from && role[w.consumer[i]] == to)
            return true;
    return false;
}

// Layers reachable from role `from` along wires without entering H.
bool reaches(const std::vector<std::vector<int>>& succ, const std::vector<int>& role, int from, int to) {
    std::vector<int> stack;
    std::vector<char> seen(role.size(), 0);
    for (std::size_t i = 0; i < role.size(); ++i)
        if (role[i] == from) stack.push_back(static_cast<int>(i));
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : succ[x]) {
            if (role[y] == H || seen[y]) continue;
            if (role[y] == to) return true;
            seen[y] = 1;
            stack.push_back(y);
        }
    }
    return false;
}

std::vector<int> permute(const std::vector<int>& role, const std::vector<int>& perm) {
    std::vector<int> out(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out[i] = role[perm[i]];
    return out;
}

}  // namespace

ClassInfo classify_frame(const Sig& s, const Frame& S, const std::vector<int>& ra, const std::vector<int>& rb) {
    std::vector<int> role(S.layers.size(), K);
    for (int i : ra) role[i] |= F;
    for (int i : rb) role[i] |= G;
    auto count = [&](int r) { return std::count(role.begin(), role.end(), r); };
    ClassInfo out;
    if (count(H) == 0) throw Error("occurrences share no slice: the branching is trivial");
    if (count(F) == 0 || count(G) == 0) {
        out.cls.tag = BranchTag::inclusion;
        return out;
    }
    const Wires w = trace_wires(s, S);
    const auto succ = successors(w, S.layers.size());
    const bool fg = reaches(succ, role, F, G), gf = reaches(succ, role, G, F);

    if (fg || gf) {
        out.a_upper = fg;
        out.cls.tag = BranchTag::multi_indexed;
        if (fg && gf) return out;
        const int up = fg ? F : G, low = fg ? G : F;
        std::vector<int> rank(role.size());
        for (std::size_t i = 0; i < role.size(); ++i)
            rank[i] = role[i] == up ? 0 : role[i] == H ? 1 : role[i] == K ? 2 : 3;
        std::vector<int> perm;
        auto T = reorder(s, S, rank, &perm);
        if (!T) return out;
        const auto r = permute(role, perm);
        const Wires tw = trace_wires(s, *T);
        const std::size_t c = static_cast<std::size_t>(count(up)), nh = static_cast<std::size_t>(count(H));
        const auto [lh, rh] = side_whiskers(s, slice_frame(s, *T, c, c + nh));
        const Ids& cut = tw.cuts[c];
        bool left = false, right = false, middle = false;
        HoleSpec hole;
        for (std::size_t i = 0; i < cut.size(); ++i) {
            const int id = cut[i];
            if (tw.producer[id] < 0 || r[tw.producer[id]] != up) continue;
            if (tw.consumer[id] < 0 || (r[tw.consumer[id]] != K && r[tw.consumer[id]] != low)) continue;
            (i < lh ? left : i >= cut.size() - rh ? right : middle) = true;
            hole.anchor_left.cells.push_back(s.c1[tw.type[id]]);
        }
        const Ids& after = tw.cuts[c + nh + static_cast<std::size_t>(count(K))];
        for (int id : after) {
            if (tw.consumer[id] < 0 || r[tw.consumer[id]] != low) continue;
            if (tw.producer[id] >= 0 && r[tw.producer[id]] == H) continue;
            hole.anchor_right.cells.push_back(s.c1[tw.type[id]]);
        }
        if (middle || (left && right)) return out;
        out.cls.tag = right ? BranchTag::right_indexed : BranchTag::left_indexed;
        hole.free_on_right = right;
        out.cls.holes.push_back(hole);
        return out;
    }

    out.cls.tag = BranchTag::regular;
    const bool a_above = edge(w, role, F, H) || edge(w, role, H, G);
    const bool b_above = edge(w, role, G, H) || edge(w, role, H, F);
    if (a_above != b_above) {
        out.a_upper = a_above;
        const int up = a_above ? F : G, low = a_above ? G : F;
        std::vector<int> rank(role.size());
        for (std::size_t i = 0; i < role.size(); ++i) rank[i] = role[i] == up ? 0 : role[i] == H ? 1 : 2;
        std::vector<int> perm;
        auto T = reorder(s, S, rank, &perm);
        if (!T) return out;
        const auto r = permute(role, perm);
        const Wires tw = trace_wires(s, *T);
        const std::size_t c = static_cast<std::size_t>(count(up)), nh = static_cast<std::size_t>(count(H));
        const auto [lh, rh] = side_whiskers(s, slice_frame(s, *T, c, c + nh));
        const Ids& cut = tw.cuts[c];
        bool aL = false, aR = false, bL = false, bR = false;
        for (std::size_t i = 0; i < cut.size(); ++i) {
            const int id = cut[i];
            const bool from_up = tw.producer[id] >= 0 && r[tw.producer[id]] == up;
            const bool to_low = tw.consumer[id] >= 0 && r[tw.consumer[id]] == low;
            if (i < lh) {
                aL |= from_up;
                bL |= to_low;
            } else if (i >= cut.size() - rh) {
                aR |= from_up;
                bR |= to_low;
            }
        }
        if (!aR && !bL) out.cls.subcase = 1;
        else if (!aL && !bR) out.cls.subcase = 2;
        else if (!bL && !bR) out.cls.subcase = 3;
        else if (!aL && !aR) out.cls.subcase = 4;
        return out;
    }

    // Both own parts on the same side of the shared part: name the left one first.
    const bool below = !edge(w, role, F, H) && !edge(w, role, G, H);
    std::vector<int> rank(role.size());
    for (std::size_t i = 0; i < role.size(); ++i)
        rank[i] = role[i] == H ? (below ? 0 : 2) : role[i] == F ? (below ? 1 : 0) : (below ? 2 : 1);
    std::vector<int> perm;
    auto T = reorder(s, S, rank, &perm);
    if (!T) return out;
    int min_f = 1 << 30, min_g = 1 << 30;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (role[perm[i]] == F) min_f = std::min(min_f, T->layers[i].off);
        if (role[perm[i]] == G) min_g = std::min(min_g, T->layers[i].off);
    }
    out.a_upper = min_f <= min_g;
    return out;
}

namespace {

struct Half {
    Frame own, shared;  // canonical
    Ids anchor;
    bool right = true;
};

// Splits of a rule source into an own part and a shared part with the shared
// part flush against one side and the anchor wires on the other.
std::vector<Half> halves(const Sig& s, const Frame& src, bool shared_below) {
    std::vector<Half> out;
    for (const Frame& P : arrangements(s, src)) {
        const auto cuts = cuts_of(s, P);
        for (std::size_t j = 1; j < P.layers.size(); ++j) {
            Frame part = shared_below ? slice_frame(s, P, j, P.layers.size()) : slice_frame(s, P, 0, j);
            Frame own = shared_below ? slice_frame(s, P, 0, j) : slice_frame(s, P, j, P.layers.size());
            const auto [l, r] = side_whiskers(s, part);
            if ((l == 0) == (r == 0)) continue;
            Half h;
            h.right = r > 0;
            h.shared = canonical(s, strip(s, part, l, r));
            if (h.right) h.anchor.assign(part.src.end() - static_cast<long>(r), part.src.end());
            else h.anchor.assign(part.src.begin(), part.src.begin() + static_cast<long>(l));
            h.own = canonical(s, own);
            out.push_back(std::move(h));
        }
    }
    return out;
}

}  // namespace

std::vector<FTemplate> templates(const Sig& s, const std::vector<FRule>& rules) {
    std::vector<FTemplate> out;
    std::set<std::tuple<int, int, bool, std::vector<Layer>, std::vector<Layer>, std::vector<Layer>, Ids, Ids>> keys;
    std::vector<std::vector<Half>> lows, highs;
    for (const auto& r : rules) {
        lows.push_back(halves(s, r.src, true));
        highs.push_back(halves(s, r.src, false));
    }
    for (std::size_t a = 0; a < rules.size(); ++a) {
        for (std::size_t b = 0; b < rules.size(); ++b) {
            for (const Half& x : lows[a]) {
                for (const Half& y : highs[b]) {
                    if (x.right != y.right || !(x.shared == y.shared)) continue;
                    auto key = std::make_tuple(static_cast<int>(a), static_cast<int>(b), x.right, x.own.layers,
                                               x.shared.layers, y.own.layers, x.anchor, y.anchor);
                    if (!keys.insert(key).second) continue;
                    FTemplate t;
                    t.rule_a = static_cast<int>(a);
                    t.rule_b = static_cast<int>(b);
                    t.tag = x.right ? BranchTag::right_indexed : BranchTag::left_indexed;
                    t.upper = x.own;
                    t.shared = x.shared;
                    t.lower = y.own;
                    t.u = x.anchor;
                    t.v = y.anchor;
                    out.push_back(std::move(t));
                }
            }
        }
    }
    return out;
}

std::optional<Filled> fill(const Sig& s, const FTemplate& t, const Frame& k) {
    const Ids kt = target_of(s, k);
    const bool right = t.tag == BranchTag::right_indexed;
    auto fits = [&](const Ids& w, const Ids& anchor) {
        if (w.size() < anchor.size()) return false;
        return right ? std::equal(anchor.begin(), anchor.end(), w.begin())
                     : std::equal(anchor.rbegin(), anchor.rend(), w.rbegin());
    };
    if (!fits(k.src, t.u) || !fits(kt, t.v)) return std::nullopt;
    const int xw = static_cast<int>(k.src.size() - t.u.size());
    const int yw = static_cast<int>(kt.size() - t.v.size());
    const int ht = static_cast<int>(target_of(s, t.shared).size());
    Frame S;
    std::vector<int> role;
    auto add = [&](const Frame& f, int shift, int r) {
        for (const auto& l : f.layers) {
            S.layers.push_back(Layer{l.off + shift, l.gen});
            role.push_back(r);
        }
    };
    if (right) {
        S.src = t.upper.src;
        S.src.insert(S.src.end(), k.src.begin() + static_cast<long>(t.u.size()), k.src.end());
        S.pt = t.upper.pt;
        add(t.upper, 0, F);
        add(t.shared, 0, H);
        add(k, ht, K);
        add(t.lower, 0, G);
    } else {
        S.src.assign(k.src.begin(), k.src.begin() + xw);
        S.src.insert(S.src.end(), t.upper.src.begin(), t.upper.src.end());
        S.pt = k.pt;
        add(t.upper, xw, F);
        add(k, 0, K);
        add(t.shared, static_cast<int>(kt.size()), H);
        add(t.lower, yw, G);
    }
    if (!composable(s, S.src, S.pt) || !well_formed(s, S)) return std::nullopt;
    std::vector<int> perm;
    Filled out;
    out.source = canonical(s, S, &perm);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const int r = role[perm[i]];
        if (r == F || r == H) out.slices_a.push_back(static_cast<int>(i));
        if (r == G || r == H) out.slices_b.push_back(static_cast<int>(i));
        if (r == K) out.hole.push_back(static_cast<int>(i));
    }
    return out;
}

bool minimal(const Sig& s, const Filled& f) {
    const auto [l, r] = side_whiskers(s, f.source);
    if (l != 0 || r != 0) return false;
    if (f.hole.empty()) return true;
    const std::size_t n = f.source.layers.size();
    const auto succ = successors(trace_wires(s, f.source), n);
    std::vector<std::vector<int>> pred(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int j : succ[i]) pred[j].push_back(static_cast<int>(i));
    std::vector<char> in_hole(n, 0);
    for (int i : f.hole) in_hole[i] = 1;
    auto spread = [&](const std::vector<std::vector<int>>& next) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack;
        for (std::size_t i = 0; i < n; ++i)
            if (!in_hole[i]) stack.push_back(static_cast<int>(i));
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : next[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
        }
        return seen;
    };
    const auto below_r = spread(succ), above_r = spread(pred);
    for (int i : f.hole)
        if (!below_r[i] || !above_r[i]) return false;
    return true;
}

}  // namespace polyrw::detail
