#include "match.hpp"

#include <algorithm>
#include <map>

namespace polyrw::detail {

namespace {

using Seq = std::vector<Layer>;

// Moves `e` (sitting just below `seq`) above every layer of `seq`.
// Returns each way of doing so as (updated seq, moved e).
std::vector<std::pair<Seq, Layer>> pass_up(const Sig& s, const Seq& seq, std::size_t upto, const Layer& e) {
    if (upto == 0) return {{Seq{}, e}};
    std::vector<std::pair<Seq, Layer>> out;
    for (const auto& [up, down] : exchanges(s, seq[upto - 1], e)) {
        for (auto& [rest, moved] : pass_up(s, seq, upto - 1, up)) {
            rest.push_back(down);
            out.emplace_back(std::move(rest), moved);
        }
    }
    return out;
}

struct Search {
    const Sig& s;
    const Frame& d;
    const Frame& p;
    std::vector<char> in_subset;
    int last = -1;
    std::vector<int> subset;
    std::vector<FMatch> out;

    void finish(const Seq& top, const Seq& block, const Seq& below) {
        Frame tf{d.src, d.pt, top};
        Ids w = target_of(s, tf);
        Frame bf{w, d.pt, block};
        Frame cb = canonical(s, bf);
        const int ell = cb.layers[0].off - p.layers[0].off;
        const int ws = static_cast<int>(p.src.size());
        if (ell < 0 || ell + ws > static_cast<int>(w.size())) return;
        if (!std::equal(p.src.begin(), p.src.end(), w.begin() + ell)) return;
        if (point_at(s, w, d.pt, static_cast<std::size_t>(ell)) != p.pt) return;
        for (std::size_t i = 0; i < cb.layers.size(); ++i)
            if (cb.layers[i].off - ell != p.layers[i].off || cb.layers[i].gen != p.layers[i].gen) return;
        Frame bottom{target_of(s, bf), d.pt, below};
        for (std::size_t i = static_cast<std::size_t>(last) + 1; i < d.layers.size(); ++i)
            bottom.layers.push_back(d.layers[i]);
        FMatch m;
        m.ctx.top = canonical(s, tf);
        m.ctx.left.assign(w.begin(), w.begin() + ell);
        m.ctx.right.assign(w.begin() + ell + ws, w.end());
        m.ctx.bottom = canonical(s, bottom);
        m.redex = subset;
        for (const auto& x : out)
            if (x.ctx == m.ctx) return;
        out.push_back(std::move(m));
    }

    void step(std::size_t i, const Seq& top, const Seq& block, const Seq& below) {
        if (static_cast<int>(i) > last) {
            finish(top, block, below);
            return;
        }
        const Layer& e = d.layers[i];
        if (in_subset[i]) {
            for (auto& [nb, moved] : pass_up(s, below, below.size(), e)) {
                Seq blk = block;
                blk.push_back(moved);
                step(i + 1, top, blk, nb);
            }
            return;
        }
        Seq both = block;
        both.insert(both.end(), below.begin(), below.end());
        auto opts = pass_up(s, both, both.size(), e);
        if (opts.empty()) {
            Seq nb = below;
            nb.push_back(e);
            step(i + 1, top, block, nb);
            return;
        }
        for (auto& [nboth, moved] : opts) {
            Seq t = top;
            t.push_back(moved);
            Seq blk(nboth.begin(), nboth.begin() + static_cast<long>(block.size()));
            Seq nb(nboth.begin() + static_cast<long>(block.size()), nboth.end());
            step(i + 1, t, blk, nb);
        }
    }
};

struct SubsetWalk {
    const Sig& s;
    const Frame& d;
    const Frame& p;
    std::map<int, int> need;
    std::vector<int> chosen;
    bool stop_at_first = false;
    std::vector<FMatch> found;

    bool walk(std::size_t i, std::size_t remaining) {
        if (remaining == 0) {
            auto ms = match_subset(s, d, chosen, p);
            found.insert(found.end(), ms.begin(), ms.end());
            return stop_at_first && !ms.empty();
        }
        if (d.layers.size() - i < remaining) return false;
        int g = d.layers[i].gen;
        auto it = need.find(g);
        if (it != need.end() && it->second > 0) {
            --it->second;
            chosen.push_back(static_cast<int>(i));
            bool done = walk(i + 1, remaining - 1);
            chosen.pop_back();
            ++it->second;
            if (done) return true;
        }
        return walk(i + 1, remaining);
    }
};

}  // namespace

std::vector<FMatch> match_subset(const Sig& s, const Frame& d, const std::vector<int>& subset, const Frame& p) {
    if (subset.empty() || subset.size() != p.layers.size()) return {};
    Search se{s, d, p, std::vector<char>(d.layers.size(), 0), subset.back(), subset, {}};
    for (int i : subset) se.in_subset[static_cast<std::size_t>(i)] = 1;
    Seq top(d.layers.begin(), d.layers.begin() + subset.front());
    se.step(static_cast<std::size_t>(subset.front()), top, {}, {});
    return se.out;
}

static std::vector<FMatch> walk_all(const Sig& s, const Frame& d, const Frame& p, bool first) {
    if (p.layers.empty()) throw Error("pattern with no slices matches everywhere");
    SubsetWalk w{s, d, p, {}, {}, first, {}};
    for (const auto& l : p.layers) ++w.need[l.gen];
    w.walk(0, p.layers.size());
    return std::move(w.found);
}

std::vector<FMatch> find_matches(const Sig& s, const Frame& d, const Frame& p) {
    auto found = walk_all(s, d, p, false);
    std::vector<FMatch> out;
    for (auto& m : found) {
        bool dup = false;
        for (const auto& x : out)
            if (x.ctx == m.ctx) dup = true;
        if (!dup) out.push_back(std::move(m));
    }
    std::stable_sort(out.begin(), out.end(), [](const FMatch& a, const FMatch& b) {
        if (a.redex.front() != b.redex.front()) return a.redex.front() < b.redex.front();
        if (a.ctx.left.size() != b.ctx.left.size()) return a.ctx.left.size() < b.ctx.left.size();
        return a.redex < b.redex;
    });
    return out;
}

bool has_match(const Sig& s, const Frame& d, const Frame& p) { return !walk_all(s, d, p, true).empty(); }

Frame plug(const Sig& s, const FContext& c, const Frame& x, std::vector<int>* xpos) {
    Frame wx = whisker(x, c.left, c.top.pt, c.right);
    auto a = vcat(s, c.top, wx);
    if (!a) throw TypeError("context does not fit the plugged diagram's source");
    auto b = vcat(s, *a, c.bottom);
    if (!b) throw TypeError("context does not fit the plugged diagram's target");
    std::vector<int> perm;
    Frame out = canonical(s, *b, &perm);
    if (xpos) {
        xpos->clear();
        const int lo = static_cast<int>(c.top.layers.size());
        const int hi = lo + static_cast<int>(x.layers.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            if (perm[i] >= lo && perm[i] < hi) xpos->push_back(static_cast<int>(i));
    }
    return out;
}

}  // namespace polyrw::detail
