// Fixture loading and brute-force oracles shared by the unit tests.
#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "frame.hpp"
#include "polyrw/polygraph.hpp"

namespace testing {

inline polyrw::Polygraph fixture(const std::string& name) {
    return polyrw::load_polygraph(std::string(POLYRW_FIXTURES) + "/" + name);
}

inline std::string fixture_path(const std::string& name) { return std::string(POLYRW_FIXTURES) + "/" + name; }

using polyrw::detail::Frame;
using polyrw::detail::Ids;
using polyrw::detail::Layer;
using polyrw::detail::Sig;

// Every well-formed frame with the given source, at most `size` layers and
// every cut at most `width` wide.
inline std::vector<Frame> all_frames(const Sig& s, const Ids& src, int pt, int size, std::size_t width) {
    std::vector<Frame> out;
    std::vector<std::pair<Frame, Ids>> level{{Frame{src, pt, {}}, src}};
    out.push_back(level[0].first);
    for (int k = 0; k < size; ++k) {
        std::vector<std::pair<Frame, Ids>> next;
        for (const auto& [f, cut] : level) {
            for (int g = 0; g < static_cast<int>(s.gens.size()); ++g) {
                for (int off = 0; off <= static_cast<int>(cut.size()); ++off) {
                    Ids c = cut;
                    Layer l{off, g};
                    if (!polyrw::detail::apply_layer(s, c, pt, l) || c.size() > width) continue;
                    Frame nf = f;
                    nf.layers.push_back(l);
                    out.push_back(nf);
                    next.emplace_back(nf, c);
                }
            }
        }
        level = std::move(next);
    }
    return out;
}

// Runs a frame with named wires: inputs are 0..n-1, layer i creates 1000*(tag+1)+port.
// Fills the final cut and, per tag, the consumed wire names; false when ill-formed.
struct WireRun {
    std::vector<int> cut;
    std::map<int, std::vector<int>> consumed;
};

inline bool run_wires(const Sig& s, const Frame& f, const std::vector<int>& tags, WireRun& r) {
    Ids cut = f.src;
    r.cut.clear();
    r.consumed.clear();
    for (std::size_t i = 0; i < cut.size(); ++i) r.cut.push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < f.layers.size(); ++i) {
        const Layer& l = f.layers[i];
        const auto& g = s.gens[l.gen];
        Ids before = cut;
        if (!polyrw::detail::apply_layer(s, cut, f.pt, l)) return false;
        auto first = r.cut.begin() + l.off;
        r.consumed[tags[i]] = std::vector<int>(first, first + static_cast<long>(g.src.size()));
        r.cut.erase(first, first + static_cast<long>(g.src.size()));
        std::vector<int> made;
        for (std::size_t p = 0; p < g.tgt.size(); ++p) made.push_back(1000 * (tags[i] + 1) + static_cast<int>(p));
        r.cut.insert(r.cut.begin() + l.off, made.begin(), made.end());
    }
    return true;
}

// Exchange class of f by BFS over adjacent swaps, each swap found by trying
// every offset pair and keeping those that preserve the wiring.
inline std::set<std::vector<Layer>> exchange_class(const Sig& s, const Frame& f) {
    using State = std::pair<std::vector<Layer>, std::vector<int>>;
    std::vector<int> tags(f.layers.size());
    for (std::size_t i = 0; i < tags.size(); ++i) tags[i] = static_cast<int>(i);
    WireRun ref;
    run_wires(s, f, tags, ref);
    std::set<State> seen{{f.layers, tags}};
    std::vector<State> queue{{f.layers, tags}};
    std::set<std::vector<Layer>> out{f.layers};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        State st = queue[qi];
        for (std::size_t i = 0; i + 1 < st.first.size(); ++i) {
            int max_off = static_cast<int>(f.src.size());
            for (const auto& l : st.first) max_off += static_cast<int>(s.gens[l.gen].tgt.size());
            for (int ob = 0; ob <= max_off; ++ob) {
                for (int oa = 0; oa <= max_off; ++oa) {
                    State n = st;
                    n.first[i] = Layer{ob, st.first[i + 1].gen};
                    n.first[i + 1] = Layer{oa, st.first[i].gen};
                    std::swap(n.second[i], n.second[i + 1]);
                    Frame nf{f.src, f.pt, n.first};
                    WireRun r;
                    if (!run_wires(s, nf, n.second, r)) continue;
                    if (r.cut != ref.cut || r.consumed != ref.consumed) continue;
                    if (seen.insert(n).second) {
                        queue.push_back(n);
                        out.insert(n.first);
                    }
                }
            }
        }
    }
    return out;
}

// Random well-formed frame: up to `size` layers, cuts at most `width` wide.
inline Frame random_frame(const Sig& s, const Ids& src, int pt, int size, std::size_t width, std::mt19937& rng) {
    Frame f{src, pt, {}};
    Ids cut = src;
    for (int k = 0; k < size; ++k) {
        std::vector<Layer> options;
        for (int g = 0; g < static_cast<int>(s.gens.size()); ++g)
            for (int off = 0; off <= static_cast<int>(cut.size()); ++off) {
                Ids c = cut;
                if (polyrw::detail::apply_layer(s, c, pt, Layer{off, g}) && c.size() <= width)
                    options.push_back(Layer{off, g});
            }
        if (options.empty()) break;
        Layer l = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        polyrw::detail::apply_layer(s, cut, pt, l);
        f.layers.push_back(l);
    }
    return f;
}

// Random word of 1-cells composable from 0-cell `pt`, at most `len` long.
inline Ids random_word(const Sig& s, int pt, std::size_t len, std::mt19937& rng) {
    Ids w;
    std::size_t n = std::uniform_int_distribution<std::size_t>(0, len)(rng);
    int at = pt;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> ok;
        for (int c = 0; c < static_cast<int>(s.c1.size()); ++c)
            if (s.c1src[c] == at) ok.push_back(c);
        if (ok.empty()) break;
        int c = ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
        w.push_back(c);
        at = s.c1tgt[c];
    }
    return w;
}

}  // namespace testing
