#include "frame.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>

namespace polyrw {

bool operator==(const Word& a, const Word& b) {
    if (a.cells != b.cells) return false;
    return !a.cells.empty() || a.point == b.point;
}

std::string to_string(const Word& w) {
    if (w.cells.empty()) return "empty(" + w.point + ")";
    std::string out;
    for (std::size_t i = 0; i < w.cells.size(); ++i) {
        if (i) out += ' ';
        out += w.cells[i];
    }
    return out;
}

bool operator==(const Slice& a, const Slice& b) {
    return a.gen == b.gen && a.left == b.left && a.right == b.right;
}

bool operator==(const Diagram& a, const Diagram& b) {
    return a.source == b.source && a.slices == b.slices;
}

static bool same_cell3(const Cell3& a, const Cell3& b) {
    return a.name == b.name && a.src == b.src && a.tgt == b.tgt;
}

bool operator==(const Polygraph& a, const Polygraph& b) {
    if (a.name != b.name || a.dimension != b.dimension || a.cells0 != b.cells0) return false;
    if (a.cells1.size() != b.cells1.size() || a.cells2.size() != b.cells2.size() ||
        a.cells3.size() != b.cells3.size() || a.rules.size() != b.rules.size())
        return false;
    for (std::size_t i = 0; i < a.cells1.size(); ++i) {
        const auto &x = a.cells1[i], &y = b.cells1[i];
        if (x.name != y.name || x.src != y.src || x.tgt != y.tgt) return false;
    }
    for (std::size_t i = 0; i < a.cells2.size(); ++i) {
        const auto &x = a.cells2[i], &y = b.cells2[i];
        if (x.name != y.name || x.src != y.src || x.tgt != y.tgt) return false;
    }
    for (std::size_t i = 0; i < a.cells3.size(); ++i)
        if (!same_cell3(a.cells3[i], b.cells3[i])) return false;
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        const auto &x = a.rules[i], &y = b.rules[i];
        if (x.name != y.name || x.lhs != y.lhs || x.rhs != y.rhs) return false;
    }
    return true;
}

const detail::Sig& Polygraph::sig() const {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::string fp = detail::fingerprint_of(*this);
    if (!sig_ || sig_->fingerprint != fp) sig_ = detail::build_sig(*this);
    return *sig_;
}

}  // namespace polyrw

namespace polyrw::detail {

int Sig::cell1(const std::string& n) const {
    auto it = i1.find(n);
    if (it == i1.end()) throw TypeError("unknown 1-cell '" + n + "'");
    return it->second;
}

int Sig::cell2(const std::string& n) const {
    auto it = i2.find(n);
    if (it == i2.end()) throw TypeError("unknown 2-cell '" + n + "'");
    return it->second;
}

int Sig::cell3(const std::string& n) const {
    auto it = i3.find(n);
    if (it == i3.end()) throw TypeError("unknown 3-cell '" + n + "'");
    return it->second;
}

std::string fingerprint_of(const Polygraph& p) {
    std::string fp;
    for (const auto& c : p.cells0) fp += c + ",";
    fp += ';';
    for (const auto& c : p.cells1) fp += c.name + ":" + c.src + ">" + c.tgt + ",";
    fp += ';';
    for (const auto& c : p.cells2) fp += c.name + ":" + to_string(c.src) + ">" + to_string(c.tgt) + ",";
    fp += ';';
    for (const auto& c : p.cells3) fp += c.name + ",";
    return fp;
}

std::shared_ptr<const Sig> build_sig(const Polygraph& p) {
    auto s = std::make_shared<Sig>();
    s->fingerprint = fingerprint_of(p);
    for (const auto& c : p.cells0) {
        s->i0[c] = static_cast<int>(s->c0.size());
        s->c0.push_back(c);
    }
    auto zero = [&](const std::string& n) {
        auto it = s->i0.find(n);
        if (it == s->i0.end()) throw TypeError("unknown 0-cell '" + n + "'");
        return it->second;
    };
    for (const auto& c : p.cells1) {
        s->i1[c.name] = static_cast<int>(s->c1.size());
        s->c1.push_back(c.name);
        s->c1src.push_back(zero(c.src));
        s->c1tgt.push_back(zero(c.tgt));
    }
    for (const auto& c : p.cells2) {
        s->i2[c.name] = static_cast<int>(s->c2.size());
        s->c2.push_back(c.name);
        Gen g;
        for (const auto& x : c.src.cells) g.src.push_back(s->cell1(x));
        for (const auto& x : c.tgt.cells) g.tgt.push_back(s->cell1(x));
        auto left = [&](const Ids& w, const Word& word) {
            return w.empty() ? zero(word.point) : s->c1src[w.front()];
        };
        auto right = [&](const Ids& w, const Word& word) {
            return w.empty() ? zero(word.point) : s->c1tgt[w.back()];
        };
        g.left_point = left(g.src, c.src);
        g.right_point = right(g.src, c.src);
        s->gens.push_back(std::move(g));
    }
    for (const auto& c : p.cells3) {
        s->i3[c.name] = static_cast<int>(s->c3.size());
        s->c3.push_back(c.name);
    }
    for (const auto& r : p.rules) {
        s->i3[r.name] = static_cast<int>(s->c3.size());
        s->c3.push_back(r.name);
    }
    return s;
}

std::size_t FrameHash::operator()(const Frame& f) const {
    std::size_t h = std::hash<int>()(f.pt);
    auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (int x : f.src) mix(static_cast<std::size_t>(x));
    mix(0xabcdefULL);
    for (const auto& l : f.layers) {
        mix(static_cast<std::size_t>(l.off));
        mix(static_cast<std::size_t>(l.gen) * 7919u);
    }
    return h;
}

int point_at(const Sig& s, const Ids& cut, int pt, std::size_t pos) {
    if (pos == 0) return pt;
    return s.c1tgt[cut[pos - 1]];
}

int right_point(const Sig& s, const Ids& cut, int pt) { return point_at(s, cut, pt, cut.size()); }

bool apply_layer(const Sig& s, Ids& cut, int pt, const Layer& l) {
    if (l.gen < 0 || l.gen >= static_cast<int>(s.gens.size()) || l.off < 0) return false;
    const Gen& g = s.gens[l.gen];
    std::size_t off = static_cast<std::size_t>(l.off);
    if (off + g.src.size() > cut.size()) return false;
    if (g.src.empty()) {
        if (point_at(s, cut, pt, off) != g.left_point) return false;
    } else if (!std::equal(g.src.begin(), g.src.end(), cut.begin() + l.off)) {
        return false;
    }
    cut.erase(cut.begin() + l.off, cut.begin() + l.off + static_cast<long>(g.src.size()));
    cut.insert(cut.begin() + l.off, g.tgt.begin(), g.tgt.end());
    return true;
}

Ids target_of(const Sig& s, const Frame& f) {
    Ids cut = f.src;
    for (const auto& l : f.layers)
        if (!apply_layer(s, cut, f.pt, l)) throw TypeError("ill-formed diagram: slice does not fit its cut");
    return cut;
}

std::vector<Ids> cuts_of(const Sig& s, const Frame& f) {
    std::vector<Ids> out;
    out.reserve(f.layers.size() + 1);
    Ids cut = f.src;
    out.push_back(cut);
    for (const auto& l : f.layers) {
        if (!apply_layer(s, cut, f.pt, l)) throw TypeError("ill-formed diagram: slice does not fit its cut");
        out.push_back(cut);
    }
    return out;
}

bool well_formed(const Sig& s, const Frame& f) {
    Ids cut = f.src;
    for (const auto& l : f.layers)
        if (!apply_layer(s, cut, f.pt, l)) return false;
    return true;
}

std::vector<std::pair<Layer, Layer>> exchanges(const Sig& s, const Layer& above, const Layer& below) {
    std::vector<std::pair<Layer, Layer>> out;
    const int in_a = static_cast<int>(s.gens[above.gen].src.size());
    const int out_a = static_cast<int>(s.gens[above.gen].tgt.size());
    const int in_b = static_cast<int>(s.gens[below.gen].src.size());
    const int out_b = static_cast<int>(s.gens[below.gen].tgt.size());
    if (below.off + in_b <= above.off)
        out.push_back({Layer{below.off, below.gen}, Layer{above.off - in_b + out_b, above.gen}});
    if (below.off >= above.off + out_a) {
        std::pair<Layer, Layer> r{Layer{below.off - out_a + in_a, below.gen}, above};
        if (out.empty() || !(out.front() == r)) out.push_back(r);
    }
    return out;
}

namespace {

bool pair_less(const std::pair<Layer, Layer>& a, const std::pair<Layer, Layer>& b) {
    if (!(a.first == b.first)) return a.first < b.first;
    return a.second < b.second;
}

// Layers without inputs can slide sideways through exchanges with the layers
// above them, which leaves adjacent-swap passes stuck in local minima.
bool has_sourceless(const Sig& s, const Frame& f) {
    for (const auto& l : f.layers)
        if (s.gens[l.gen].src.empty()) return true;
    return false;
}

Frame bubble(const Sig& s, const Frame& f, std::vector<int>& p) {
    Frame out = f;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < out.layers.size(); ++i) {
            std::pair<Layer, Layer> best{out.layers[i], out.layers[i + 1]};
            bool swap = false;
            for (const auto& cand : exchanges(s, out.layers[i], out.layers[i + 1])) {
                if (pair_less(cand, best)) {
                    best = cand;
                    swap = true;
                }
            }
            if (swap) {
                out.layers[i] = best.first;
                out.layers[i + 1] = best.second;
                std::swap(p[i], p[i + 1]);
                changed = true;
            }
        }
    }
    return out;
}

// Lexicographically least arrangement of the whole exchange class.
Frame class_minimum(const Sig& s, const Frame& f, std::vector<int>& p) {
    using State = std::pair<std::vector<Layer>, std::vector<int>>;
    std::set<std::vector<Layer>> seen{f.layers};
    std::vector<State> queue{{f.layers, p}};
    std::size_t best = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        for (std::size_t i = 0; i + 1 < queue[qi].first.size(); ++i) {
            for (const auto& [up, down] : exchanges(s, queue[qi].first[i], queue[qi].first[i + 1])) {
                State n = queue[qi];
                n.first[i] = up;
                n.first[i + 1] = down;
                std::swap(n.second[i], n.second[i + 1]);
                if (!seen.insert(n.first).second) continue;
                queue.push_back(std::move(n));
                if (queue.back().first < queue[best].first) best = queue.size() - 1;
            }
        }
    }
    p = queue[best].second;
    return Frame{f.src, f.pt, queue[best].first};
}

}  // namespace

Frame canonical(const Sig& s, const Frame& f, std::vector<int>* perm) {
    std::vector<int> p(f.layers.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
    Frame out = has_sourceless(s, f) ? class_minimum(s, f, p) : bubble(s, f, p);
    if (perm) *perm = std::move(p);
    return out;
}

Ids ids_of(const Sig& s, const Word& w) {
    Ids out;
    out.reserve(w.cells.size());
    for (const auto& c : w.cells) out.push_back(s.cell1(c));
    return out;
}

int word_point(const Sig& s, const Word& w) {
    if (!w.cells.empty()) return s.c1src[s.cell1(w.cells.front())];
    auto it = s.i0.find(w.point);
    if (it == s.i0.end()) throw TypeError("empty word needs a known 0-cell, got '" + w.point + "'");
    return it->second;
}

Word word_of(const Sig& s, const Ids& w, int pt) {
    Word out;
    out.cells.reserve(w.size());
    for (int x : w) out.cells.push_back(s.c1[x]);
    out.point = s.c0[pt];
    return out;
}

static void check_composable(const Sig& s, const Ids& w, int pt) {
    int cur = pt;
    for (int x : w) {
        if (s.c1src[x] != cur) throw TypeError("word is not composable at 1-cell '" + s.c1[x] + "'");
        cur = s.c1tgt[x];
    }
}

Frame frame_of(const Sig& s, const Diagram& d) {
    Frame f;
    f.src = ids_of(s, d.source);
    f.pt = word_point(s, d.source);
    check_composable(s, f.src, f.pt);
    Ids cut = f.src;
    for (const auto& sl : d.slices) {
        Layer l{static_cast<int>(sl.left.size()), s.cell2(sl.gen)};
        Ids left = ids_of(s, sl.left), right = ids_of(s, sl.right);
        const Gen& g = s.gens[l.gen];
        if (left.size() + g.src.size() + right.size() != cut.size() ||
            !std::equal(left.begin(), left.end(), cut.begin()) ||
            !std::equal(right.begin(), right.end(), cut.end() - static_cast<long>(right.size())))
            throw TypeError("slice '" + sl.gen + "' does not match the running word");
        if (!apply_layer(s, cut, f.pt, l))
            throw TypeError("slice '" + sl.gen + "' does not match the running word");
        f.layers.push_back(l);
    }
    return f;
}

Diagram diagram_of(const Sig& s, const Frame& f) {
    Diagram d;
    d.source = word_of(s, f.src, f.pt);
    Ids cut = f.src;
    for (const auto& l : f.layers) {
        const Gen& g = s.gens[l.gen];
        Slice sl;
        Ids left(cut.begin(), cut.begin() + l.off);
        Ids right(cut.begin() + l.off + static_cast<long>(g.src.size()), cut.end());
        sl.left = word_of(s, left, f.pt);
        sl.gen = s.c2[l.gen];
        sl.right = word_of(s, right, point_at(s, cut, f.pt, l.off + g.src.size()));
        d.slices.push_back(std::move(sl));
        if (!apply_layer(s, cut, f.pt, l)) throw TypeError("ill-formed diagram");
    }
    return d;
}

Frame identity_frame(const Ids& w, int pt) {
    Frame f;
    f.src = w;
    f.pt = pt;
    return f;
}

std::optional<Frame> vcat(const Sig& s, const Frame& a, const Frame& b) {
    if (a.pt != b.pt) return std::nullopt;
    if (target_of(s, a) != b.src) return std::nullopt;
    Frame out = a;
    out.layers.insert(out.layers.end(), b.layers.begin(), b.layers.end());
    return out;
}

std::optional<Frame> hcat(const Sig& s, const Frame& a, const Frame& b) {
    if (right_point(s, a.src, a.pt) != b.pt) return std::nullopt;
    Frame out = a;
    out.src.insert(out.src.end(), b.src.begin(), b.src.end());
    const int shift = static_cast<int>(target_of(s, a).size());
    for (const auto& l : b.layers) out.layers.push_back(Layer{l.off + shift, l.gen});
    return out;
}

Frame whisker(const Frame& f, const Ids& left, int left_pt, const Ids& right) {
    Frame out;
    out.src = left;
    out.src.insert(out.src.end(), f.src.begin(), f.src.end());
    out.src.insert(out.src.end(), right.begin(), right.end());
    out.pt = left.empty() ? f.pt : left_pt;
    const int shift = static_cast<int>(left.size());
    for (const auto& l : f.layers) out.layers.push_back(Layer{l.off + shift, l.gen});
    return out;
}

std::string dump(const Sig& s, const Frame& f) {
    Diagram d = diagram_of(s, f);
    if (d.slices.empty()) return "id(" + to_string(d.source) + ")\n";
    std::ostringstream os;
    for (const auto& sl : d.slices)
        os << to_string(sl.left) << " | " << sl.gen << " | " << to_string(sl.right) << "\n";
    return os.str();
}

}  // namespace polyrw::detail
