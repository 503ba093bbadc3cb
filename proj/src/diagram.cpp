#include "polyrw/diagram.hpp"

#include <sstream>

#include "frame.hpp"
#include "match.hpp"

namespace polyrw {

using detail::Frame;

bool operator==(const WhiskerContext& a, const WhiskerContext& b) {
    return a.top == b.top && a.left == b.left && a.right == b.right && a.bottom == b.bottom;
}

Diagram identity(const Word& w) {
    Diagram d;
    d.source = w;
    return d;
}

Diagram generator(const Polygraph& p, const std::string& name) {
    const auto& s = p.sig();
    int g = s.cell2(name);
    Frame f{s.gens[g].src, s.gens[g].left_point, {detail::Layer{0, g}}};
    return detail::diagram_of(s, f);
}

bool well_formed(const Polygraph& p, const Diagram& d) {
    try {
        detail::frame_of(p.sig(), d);
        return true;
    } catch (const TypeError&) {
        return false;
    }
}

Word source(const Polygraph& p, const Diagram& d) {
    const auto& s = p.sig();
    Frame f = detail::frame_of(s, d);
    return detail::word_of(s, f.src, f.pt);
}

Word target(const Polygraph& p, const Diagram& d) {
    const auto& s = p.sig();
    Frame f = detail::frame_of(s, d);
    return detail::word_of(s, detail::target_of(s, f), f.pt);
}

Diagram compose_h(const Polygraph& p, const Diagram& d1, const Diagram& d2) {
    const auto& s = p.sig();
    auto r = detail::hcat(s, detail::frame_of(s, d1), detail::frame_of(s, d2));
    if (!r) throw TypeError("compose_h: right 0-cell of the first diagram differs from left 0-cell of the second");
    return detail::diagram_of(s, detail::canonical(s, *r));
}

Diagram compose_v(const Polygraph& p, const Diagram& d1, const Diagram& d2) {
    const auto& s = p.sig();
    auto r = detail::vcat(s, detail::frame_of(s, d1), detail::frame_of(s, d2));
    if (!r) throw TypeError("compose_v: target of the first diagram differs from source of the second");
    return detail::diagram_of(s, detail::canonical(s, *r));
}

Diagram whisker(const Polygraph& p, const Word& left, const Diagram& d, const Word& right) {
    Diagram acc = d;
    if (!left.empty()) acc = compose_h(p, identity(left), acc);
    if (!right.empty()) acc = compose_h(p, acc, identity(right));
    return canonicalize(p, acc);
}

Diagram canonicalize(const Polygraph& p, const Diagram& d) {
    const auto& s = p.sig();
    return detail::diagram_of(s, detail::canonical(s, detail::frame_of(s, d)));
}

bool equal_up_to_exchange(const Polygraph& p, const Diagram& d1, const Diagram& d2) {
    const auto& s = p.sig();
    return detail::canonical(s, detail::frame_of(s, d1)) == detail::canonical(s, detail::frame_of(s, d2));
}

std::size_t count_occurrences(const Diagram& d, const std::string& gen) {
    std::size_t n = 0;
    for (const auto& sl : d.slices)
        if (sl.gen == gen) ++n;
    return n;
}

std::vector<WhiskerContext> enumerate_matches(const Polygraph& p, const Diagram& d, const Diagram& pattern) {
    const auto& s = p.sig();
    if (pattern.slices.empty()) throw Error("enumerate_matches: degenerate pattern (identity diagram)");
    Frame fd = detail::canonical(s, detail::frame_of(s, d));
    Frame fp = detail::canonical(s, detail::frame_of(s, pattern));
    std::vector<WhiskerContext> out;
    for (const auto& m : detail::find_matches(s, fd, fp)) {
        WhiskerContext c;
        c.top = detail::diagram_of(s, m.ctx.top);
        c.left = detail::word_of(s, m.ctx.left, fd.pt);
        c.right = detail::word_of(s, m.ctx.right,
                                  detail::point_at(s, detail::target_of(s, m.ctx.top), fd.pt,
                                                   m.ctx.left.size() + fp.src.size()));
        c.bottom = detail::diagram_of(s, m.ctx.bottom);
        out.push_back(std::move(c));
    }
    return out;
}

Diagram plug(const Polygraph& p, const WhiskerContext& c, const Diagram& d) {
    const auto& s = p.sig();
    detail::FContext fc;
    fc.top = detail::frame_of(s, c.top);
    fc.left = detail::ids_of(s, c.left);
    fc.right = detail::ids_of(s, c.right);
    fc.bottom = detail::frame_of(s, c.bottom);
    return detail::diagram_of(s, detail::plug(s, fc, detail::frame_of(s, d)));
}

std::string dump(const Diagram& d) {
    if (d.slices.empty()) return "id(" + to_string(d.source) + ")\n";
    std::ostringstream os;
    for (const auto& sl : d.slices)
        os << to_string(sl.left) << " | " << sl.gen << " | " << to_string(sl.right) << "\n";
    return os.str();
}

}  // namespace polyrw
