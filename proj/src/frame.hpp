// Index-based diagram representation used by the algorithms.
#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polyrw/core.hpp"

namespace polyrw::detail {

struct Gen {
    std::vector<int> src;
    std::vector<int> tgt;
    int left_point = -1;   // 0-cell at the left end of both boundaries
    int right_point = -1;  // 0-cell at the right end
};

struct Sig {
    std::vector<std::string> c0, c1, c2, c3;
    std::unordered_map<std::string, int> i0, i1, i2, i3;
    std::vector<int> c1src, c1tgt;
    std::vector<Gen> gens;
    std::string fingerprint;

    int cell1(const std::string& n) const;
    int cell2(const std::string& n) const;
    int cell3(const std::string& n) const;
};

std::string fingerprint_of(const Polygraph& p);
std::shared_ptr<const Sig> build_sig(const Polygraph& p);

using Ids = std::vector<int>;

struct Layer {
    int off = 0;
    int gen = 0;
    bool operator==(const Layer& o) const { return off == o.off && gen == o.gen; }
    bool operator<(const Layer& o) const { return off != o.off ? off < o.off : gen < o.gen; }
};

struct Frame {
    Ids src;
    int pt = -1;  // 0-cell at the left end of every cut
    std::vector<Layer> layers;

    bool operator==(const Frame& o) const { return pt == o.pt && src == o.src && layers == o.layers; }
    std::size_t size() const { return layers.size(); }
};

struct FrameHash {
    std::size_t operator()(const Frame& f) const;
};

// 0-cell at position `pos` (0..cut.size()) of a cut starting at `pt`.
int point_at(const Sig& s, const Ids& cut, int pt, std::size_t pos);
int right_point(const Sig& s, const Ids& cut, int pt);

// Applies a layer to a cut in place; false when the layer does not fit.
bool apply_layer(const Sig& s, Ids& cut, int pt, const Layer& l);
// Cut after all layers; throws TypeError when the frame is ill-formed.
Ids target_of(const Sig& s, const Frame& f);
std::vector<Ids> cuts_of(const Sig& s, const Frame& f);
bool well_formed(const Sig& s, const Frame& f);

// Possible results of moving `below` above `above`. Empty when dependent.
// Each entry is (new upper layer, new lower layer).
std::vector<std::pair<Layer, Layer>> exchanges(const Sig& s, const Layer& above, const Layer& below);

// Canonical representative; perm[i] = index in the input of output layer i.
Frame canonical(const Sig& s, const Frame& f, std::vector<int>* perm = nullptr);

Ids ids_of(const Sig& s, const Word& w);
Word word_of(const Sig& s, const Ids& w, int pt);
int word_point(const Sig& s, const Word& w);

Frame frame_of(const Sig& s, const Diagram& d);
Diagram diagram_of(const Sig& s, const Frame& f);

Frame identity_frame(const Ids& w, int pt);

// Vertical composition without canonicalization; nullopt on boundary mismatch.
std::optional<Frame> vcat(const Sig& s, const Frame& a, const Frame& b);
// Horizontal composition without canonicalization; nullopt on 0-cell mismatch.
std::optional<Frame> hcat(const Sig& s, const Frame& a, const Frame& b);
// Whiskers a frame with wires on each side.
Frame whisker(const Frame& f, const Ids& left, int left_pt, const Ids& right);

std::string dump(const Sig& s, const Frame& f);

}  // namespace polyrw::detail
