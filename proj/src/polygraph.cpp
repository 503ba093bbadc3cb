// Polygraph file parser, validator and serializer.
#include "polyrw/polygraph.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "frame.hpp"
#include "lexer.hpp"

namespace polyrw {

namespace {

using detail::Cursor;
using detail::Frame;
using detail::Sig;
using detail::Tok;

struct DExpr {
    enum Kind { Id, Gen, H, V } kind = Id;
    Word word;
    std::string name;
    std::vector<DExpr> kids;
    int line = 0, col = 0;
};

Word parse_word_tokens(Cursor& c) {
    Word w;
    if (c.peek().kind == Tok::Ident && c.peek().text == "empty" && c.peek(1).kind == Tok::Sym &&
        c.peek(1).text == "(") {
        c.next();
        c.expect("(");
        w.point = c.ident();
        c.expect(")");
        return w;
    }
    if (c.peek().kind != Tok::Ident) c.fail("expected a word");
    while (c.peek().kind == Tok::Ident) w.cells.push_back(c.next().text);
    return w;
}

DExpr parse_dexpr(Cursor& c) {
    DExpr e;
    e.line = c.peek().line;
    e.col = c.peek().col;
    if (c.accept("(")) {
        std::vector<DExpr> kids;
        kids.push_back(parse_dexpr(c));
        std::string op;
        if (c.is_sym("*") || c.is_sym(";")) {
            op = c.next().text;
        } else {
            c.fail("expected '*' or ';'");
        }
        kids.push_back(parse_dexpr(c));
        while (c.accept(op)) kids.push_back(parse_dexpr(c));
        c.expect(")");
        e.kind = op == "*" ? DExpr::H : DExpr::V;
        e.kids = std::move(kids);
        return e;
    }
    std::string id = c.ident();
    if (id == "id" && c.is_sym("(")) {
        c.expect("(");
        e.kind = DExpr::Id;
        e.word = parse_word_tokens(c);
        c.expect(")");
        return e;
    }
    e.kind = DExpr::Gen;
    e.name = id;
    return e;
}

Frame elaborate(const Sig& s, const DExpr& e) {
    auto where = [&] { return " at " + std::to_string(e.line) + ":" + std::to_string(e.col); };
    switch (e.kind) {
        case DExpr::Id: {
            detail::Ids w = detail::ids_of(s, e.word);
            int pt = detail::word_point(s, e.word);
            int cur = pt;
            for (int x : w) {
                if (s.c1src[x] != cur) throw TypeError("identity word is not composable" + where());
                cur = s.c1tgt[x];
            }
            return detail::identity_frame(w, pt);
        }
        case DExpr::Gen: {
            int g = s.cell2(e.name);
            Frame f;
            f.src = s.gens[g].src;
            f.pt = s.gens[g].left_point;
            f.layers.push_back(detail::Layer{0, g});
            return f;
        }
        case DExpr::H: {
            Frame acc = elaborate(s, e.kids[0]);
            for (std::size_t i = 1; i < e.kids.size(); ++i) {
                auto r = detail::hcat(s, acc, elaborate(s, e.kids[i]));
                if (!r) throw TypeError("horizontal composite with mismatched 0-cells" + where());
                acc = std::move(*r);
            }
            return acc;
        }
        case DExpr::V: {
            Frame acc = elaborate(s, e.kids[0]);
            for (std::size_t i = 1; i < e.kids.size(); ++i) {
                auto r = detail::vcat(s, acc, elaborate(s, e.kids[i]));
                if (!r) throw TypeError("vertical composite with mismatched boundary" + where());
                acc = std::move(*r);
            }
            return acc;
        }
    }
    return {};
}

Diagram to_diagram(const Sig& s, const DExpr& e) {
    Frame f = elaborate(s, e);
    return detail::diagram_of(s, detail::canonical(s, f));
}

struct RawCell3 {
    std::string name;
    DExpr src, tgt;
};

// Fills the point of non-empty words with their source 0-cell when known.
void fill_point(Word& w, const std::map<std::string, std::string>& src_of) {
    if (w.cells.empty()) return;
    auto it = src_of.find(w.cells.front());
    if (it != src_of.end()) w.point = it->second;
}

struct WordInfo {
    bool ok = true;
    std::string left, right;
};

WordInfo check_word(const Word& w, const std::string& cell, const std::set<std::string>& c0,
                    const std::map<std::string, std::pair<std::string, std::string>>& c1,
                    std::vector<Violation>& out) {
    WordInfo info;
    if (w.cells.empty()) {
        if (!c0.count(w.point)) {
            out.push_back({"unknown", cell, "empty word of '" + cell + "' names unknown 0-cell '" + w.point + "'"});
            info.ok = false;
        }
        info.left = info.right = w.point;
        return info;
    }
    std::string cur;
    for (std::size_t i = 0; i < w.cells.size(); ++i) {
        auto it = c1.find(w.cells[i]);
        if (it == c1.end()) {
            out.push_back({"unknown", cell, "'" + cell + "' uses unknown 1-cell '" + w.cells[i] + "'"});
            info.ok = false;
            return info;
        }
        if (i == 0) {
            info.left = it->second.first;
        } else if (it->second.first != cur) {
            out.push_back({"composability", cell,
                           "word '" + to_string(w) + "' of '" + cell + "' is not composable at position " +
                               std::to_string(i)});
            info.ok = false;
            return info;
        }
        cur = it->second.second;
    }
    info.right = cur;
    return info;
}

void check_dups(const std::vector<std::string>& names, const std::string& dim, std::vector<Violation>& out) {
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second) out.push_back({"duplicate", n, "duplicate " + dim + " name '" + n + "'"});
}

// Checks everything below dimension 3; returns true when the signature can be built.
bool validate_low(const Polygraph& p, std::vector<Violation>& out) {
    std::size_t before = out.size();
    check_dups(p.cells0, "0-cell", out);
    std::vector<std::string> names;
    for (const auto& c : p.cells1) names.push_back(c.name);
    check_dups(names, "1-cell", out);
    names.clear();
    for (const auto& c : p.cells2) names.push_back(c.name);
    check_dups(names, "2-cell", out);
    names.clear();
    for (const auto& c : p.cells3) names.push_back(c.name);
    for (const auto& r : p.rules) names.push_back(r.name);
    check_dups(names, "rule", out);

    std::set<std::string> c0(p.cells0.begin(), p.cells0.end());
    std::map<std::string, std::pair<std::string, std::string>> c1;
    for (const auto& c : p.cells1) {
        for (const auto& e : {c.src, c.tgt})
            if (!c0.count(e)) out.push_back({"unknown", c.name, "1-cell '" + c.name + "' names unknown 0-cell '" + e + "'"});
        c1[c.name] = {c.src, c.tgt};
    }
    auto globular = [&](const Word& a, const Word& b, const std::string& cell) {
        WordInfo x = check_word(a, cell, c0, c1, out);
        WordInfo y = check_word(b, cell, c0, c1, out);
        if (x.ok && y.ok && (x.left != y.left || x.right != y.right))
            out.push_back({"globularity", cell,
                           "source and target of '" + cell + "' have different endpoint 0-cells"});
    };
    for (const auto& c : p.cells2) globular(c.src, c.tgt, c.name);
    for (const auto& r : p.rules) {
        if (r.lhs.cells.empty()) out.push_back({"empty_lhs", r.name, "rule '" + r.name + "' has an empty left side"});
        globular(r.lhs, r.rhs, r.name);
    }
    if (p.dimension == 2 && !p.cells3.empty())
        out.push_back({"dimension", p.name, "2-polygraph declares 3-cells"});
    if (p.dimension == 3 && !p.rules.empty())
        out.push_back({"dimension", p.name, "3-polygraph declares word rules"});
    return out.size() == before;
}

void check_cell3(const Sig& s, const Cell3& c, std::vector<Violation>& out) {
    Frame a, b;
    try {
        a = detail::frame_of(s, c.src);
        b = detail::frame_of(s, c.tgt);
    } catch (const TypeError& e) {
        out.push_back({"ill_formed", c.name, "3-cell '" + c.name + "': " + e.what()});
        return;
    }
    if (a.src != b.src || a.pt != b.pt || detail::target_of(s, a) != detail::target_of(s, b))
        out.push_back({"globularity", c.name,
                       "globularity violation in 3-cell '" + c.name + "': source and target have different boundary words"});
}

}  // namespace

std::vector<Violation> validate(const Polygraph& p) {
    std::vector<Violation> out;
    if (!validate_low(p, out)) return out;
    const Sig& s = p.sig();
    for (const auto& c : p.cells3) check_cell3(s, c, out);
    return out;
}

Polygraph parse_polygraph_report(const std::string& text, std::vector<Violation>& report) {
    Cursor c(detail::tokenize(text));
    c.keyword("polygraph");
    Polygraph p;
    p.name = c.ident();
    c.expect("{");
    std::vector<RawCell3> raw3;
    while (!c.is_sym("}")) {
        if (c.at_end()) c.fail("expected '}'");
        std::string kw = c.ident();
        if (kw == "cell0") {
            p.cells0.push_back(c.ident());
        } else if (kw == "cell1") {
            Cell1 x;
            x.name = c.ident();
            c.expect(":");
            x.src = c.ident();
            c.expect("->");
            x.tgt = c.ident();
            p.cells1.push_back(x);
        } else if (kw == "cell2" || kw == "rule") {
            std::string name = c.ident();
            c.expect(":");
            Word a = parse_word_tokens(c);
            c.expect("=>");
            Word b = parse_word_tokens(c);
            if (kw == "cell2")
                p.cells2.push_back({name, a, b});
            else
                p.rules.push_back({name, a, b});
        } else if (kw == "cell3") {
            RawCell3 r;
            r.name = c.ident();
            c.expect(":");
            r.src = parse_dexpr(c);
            c.expect("=>");
            r.tgt = parse_dexpr(c);
            raw3.push_back(std::move(r));
        } else {
            throw ParseError("unknown declaration '" + kw + "'", c.peek().line, c.peek().col);
        }
        c.expect(";");
    }
    c.expect("}");
    if (!c.at_end()) c.fail("trailing input after polygraph");

    p.dimension = p.rules.empty() ? 3 : 2;
    if (!p.rules.empty() && !raw3.empty()) {
        report.push_back({"dimension", p.name, "polygraph '" + p.name + "' mixes rules and 3-cells"});
        return p;
    }

    std::map<std::string, std::string> src_of;
    for (const auto& x : p.cells1) src_of[x.name] = x.src;
    for (auto& x : p.cells2) {
        fill_point(x.src, src_of);
        fill_point(x.tgt, src_of);
    }
    for (auto& r : p.rules) {
        fill_point(r.lhs, src_of);
        fill_point(r.rhs, src_of);
    }

    if (!validate_low(p, report)) return p;

    const Sig& s = p.sig();
    for (const auto& r : raw3) {
        Cell3 cell;
        cell.name = r.name;
        try {
            cell.src = to_diagram(s, r.src);
            cell.tgt = to_diagram(s, r.tgt);
        } catch (const TypeError& e) {
            report.push_back({"ill_formed", r.name, "boundary typing error in 3-cell '" + r.name + "': " + e.what()});
            continue;
        }
        std::size_t before = report.size();
        check_cell3(s, cell, report);
        if (report.size() == before) p.cells3.push_back(std::move(cell));
    }
    return p;
}

Polygraph parse_polygraph(const std::string& text) {
    std::vector<Violation> report;
    Polygraph p = parse_polygraph_report(text, report);
    if (!report.empty()) throw TypeError(report.front().message);
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Polygraph load_polygraph(const std::string& path) { return parse_polygraph(read_file(path)); }

Diagram parse_diagram(const Polygraph& p, const std::string& text) {
    Cursor c(detail::tokenize(text));
    DExpr e = parse_dexpr(c);
    if (!c.at_end()) c.fail("trailing input after diagram");
    return to_diagram(p.sig(), e);
}

Word parse_word(const Polygraph& p, const std::string& text) {
    Cursor c(detail::tokenize(text));
    Word w = parse_word_tokens(c);
    if (!c.at_end()) c.fail("trailing input after word");
    const Sig& s = p.sig();
    detail::Ids ids = detail::ids_of(s, w);
    int pt = detail::word_point(s, w);
    return detail::word_of(s, ids, pt);
}

std::string diagram_expr(const Diagram& d) {
    if (d.slices.empty()) return "id(" + to_string(d.source) + ")";
    std::vector<std::string> rows;
    for (const auto& sl : d.slices) {
        std::vector<std::string> parts;
        if (!sl.left.empty()) parts.push_back("id(" + to_string(sl.left) + ")");
        parts.push_back(sl.gen);
        if (!sl.right.empty()) parts.push_back("id(" + to_string(sl.right) + ")");
        if (parts.size() == 1) {
            rows.push_back(parts[0]);
        } else {
            std::string r = "(";
            for (std::size_t i = 0; i < parts.size(); ++i) r += (i ? " * " : "") + parts[i];
            rows.push_back(r + ")");
        }
    }
    if (rows.size() == 1) return rows[0];
    std::string out = "(";
    for (std::size_t i = 0; i < rows.size(); ++i) out += (i ? " ; " : "") + rows[i];
    return out + ")";
}

std::string serialize_polygraph(const Polygraph& p) {
    std::ostringstream os;
    os << "polygraph " << p.name << " {\n";
    for (const auto& c : p.cells0) os << "  cell0 " << c << ";\n";
    for (const auto& c : p.cells1) os << "  cell1 " << c.name << " : " << c.src << " -> " << c.tgt << ";\n";
    for (const auto& c : p.cells2)
        os << "  cell2 " << c.name << " : " << to_string(c.src) << " => " << to_string(c.tgt) << ";\n";
    for (const auto& c : p.cells3)
        os << "  cell3 " << c.name << " : " << diagram_expr(c.src) << " => " << diagram_expr(c.tgt) << ";\n";
    for (const auto& r : p.rules)
        os << "  rule " << r.name << " : " << to_string(r.lhs) << " => " << to_string(r.rhs) << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace polyrw
