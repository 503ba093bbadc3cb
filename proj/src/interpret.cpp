#include "polyrw/interpret.hpp"

#include <algorithm>
#include <filesystem>

#include "frame.hpp"
#include "json.hpp"
#include "lexer.hpp"
#include "polyrw/diagram.hpp"
#include "polyrw/polygraph.hpp"

namespace polyrw {

long long Affine::eval(const std::vector<long long>& v) const {
    long long r = constant;
    for (std::size_t i = 0; i < coef.size(); ++i) r += coef[i] * v.at(i);
    return r;
}

bool Affine::is_zero() const {
    return constant == 0 && std::all_of(coef.begin(), coef.end(), [](long long c) { return c == 0; });
}

bool operator==(const Affine& a, const Affine& b) {
    std::size_t n = std::max(a.coef.size(), b.coef.size());
    if (a.constant != b.constant) return false;
    for (std::size_t i = 0; i < n; ++i) {
        long long x = i < a.coef.size() ? a.coef[i] : 0;
        long long y = i < b.coef.size() ? b.coef[i] : 0;
        if (x != y) return false;
    }
    return true;
}

GroupElem& GroupElem::operator+=(const GroupElem& o) {
    z += o.z;
    for (const auto& [k, v] : o.basis) {
        long long& c = basis[k];
        c += v;
        if (c == 0) basis.erase(k);
    }
    return *this;
}

std::string to_string(const GroupElem& g) {
    std::string out = std::to_string(g.z);
    for (const auto& [k, v] : g.basis) out += " + " + std::to_string(v) + "*e" + std::to_string(k);
    return out;
}

std::size_t ModuleData::arity(const std::string& cell1) const {
    auto it = mins.find(cell1);
    return it == mins.end() ? 0 : it->second.size();
}

namespace {

using Form = std::vector<Affine>;

Affine var(std::size_t n, std::size_t i) {
    Affine a;
    a.coef.assign(n, 0);
    a.coef[i] = 1;
    return a;
}

Affine constant(std::size_t n, long long c) {
    Affine a;
    a.constant = c;
    a.coef.assign(n, 0);
    return a;
}

Affine add(Affine a, const Affine& b, long long k = 1) {
    if (a.coef.size() < b.coef.size()) a.coef.resize(b.coef.size(), 0);
    a.constant += k * b.constant;
    for (std::size_t i = 0; i < b.coef.size(); ++i) a.coef[i] += k * b.coef[i];
    return a;
}

// f is over len(args) variables; args are forms over n variables.
Affine subst(const Affine& f, const Form& args, std::size_t n) {
    Affine r = constant(n, f.constant);
    for (std::size_t i = 0; i < f.coef.size(); ++i)
        if (f.coef[i] != 0) r = add(r, args.at(i), f.coef[i]);
    return r;
}

GroupExpr subst(const GroupExpr& g, const Form& args, std::size_t n) {
    GroupExpr r;
    r.scalar = subst(g.scalar, args, n);
    for (const auto& [k, e] : g.basis) r.basis.emplace_back(k, subst(e, args, n));
    return r;
}

// Minimum over the box {v >= mins}; requires nonnegative coefficients.
long long corner(const Affine& a, const std::vector<long long>& mins) {
    long long r = a.constant;
    for (std::size_t i = 0; i < a.coef.size(); ++i) r += a.coef[i] * mins.at(i);
    return r;
}

bool nonneg_coefs(const Affine& a) {
    return std::all_of(a.coef.begin(), a.coef.end(), [](long long c) { return c >= 0; });
}

// a >= b everywhere on the box.
bool dominates(const Affine& a, const Affine& b, const std::vector<long long>& mins, long long margin = 0) {
    Affine d = add(a, b, -1);
    d.coef.resize(mins.size(), 0);
    return nonneg_coefs(d) && corner(d, mins) >= margin;
}

std::size_t arity_of(const ModuleData& m, const Word& w) {
    std::size_t n = 0;
    for (const auto& c : w.cells) n += m.arity(c);
    return n;
}

std::vector<long long> mins_of(const ModuleData& m, const Word& w) {
    std::vector<long long> out;
    for (const auto& c : w.cells) {
        auto it = m.mins.find(c);
        if (it != m.mins.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

// ---- parsing ----

struct Parser {
    detail::Cursor cur;
    const Polygraph& p;

    const Cell2* cell2(const std::string& name) const {
        for (const auto& c : p.cells2)
            if (c.name == name) return &c;
        return nullptr;
    }
    bool is_cell1(const std::string& name) const {
        return std::any_of(p.cells1.begin(), p.cells1.end(), [&](const Cell1& c) { return c.name == name; });
    }

    std::vector<std::string> vars(const std::string& stop) {
        std::vector<std::string> out;
        if (cur.is_sym(stop)) return out;
        out.push_back(cur.ident());
        while (cur.accept(",")) out.push_back(cur.ident());
        return out;
    }

    std::size_t var_index(const std::vector<std::string>& vs, const detail::Token& at) {
        auto it = std::find(vs.begin(), vs.end(), at.text);
        if (it == vs.end()) throw ParseError("unknown variable '" + at.text + "'", at.line, at.col);
        return static_cast<std::size_t>(it - vs.begin());
    }

    // term := INT | INT ["*"] IDENT | IDENT ["*" INT]
    Affine term(const std::vector<std::string>& vs, long long sign) {
        Affine a = constant(vs.size(), 0);
        if (cur.peek().kind == detail::Tok::Int) {
            long long k = cur.integer() * sign;
            cur.accept("*");
            if (cur.peek().kind == detail::Tok::Ident && cur.peek().text != "basis") {
                const auto& t = cur.next();
                a.coef[var_index(vs, t)] += k;
            } else {
                a.constant += k;
            }
            return a;
        }
        if (cur.peek().kind != detail::Tok::Ident) cur.fail("expected a term");
        const auto& t = cur.next();
        long long k = sign;
        if (cur.accept("*")) k *= cur.integer();
        a.coef[var_index(vs, t)] += k;
        return a;
    }

    Affine affine(const std::vector<std::string>& vs) {
        long long sign = cur.accept("-") ? -1 : 1;
        Affine a = term(vs, sign);
        while (cur.is_sym("+") || cur.is_sym("-")) {
            if (cur.is_sym("+") && cur.peek(1).kind == detail::Tok::Ident && cur.peek(1).text == "basis") break;
            sign = cur.next().text == "-" ? -1 : 1;
            if (cur.accept("-")) sign = -sign;
            a = add(a, term(vs, sign));
        }
        return a;
    }

    GroupExpr dexpr(const std::vector<std::string>& vs) {
        GroupExpr g;
        g.scalar = constant(vs.size(), 0);
        long long sign = 1;
        while (true) {
            while (cur.accept("-")) sign = -sign;
            if (cur.peek().kind == detail::Tok::Ident && cur.peek().text == "basis") {
                cur.next();
                cur.expect("(");
                Affine e = affine(vs);
                cur.expect(")");
                g.basis.emplace_back(sign, e);
            } else {
                g.scalar = add(g.scalar, term(vs, sign));
            }
            if (cur.accept("+")) {
                sign = 1;
            } else if (cur.accept("-")) {
                sign = -1;
            } else {
                return g;
            }
        }
    }

    void check_nonneg(const Affine& a, const std::string& where) {
        if (a.constant < 0 || !nonneg_coefs(a)) throw TypeError(where + ": negative coefficient");
    }

    void module(ModuleData& m, bool covariant) {
        const char* tag = covariant ? "X" : "Y";
        if (cur.peek().kind == detail::Tok::Ident && cur.peek().text == "trivial") {
            cur.next();
            cur.expect(";");
            m.trivial = true;
            return;
        }
        m.trivial = false;
        cur.expect("{");
        // wiredecl: IDENT ':' ...
        while (cur.peek().kind == detail::Tok::Ident && cur.peek(1).kind == detail::Tok::Sym &&
               cur.peek(1).text == ":") {
            const auto& t = cur.next();
            std::string name = t.text;
            if (!is_cell1(name)) throw ParseError("unknown 1-cell '" + name + "'", t.line, t.col);
            cur.expect(":");
            cur.keyword("nat");
            cur.expect("(");
            cur.keyword("min");
            cur.expect("=");
            long long mn = cur.integer();
            cur.expect(")");
            cur.expect(";");
            m.mins[name].push_back(mn);
        }
        while (!cur.is_sym("}")) {
            const auto& t = cur.next();
            if (t.kind != detail::Tok::Ident) throw ParseError("expected a 2-cell name", t.line, t.col);
            const Cell2* c = cell2(t.text);
            if (!c) throw ParseError("unknown 2-cell '" + t.text + "'", t.line, t.col);
            if (m.maps.count(c->name)) throw TypeError(std::string(tag) + "(" + c->name + ") declared twice");
            const Word& in = covariant ? c->src : c->tgt;
            const Word& out = covariant ? c->tgt : c->src;
            cur.expect("(");
            auto vs = vars(")");
            cur.expect(")");
            cur.expect("=");
            cur.expect("(");
            std::vector<Affine> outs;
            if (!cur.is_sym(")")) {
                outs.push_back(affine(vs));
                while (cur.accept(",")) outs.push_back(affine(vs));
            }
            cur.expect(")");
            cur.expect(";");
            std::string where = std::string(tag) + "(" + c->name + ")";
            if (vs.size() != arity_of(m, in))
                throw TypeError(where + " takes " + std::to_string(arity_of(m, in)) + " inputs, got " +
                                std::to_string(vs.size()));
            if (outs.size() != arity_of(m, out))
                throw TypeError(where + " yields " + std::to_string(arity_of(m, out)) + " outputs, got " +
                                std::to_string(outs.size()));
            auto in_mins = mins_of(m, in);
            auto out_mins = mins_of(m, out);
            for (std::size_t k = 0; k < outs.size(); ++k) {
                check_nonneg(outs[k], where);
                if (corner(outs[k], in_mins) < out_mins[k])
                    throw TypeError(where + ": output " + std::to_string(k) + " falls below its minimum");
            }
            m.maps[c->name] = std::move(outs);
        }
        cur.expect("}");
        for (const auto& c : p.cells2) {
            const Word& out = covariant ? c.tgt : c.src;
            if (!m.maps.count(c.name) && arity_of(m, out) > 0)
                throw TypeError(std::string(tag) + "(" + c.name + ") is missing");
        }
    }

    Interpretation run() {
        Interpretation I;
        cur.keyword("interpretation");
        I.name = cur.ident();
        cur.expect("{");
        cur.keyword("group");
        const auto& g = cur.peek();
        if (g.kind == detail::Tok::Ident && g.text == "Z") {
            I.group = Group::Z;
        } else if (g.kind == detail::Tok::Ident && g.text == "FreeAbelian") {
            I.group = Group::FreeAbelian;
        } else {
            cur.fail("expected 'Z' or 'FreeAbelian'");
        }
        cur.next();
        cur.expect(";");
        cur.keyword("X");
        module(I.X, true);
        cur.keyword("Y");
        module(I.Y, false);
        bool words = p.dimension == 2;
        if (words && (!I.X.trivial || !I.Y.trivial))
            throw TypeError("word interpretations need trivial X and Y");
        cur.keyword("d");
        cur.expect("{");
        while (!cur.is_sym("}")) {
            const auto& t = cur.next();
            if (t.kind != detail::Tok::Ident) throw ParseError("expected a cell name", t.line, t.col);
            std::string name = t.text;
            std::size_t nx = 0, ny = 0;
            if (words) {
                if (!is_cell1(name)) throw ParseError("unknown 1-cell '" + name + "'", t.line, t.col);
            } else {
                const Cell2* c = cell2(name);
                if (!c) throw ParseError("unknown 2-cell '" + name + "'", t.line, t.col);
                nx = arity_of(I.X, c->src);
                ny = arity_of(I.Y, c->tgt);
            }
            if (I.d.count(name)) throw TypeError("d(" + name + ") declared twice");
            cur.expect("(");
            auto xs = vars("|");
            cur.expect("|");
            auto ys = vars(")");
            cur.expect(")");
            cur.expect("=");
            if (xs.size() != nx || ys.size() != ny)
                throw TypeError("d(" + name + ") takes (" + std::to_string(nx) + "|" + std::to_string(ny) +
                                ") inputs, got (" + std::to_string(xs.size()) + "|" + std::to_string(ys.size()) +
                                ")");
            std::vector<std::string> all = xs;
            all.insert(all.end(), ys.begin(), ys.end());
            GroupExpr e = dexpr(all);
            if (!e.basis.empty() && I.group == Group::Z)
                throw TypeError("d(" + name + "): basis terms need group FreeAbelian");
            cur.expect(";");
            I.d[name] = std::move(e);
        }
        cur.expect("}");
        cur.expect("}");
        if (!cur.at_end()) cur.fail("expected end of input");
        return I;
    }
};

// ---- symbolic evaluation ----

struct Sym {
    std::vector<std::vector<Form>> xcuts;  // per cut, per wire
    std::vector<std::vector<Form>> ycuts;
    GroupExpr d;
};

std::vector<Form> split(const ModuleData& m, const detail::Sig& s, const detail::Ids& wires, const Form& flat) {
    std::vector<Form> out;
    std::size_t k = 0;
    for (int w : wires) {
        std::size_t a = m.arity(s.c1[static_cast<std::size_t>(w)]);
        out.emplace_back(flat.begin() + static_cast<long>(k), flat.begin() + static_cast<long>(k + a));
        k += a;
    }
    if (k != flat.size()) throw TypeError("interpretation arity does not match the boundary");
    return out;
}

Form flatten(const std::vector<Form>& cut, std::size_t from, std::size_t n) {
    Form out;
    for (std::size_t i = from; i < from + n; ++i) out.insert(out.end(), cut[i].begin(), cut[i].end());
    return out;
}

// x and y are forms over `n` variables at the source and target boundaries.
Sym evaluate(const Interpretation& I, const detail::Sig& s, const Polygraph& p, const detail::Frame& f,
             const Form& x, const Form& y, std::size_t n, bool with_d) {
    auto cuts = detail::cuts_of(s, f);
    Sym out;
    out.xcuts.push_back(split(I.X, s, cuts.front(), x));
    for (std::size_t k = 0; k < f.layers.size(); ++k) {
        const auto& l = f.layers[k];
        const auto& g = s.gens[static_cast<std::size_t>(l.gen)];
        const std::string& name = s.c2[static_cast<std::size_t>(l.gen)];
        auto cut = out.xcuts.back();
        std::size_t off = static_cast<std::size_t>(l.off);
        Form in = flatten(cut, off, g.src.size());
        Form res;
        auto it = I.X.maps.find(name);
        if (it != I.X.maps.end())
            for (const auto& a : it->second) res.push_back(subst(a, in, n));
        auto parts = split(I.X, s, g.tgt, res);
        cut.erase(cut.begin() + static_cast<long>(off), cut.begin() + static_cast<long>(off + g.src.size()));
        cut.insert(cut.begin() + static_cast<long>(off), parts.begin(), parts.end());
        out.xcuts.push_back(std::move(cut));
    }
    out.ycuts.assign(cuts.size(), {});
    out.ycuts.back() = split(I.Y, s, cuts.back(), y);
    for (std::size_t k = f.layers.size(); k-- > 0;) {
        const auto& l = f.layers[k];
        const auto& g = s.gens[static_cast<std::size_t>(l.gen)];
        const std::string& name = s.c2[static_cast<std::size_t>(l.gen)];
        auto cut = out.ycuts[k + 1];
        std::size_t off = static_cast<std::size_t>(l.off);
        Form in = flatten(cut, off, g.tgt.size());
        Form res;
        auto it = I.Y.maps.find(name);
        if (it != I.Y.maps.end())
            for (const auto& a : it->second) res.push_back(subst(a, in, n));
        auto parts = split(I.Y, s, g.src, res);
        cut.erase(cut.begin() + static_cast<long>(off), cut.begin() + static_cast<long>(off + g.tgt.size()));
        cut.insert(cut.begin() + static_cast<long>(off), parts.begin(), parts.end());
        out.ycuts[k] = std::move(cut);
    }
    out.d.scalar = constant(n, 0);
    if (!with_d) return out;
    (void)p;
    for (std::size_t k = 0; k < f.layers.size(); ++k) {
        const auto& l = f.layers[k];
        const auto& g = s.gens[static_cast<std::size_t>(l.gen)];
        auto it = I.d.find(s.c2[static_cast<std::size_t>(l.gen)]);
        if (it == I.d.end()) continue;
        std::size_t off = static_cast<std::size_t>(l.off);
        Form args = flatten(out.xcuts[k], off, g.src.size());
        Form ys = flatten(out.ycuts[k + 1], off, g.tgt.size());
        args.insert(args.end(), ys.begin(), ys.end());
        GroupExpr v = subst(it->second, args, n);
        out.d.scalar = add(out.d.scalar, v.scalar);
        out.d.basis.insert(out.d.basis.end(), v.basis.begin(), v.basis.end());
    }
    return out;
}

Form constants(const std::vector<long long>& v) {
    Form out;
    for (long long c : v) out.push_back(constant(0, c));
    return out;
}

void check_inputs(const std::vector<long long>& v, const std::vector<long long>& mins, const char* what) {
    if (v.size() != mins.size())
        throw TypeError(std::string(what) + " inputs: expected " + std::to_string(mins.size()) + " values, got " +
                        std::to_string(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] < mins[i])
            throw TypeError(std::string(what) + " input " + std::to_string(i) + " is below its minimum " +
                            std::to_string(mins[i]));
}

std::vector<long long> values(const std::vector<Form>& cut) {
    std::vector<long long> out;
    for (const auto& w : cut)
        for (const auto& a : w) out.push_back(a.constant);
    return out;
}

Word target_word(const Polygraph& p, const Diagram& d) { return target(p, d); }

}  // namespace

Interpretation parse_interpretation(const std::string& text, const Polygraph& p) {
    Parser ps{detail::Cursor(detail::tokenize(text)), p};
    return ps.run();
}

Interpretation load_interpretation(const std::string& path, const Polygraph& p) {
    return parse_interpretation(read_file(path), p);
}

std::vector<Interpretation> load_certificate(const std::string& path, const Polygraph& p) {
    detail::Cursor cur(detail::tokenize(read_file(path)));
    auto dir = std::filesystem::path(path).parent_path();
    std::vector<Interpretation> out;
    while (!cur.at_end()) {
        if (cur.accept(",") || cur.accept(";")) continue;
        std::string name = cur.ident();
        out.push_back(load_interpretation((dir / (name + ".interp")).string(), p));
    }
    if (out.empty()) throw Error("certificate '" + path + "' lists no interpretation");
    return out;
}

std::size_t x_arity(const Interpretation& I, const Word& w) { return arity_of(I.X, w); }
std::size_t y_arity(const Interpretation& I, const Word& w) { return arity_of(I.Y, w); }
std::vector<long long> x_mins(const Interpretation& I, const Word& w) { return mins_of(I.X, w); }
std::vector<long long> y_mins(const Interpretation& I, const Word& w) { return mins_of(I.Y, w); }

std::vector<long long> eval_X(const Interpretation& I, const Polygraph& p, const Diagram& d,
                              const std::vector<long long>& inputs) {
    check_inputs(inputs, x_mins(I, d.source), "X");
    const auto& s = p.sig();
    auto f = detail::frame_of(s, d);
    Form y = constants(std::vector<long long>(y_arity(I, target_word(p, d)), 0));
    return values(evaluate(I, s, p, f, constants(inputs), y, 0, false).xcuts.back());
}

std::vector<long long> eval_Y(const Interpretation& I, const Polygraph& p, const Diagram& d,
                              const std::vector<long long>& inputs) {
    check_inputs(inputs, y_mins(I, target_word(p, d)), "Y");
    const auto& s = p.sig();
    auto f = detail::frame_of(s, d);
    Form x = constants(x_mins(I, d.source));
    return values(evaluate(I, s, p, f, x, constants(inputs), 0, false).ycuts.front());
}

GroupElem eval_d(const Interpretation& I, const Polygraph& p, const Diagram& d, const std::vector<long long>& x,
                 const std::vector<long long>& y) {
    check_inputs(x, x_mins(I, d.source), "X");
    check_inputs(y, y_mins(I, target_word(p, d)), "Y");
    const auto& s = p.sig();
    auto f = detail::frame_of(s, d);
    auto r = evaluate(I, s, p, f, constants(x), constants(y), 0, true);
    GroupElem g;
    g.z = r.d.scalar.constant;
    for (const auto& [k, e] : r.d.basis) {
        GroupElem b;
        b.basis[e.constant] = k;
        g += b;
    }
    return g;
}

std::string to_string(RuleLevel r) {
    switch (r) {
        case RuleLevel::strict: return "strict";
        case RuleLevel::equal: return "equal";
        default: return "fails";
    }
}

namespace {

// Reason a level cannot order anything, or empty.
std::string level_problem(const Interpretation& I, const Polygraph& p) {
    if (I.group != Group::Z) return "group FreeAbelian cannot be used for ordering";
    for (const auto& [name, e] : I.d) {
        if (!e.basis.empty()) return "d(" + name + ") has basis terms";
        std::vector<long long> mins;
        if (p.dimension == 3) {
            for (const auto& c : p.cells2)
                if (c.name == name) {
                    mins = x_mins(I, c.src);
                    auto ym = y_mins(I, c.tgt);
                    mins.insert(mins.end(), ym.begin(), ym.end());
                }
        }
        Affine a = e.scalar;
        a.coef.resize(mins.size(), 0);
        if (!nonneg_coefs(a) || corner(a, mins) < 0) return "d(" + name + ") can be negative";
    }
    return {};
}

RuleLevel classify(const Affine& ds, const Affine& dt, const std::vector<long long>& mins, std::string& note) {
    Affine diff = add(ds, dt, -1);
    diff.coef.resize(mins.size(), 0);
    if (diff.is_zero()) return RuleLevel::equal;
    if (nonneg_coefs(diff) && corner(diff, mins) >= 1) return RuleLevel::strict;
    note = "d(s) - d(t) is not positive on all inputs";
    return RuleLevel::fails;
}

RuleLevel check_rule(const Interpretation& I, const Polygraph& p, const Cell3& c, std::string& note) {
    const auto& s = p.sig();
    Word u = c.src.source;
    Word v = target(p, c.src);
    std::size_t nx = x_arity(I, u), ny = y_arity(I, v), n = nx + ny;
    Form x, y;
    for (std::size_t i = 0; i < nx; ++i) x.push_back(var(n, i));
    for (std::size_t j = 0; j < ny; ++j) y.push_back(var(n, nx + j));
    auto mins = x_mins(I, u);
    auto ym = y_mins(I, v);
    mins.insert(mins.end(), ym.begin(), ym.end());
    auto rs = evaluate(I, s, p, detail::frame_of(s, c.src), x, y, n, true);
    auto rt = evaluate(I, s, p, detail::frame_of(s, c.tgt), x, y, n, true);
    auto xs = flatten(rs.xcuts.back(), 0, rs.xcuts.back().size());
    auto xt = flatten(rt.xcuts.back(), 0, rt.xcuts.back().size());
    auto ys = flatten(rs.ycuts.front(), 0, rs.ycuts.front().size());
    auto yt = flatten(rt.ycuts.front(), 0, rt.ycuts.front().size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!dominates(xs[i], xt[i], mins)) {
            note = "X(s) >= X(t) fails at coordinate " + std::to_string(i);
            return RuleLevel::fails;
        }
    for (std::size_t i = 0; i < ys.size(); ++i)
        if (!dominates(ys[i], yt[i], mins)) {
            note = "Y(s) >= Y(t) fails at coordinate " + std::to_string(i);
            return RuleLevel::fails;
        }
    return classify(rs.d.scalar, rt.d.scalar, mins, note);
}

long long word_weight(const Interpretation& I, const Word& w) {
    long long r = 0;
    for (const auto& c : w.cells) {
        auto it = I.d.find(c);
        if (it != I.d.end()) r += it->second.scalar.constant;
    }
    return r;
}

}  // namespace

CertificateReport check_certificate(const Polygraph& p, const std::vector<Interpretation>& levels) {
    CertificateReport rep;
    std::vector<std::string> problems;
    for (const auto& I : levels) problems.push_back(level_problem(I, p));
    auto add_rule = [&](const std::string& name, auto&& level_of) {
        RuleVerdict v;
        v.rule = name;
        for (std::size_t k = 0; k < levels.size(); ++k) {
            std::string note = problems[k];
            RuleLevel r = note.empty() ? level_of(levels[k], note) : RuleLevel::fails;
            v.levels.push_back(r);
            v.notes.push_back(note);
        }
        for (auto r : v.levels) {
            if (r == RuleLevel::equal) continue;
            v.decreasing = r == RuleLevel::strict;
            break;
        }
        rep.rules.push_back(std::move(v));
    };
    if (p.dimension == 2) {
        for (const auto& r : p.rules)
            add_rule(r.name, [&](const Interpretation& I, std::string& note) {
                long long a = word_weight(I, r.lhs), b = word_weight(I, r.rhs);
                if (a > b) return RuleLevel::strict;
                if (a == b) return RuleLevel::equal;
                note = "weight increases";
                return RuleLevel::fails;
            });
    } else {
        for (const auto& c : p.cells3)
            add_rule(c.name, [&](const Interpretation& I, std::string& note) { return check_rule(I, p, c, note); });
    }
    rep.terminating = !levels.empty() &&
                      std::all_of(rep.rules.begin(), rep.rules.end(), [](const RuleVerdict& v) { return v.decreasing; });
    return rep;
}

long long trace_value(const Trace& t, const std::map<std::string, long long>& dvals) {
    long long r = 0;
    for (const auto& st : t.steps) {
        auto it = dvals.find(st.rule);
        long long v = it == dvals.end() ? 0 : it->second;
        r += st.dir == Direction::forward ? v : -v;
    }
    return r;
}

ObstructionReport derivation_obstruction(const std::vector<Sphere>& candidates, const Sphere& target,
                                         const std::map<std::string, long long>& dvals) {
    ObstructionReport r;
    bool all_equal = true;
    for (const auto& c : candidates) {
        auto v = std::make_pair(trace_value(c.lhs, dvals), trace_value(c.rhs, dvals));
        all_equal = all_equal && v.first == v.second;
        r.candidate_values.push_back(v);
    }
    r.target_lhs = trace_value(target.lhs, dvals);
    r.target_rhs = trace_value(target.rhs, dvals);
    r.obstructed = all_equal && r.target_lhs != r.target_rhs;
    return r;
}

std::string certificate_json(const CertificateReport& r) {
    nlohmann::json j;
    j["verdict"] = r.terminating ? "terminating" : "rejected";
    j["rules"] = nlohmann::json::array();
    for (const auto& v : r.rules) {
        nlohmann::json lv = nlohmann::json::array();
        for (std::size_t k = 0; k < v.levels.size(); ++k) {
            nlohmann::json e{{"status", to_string(v.levels[k])}};
            if (!v.notes[k].empty()) e["note"] = v.notes[k];
            lv.push_back(e);
        }
        j["rules"].push_back({{"rule", v.rule}, {"levels", lv}, {"decreasing", v.decreasing}});
    }
    return j.dump();
}

}  // namespace polyrw
