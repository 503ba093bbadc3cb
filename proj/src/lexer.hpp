// Tokenizer shared by the polygraph and interpretation file parsers.
#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "polyrw/core.hpp"

namespace polyrw::detail {

enum class Tok { Ident, Int, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int col = 1;
};

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto adv = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') adv(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.kind = Tok::Ident;
            t.text = src.substr(i, j - i);
            adv(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Tok::Int;
            t.text = src.substr(i, j - i);
            adv(j - i);
        } else if ((c == '-' || c == '=') && i + 1 < src.size() && src[i + 1] == '>') {
            t.kind = Tok::Sym;
            t.text = src.substr(i, 2);
            adv(2);
        } else if (std::string("{}():;,*|=+-").find(c) != std::string::npos) {
            t.kind = Tok::Sym;
            t.text = std::string(1, c);
            adv(1);
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

// Cursor over a token vector with the usual expect/accept helpers.
class Cursor {
public:
    explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t k = pos_ + ahead;
        return k < toks_.size() ? toks_[k] : toks_.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool is_sym(const std::string& sym) const { return peek().kind == Tok::Sym && peek().text == sym; }
    bool at_end() const { return peek().kind == Tok::End; }
    bool accept(const std::string& sym) {
        if (!is_sym(sym)) return false;
        next();
        return true;
    }
    void expect(const std::string& sym) {
        if (!is_sym(sym)) fail("expected '" + sym + "'");
        next();
    }
    void keyword(const std::string& kw) {
        if (peek().kind != Tok::Ident || peek().text != kw) fail("expected '" + kw + "'");
        next();
    }
    std::string ident() {
        if (peek().kind != Tok::Ident) fail("expected identifier");
        return next().text;
    }
    long long integer() {
        if (peek().kind != Tok::Int) fail("expected integer");
        return std::stoll(next().text);
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + ", got " + got, t.line, t.col);
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace polyrw::detail
