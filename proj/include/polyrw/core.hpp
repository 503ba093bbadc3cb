// Core value types shared by every module: words, diagrams, polygraphs.
#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyrw {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Boundary typing, globularity and composability failures.
class TypeError : public Error {
public:
    using Error::Error;
};

// A 1-cell of the free 1-category. `point` types the empty word and is kept
// as the source 0-cell otherwise; equality ignores it for non-empty words.
struct Word {
    std::vector<std::string> cells;
    std::string point;

    Word() = default;
    Word(std::vector<std::string> c, std::string p = {}) : cells(std::move(c)), point(std::move(p)) {}

    bool empty() const { return cells.empty(); }
    std::size_t size() const { return cells.size(); }
};

bool operator==(const Word& a, const Word& b);
inline bool operator!=(const Word& a, const Word& b) { return !(a == b); }
std::string to_string(const Word& w);

struct Slice {
    Word left;
    std::string gen;
    Word right;
};

// A 2-cell of the free 2-category as a top-to-bottom list of whiskered generators.
struct Diagram {
    Word source;
    std::vector<Slice> slices;

    std::size_t size() const { return slices.size(); }
};

bool operator==(const Slice& a, const Slice& b);
bool operator==(const Diagram& a, const Diagram& b);
inline bool operator!=(const Diagram& a, const Diagram& b) { return !(a == b); }

struct Cell1 {
    std::string name;
    std::string src;
    std::string tgt;
};

struct Cell2 {
    std::string name;
    Word src;
    Word tgt;
};

struct Cell3 {
    std::string name;
    Diagram src;
    Diagram tgt;
};

struct WordRule {
    std::string name;
    Word lhs;
    Word rhs;
};

namespace detail {
struct Sig;
}

struct Polygraph {
    std::string name;
    int dimension = 3;
    std::vector<std::string> cells0;
    std::vector<Cell1> cells1;
    std::vector<Cell2> cells2;
    std::vector<Cell3> cells3;
    std::vector<WordRule> rules;  // dimension 2 only

    // Index tables derived from the cells; built on first use.
    const detail::Sig& sig() const;

private:
    mutable std::shared_ptr<const detail::Sig> sig_;
};

bool operator==(const Polygraph& a, const Polygraph& b);

}  // namespace polyrw
