// Word rewriting (2-polygraph mode): normalization, critical pairs, Squier basis.
#pragma once

#include <string>
#include <vector>

#include "polyrw/rewrite.hpp"

namespace polyrw {

struct WordStep {
    std::string rule;
    std::size_t pos = 0;

    bool operator==(const WordStep& o) const { return rule == o.rule && pos == o.pos; }
};

enum class WordPairKind { overlap, inclusion };

struct WordCriticalPair {
    WordPairKind kind = WordPairKind::overlap;
    Word peak;
    WordStep a, b;
};

struct WordNormalizeResult {
    Word result;
    std::vector<WordStep> steps;
    NormStatus status = NormStatus::normal;
};

struct WordSphere {
    std::string name;
    Word source;
    std::vector<WordStep> lhs, rhs;  // both start at source and end at a common word
};

struct WordPairReport {
    WordCriticalPair pair;
    Word normal_a, normal_b;
    std::vector<WordStep> trace_a, trace_b;  // start with the branching step
    bool complete = true;                    // both sides reached a normal form
    bool joinable = false;
};

struct WordReport {
    std::vector<WordPairReport> pairs;
    bool joinable = true;
    std::vector<WordSphere> basis;
    std::string verdict;  // fdt_certified | inconclusive | not_confluent
};

Word apply_word_step(const Polygraph& p, const Word& w, const WordStep& s);
std::vector<WordStep> word_redexes(const Polygraph& p, const Word& w);

// Leftmost-innermost strategy.
WordNormalizeResult normalize_word(const Polygraph& p, const Word& w, std::size_t max_steps = default_max_steps);

std::vector<WordCriticalPair> word_critical_pairs(const Polygraph& p);

// `terminating` states that a termination certificate was accepted; without it
// joinability is conditional and the verdict stays inconclusive.
WordReport word_confluence_report(const Polygraph& p, bool terminating, std::size_t max_steps = default_max_steps);

std::string to_string(WordPairKind k);
std::string word_report_json(const WordReport& r);

}  // namespace polyrw
