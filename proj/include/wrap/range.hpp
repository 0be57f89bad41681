#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wrap/doctree.hpp"
#include "wrap/path.hpp"

namespace wrap::path {

enum class Direction { forward, backward };

/// Complete-or-partial DFA over {0,1}; -1 is the dead state.
struct BitDfa {
    std::vector<std::array<int, 2>> next;
    std::vector<bool> accept;
    int start = 0;
};

/// Builds a DFA for a regular expression over {0,1}. Syntax: `0`, `1`,
/// `.` or juxtaposition, `|`, postfix `*`, `+`, `?`, `^n` or `^{n}`, parentheses.
BitDfa compile_bit_regex(std::string_view text);

/// Position selector over a document-ordered node sequence. Every range is
/// backed by an automaton accepting a density-one language over {0,1}; the
/// unique word of length |S| marks the selected positions. Surface ranges
/// are 0-based.
class Range {
public:
    enum class Kind { star, index, interval, interval_union, last, raw };
    using Interval = std::pair<std::size_t, std::size_t>;

    Range() : Range(star()) {}

    static Range star();
    static Range index(std::size_t i);
    static Range interval(std::size_t i, std::size_t j);
    static Range union_of(std::vector<Interval> parts);
    static Range last();
    // Checks density one on every length up to the probe bound.
    static Range raw(std::string_view regex);

    static constexpr std::size_t density_probe = 32;

    Kind kind() const noexcept { return kind_; }
    bool is_star() const noexcept { return kind_ == Kind::star; }
    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    const std::string& source() const noexcept { return source_; }
    // `last` matches against reverse document order.
    bool matches_backward() const noexcept { return kind_ == Kind::last; }
    const BitDfa& automaton() const noexcept { return *dfa_; }

    std::string to_string() const;

    friend bool operator==(const Range& a, const Range& b) {
        return a.kind_ == b.kind_ && a.intervals_ == b.intervals_ && a.source_ == b.source_;
    }

private:
    Range(Kind kind, std::vector<Interval> intervals, std::string source, std::shared_ptr<const BitDfa> dfa)
        : kind_(kind), intervals_(std::move(intervals)), source_(std::move(source)), dfa_(std::move(dfa)) {}

    Kind kind_;
    std::vector<Interval> intervals_;
    std::string source_;
    std::shared_ptr<const BitDfa> dfa_;
};

/// Surface syntax: `*`, `i`, `i-j`, comma-separated unions, `last`, `regex:<01-regex>`.
Range parse_range(std::string_view text);

/// The single word of length k accepted by the range automaton, as a string
/// of '0'/'1'. Throws NoWordOfLength or MultipleWords.
std::string unique_word(const Range& range, std::size_t k);

/// Number of length-k words accepted, saturated at 2.
int count_words(const BitDfa& dfa, std::size_t k);

/// S[ρ]: S in document order; the result keeps document order. With
/// Direction::backward the word is matched against reverse document order.
/// Throws NoWordOfLength when the range has no word of length |S|.
std::vector<doc::NodeId> apply_range(std::span<const doc::NodeId> nodes, const Range& range,
                                     Direction dir = Direction::forward);

/// apply_range for evaluators: a missing word selects nothing.
std::vector<doc::NodeId> select(std::span<const doc::NodeId> nodes, const Range& range);

/// subelem_{π,ρ}(v0, ·).
std::vector<doc::NodeId> subelem_range(const doc::DocTree& t, doc::NodeId v0, const Path& path, const Range& range);

} // namespace wrap::path
