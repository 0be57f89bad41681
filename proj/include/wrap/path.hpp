#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wrap/doctree.hpp"

namespace wrap::path {

/// Regular expression over tag names.
///
/// Textual syntax: tags, `_` (any element tag), `^t` (any element tag but t),
/// `.` or juxtaposition for concatenation, `|`, postfix `*`, parentheses.
/// `#text` names text leaves; `_` and `^t` never match them.
struct Regex {
    enum class Kind { tag, not_tag, any, concat, alt, star };

    Kind kind = Kind::any;
    std::string tag;
    std::vector<Regex> parts;

    static Regex make_tag(std::string t) { return {Kind::tag, std::move(t), {}}; }
    static Regex make_not_tag(std::string t) { return {Kind::not_tag, std::move(t), {}}; }
    static Regex make_any() { return {Kind::any, {}, {}}; }
    static Regex make_concat(std::vector<Regex> ps) { return {Kind::concat, {}, std::move(ps)}; }
    static Regex make_alt(std::vector<Regex> ps) { return {Kind::alt, {}, std::move(ps)}; }
    static Regex make_star(Regex inner) { return {Kind::star, {}, {std::move(inner)}}; }

    friend bool operator==(const Regex&, const Regex&) = default;
};

Regex parse_regex(std::string_view text);
std::string to_string(const Regex& re);

/// Deterministic automaton for L(regex). Labels are folded into classes:
/// one per tag mentioned in the expression, one for text leaves and one for
/// every other tag, so the transition table is complete and immutable.
class PathAutomaton {
public:
    static constexpr int dead = -1;

    explicit PathAutomaton(const Regex& re);

    int start() const noexcept { return start_; }
    int step(int state, std::string_view label) const;
    bool accepting(int state) const { return state != dead && accept_[state]; }
    bool accepts(std::span<const std::string> word) const;
    bool accepts_empty() const { return accepting(start_); }
    std::size_t state_count() const noexcept { return accept_.size(); }

private:
    int class_of(std::string_view label) const;

    std::map<std::string, int, std::less<>> classes_;
    int text_class_ = 0;
    int other_class_ = 0;
    int start_ = 0;
    std::vector<std::vector<int>> next_;
    std::vector<bool> accept_;
};

/// A parsed path together with its compiled automaton.
class Path {
public:
    Path() : Path(Regex::make_any()) {}
    explicit Path(Regex re);
    static Path parse(std::string_view text) { return Path(parse_regex(text)); }

    const Regex& regex() const noexcept { return regex_; }
    const PathAutomaton& automaton() const noexcept { return *automaton_; }
    std::string to_string() const { return path::to_string(regex_); }

    friend bool operator==(const Path& a, const Path& b) { return a.regex_ == b.regex_; }

private:
    Regex regex_;
    std::shared_ptr<const PathAutomaton> automaton_;
};

/// All v below (or at) v0 whose label word is in L(path), in document order.
/// The word consists of the labels strictly below v0 down to and including v.
std::vector<doc::NodeId> subelem(const doc::DocTree& t, doc::NodeId v0, const PathAutomaton& path);
inline std::vector<doc::NodeId> subelem(const doc::DocTree& t, doc::NodeId v0, const Path& path) {
    return subelem(t, v0, path.automaton());
}

/// Exact equality of the node's text value with s.
bool contains_string(const doc::DocTree& t, doc::NodeId v, std::string_view s);

} // namespace wrap::path
