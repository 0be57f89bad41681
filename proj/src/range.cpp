#include "wrap/range.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "wrap/error.hpp"

namespace wrap::path {

namespace {

// Thompson construction over {0,1}; symbol -1 is epsilon.
struct BitNfa {
    struct Edge {
        int symbol;
        int to;
    };
    std::vector<std::vector<Edge>> out;

    int add() {
        out.emplace_back();
        return static_cast<int>(out.size()) - 1;
    }
    void eps(int a, int b) { out[a].push_back({-1, b}); }
};

using Frag = std::pair<int, int>;

class BitRegexParser {
public:
    BitRegexParser(std::string_view in, BitNfa& nfa) : in_(in), nfa_(nfa) {}

    Frag run() {
        Frag f = alt();
        skip();
        if (pos_ != in_.size())
            fail("unexpected '" + std::string(1, in_[pos_]) + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::syntax_error, "range regex: " + msg, pos_);
    }

    void skip() {
        while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_])))
            ++pos_;
    }

    bool peek(char c) {
        skip();
        return pos_ < in_.size() && in_[pos_] == c;
    }

    bool starts_atom() {
        skip();
        return pos_ < in_.size() && (in_[pos_] == '0' || in_[pos_] == '1' || in_[pos_] == '(');
    }

    Frag alt() {
        Frag f = concat();
        while (peek('|')) {
            ++pos_;
            Frag g = concat();
            int s = nfa_.add(), e = nfa_.add();
            nfa_.eps(s, f.first);
            nfa_.eps(s, g.first);
            nfa_.eps(f.second, e);
            nfa_.eps(g.second, e);
            f = {s, e};
        }
        return f;
    }

    Frag concat() {
        Frag f = postfix();
        for (;;) {
            if (peek('.')) {
                ++pos_;
            } else if (!starts_atom()) {
                break;
            }
            Frag g = postfix();
            nfa_.eps(f.second, g.first);
            f.second = g.second;
        }
        return f;
    }

    Frag postfix() {
        std::size_t atom_start = skip_and_mark();
        Frag f = atom();
        std::size_t atom_end = pos_;
        for (;;) {
            if (peek('*')) {
                ++pos_;
                f = star(f);
            } else if (peek('+')) {
                ++pos_;
                Frag again = reparse(atom_start, atom_end);
                f = chain(f, star(again));
            } else if (peek('?')) {
                ++pos_;
                int s = nfa_.add(), e = nfa_.add();
                nfa_.eps(s, f.first);
                nfa_.eps(s, e);
                nfa_.eps(f.second, e);
                f = {s, e};
            } else if (peek('^')) {
                ++pos_;
                std::size_t n = exponent();
                if (n == 0) {
                    int s = nfa_.add();
                    f = {s, s};
                } else {
                    Frag acc = f;
                    for (std::size_t i = 1; i < n; ++i)
                        acc = chain(acc, reparse(atom_start, atom_end));
                    f = acc;
                }
            } else {
                break;
            }
        }
        return f;
    }

    std::size_t skip_and_mark() {
        skip();
        return pos_;
    }

    // Builds a fresh copy of the fragment for the atom text at [from, to).
    Frag reparse(std::size_t from, std::size_t to) {
        std::size_t saved = pos_;
        pos_ = from;
        std::string_view saved_in = in_;
        in_ = in_.substr(0, to);
        Frag f = atom();
        in_ = saved_in;
        pos_ = saved;
        return f;
    }

    Frag chain(Frag a, Frag b) {
        nfa_.eps(a.second, b.first);
        return {a.first, b.second};
    }

    Frag star(Frag f) {
        int s = nfa_.add(), e = nfa_.add();
        nfa_.eps(s, f.first);
        nfa_.eps(s, e);
        nfa_.eps(f.second, f.first);
        nfa_.eps(f.second, e);
        return {s, e};
    }

    std::size_t exponent() {
        skip();
        bool braced = peek('{');
        if (braced)
            ++pos_;
        skip();
        std::size_t start = pos_;
        while (pos_ < in_.size() && std::isdigit(static_cast<unsigned char>(in_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected exponent");
        std::size_t n = std::stoul(std::string(in_.substr(start, pos_ - start)));
        if (braced) {
            if (!peek('}'))
                fail("expected '}'");
            ++pos_;
        }
        return n;
    }

    Frag atom() {
        skip();
        if (pos_ >= in_.size())
            fail("unexpected end of expression");
        char c = in_[pos_];
        if (c == '(') {
            ++pos_;
            Frag f = alt();
            if (!peek(')'))
                fail("expected ')'");
            ++pos_;
            return f;
        }
        if (c == '0' || c == '1') {
            ++pos_;
            int s = nfa_.add(), e = nfa_.add();
            nfa_.out[s].push_back({c - '0', e});
            return {s, e};
        }
        fail("expected 0, 1 or '('");
    }

    std::string_view in_;
    std::size_t pos_ = 0;
    BitNfa& nfa_;
};

std::vector<int> closure(const BitNfa& nfa, std::vector<int> states) {
    std::vector<bool> seen(nfa.out.size());
    for (int s : states)
        seen[s] = true;
    std::vector<int> stack = states;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (const auto& e : nfa.out[s])
            if (e.symbol < 0 && !seen[e.to]) {
                seen[e.to] = true;
                states.push_back(e.to);
                stack.push_back(e.to);
            }
    }
    std::sort(states.begin(), states.end());
    return states;
}

// Density-one chain automaton for a position mask that is constant after
// `prefix.size()` positions. Every state accepts, so each length has
// exactly one word: the mask truncated to that length.
std::shared_ptr<const BitDfa> chain_dfa(const std::vector<bool>& prefix, bool tail) {
    auto dfa = std::make_shared<BitDfa>();
    const int n = static_cast<int>(prefix.size());
    dfa->next.assign(n + 1, {-1, -1});
    dfa->accept.assign(n + 1, true);
    for (int s = 0; s < n; ++s)
        dfa->next[s][prefix[s] ? 1 : 0] = s + 1;
    dfa->next[n][tail ? 1 : 0] = n;
    dfa->start = 0;
    return dfa;
}

std::shared_ptr<const BitDfa> intervals_dfa(const std::vector<Range::Interval>& parts) {
    std::size_t bound = 0;
    for (const auto& [i, j] : parts)
        bound = std::max(bound, j + 1);
    std::vector<bool> mask(bound, false);
    for (const auto& [i, j] : parts)
        for (std::size_t p = i; p <= j; ++p)
            mask[p] = true;
    return chain_dfa(mask, false);
}

std::size_t parse_index(std::string_view s, std::string_view whole) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw Error(ErrorKind::syntax_error, "bad range '" + std::string(whole) + "'");
    return std::stoul(std::string(s));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

BitDfa compile_bit_regex(std::string_view text) {
    BitNfa nfa;
    auto [s, e] = BitRegexParser(text, nfa).run();
    BitDfa dfa;
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> sets;
    auto intern = [&](std::vector<int> set) {
        auto [it, inserted] = ids.emplace(set, static_cast<int>(sets.size()));
        if (inserted) {
            sets.push_back(std::move(set));
            dfa.next.push_back({-1, -1});
            dfa.accept.push_back(false);
        }
        return it->second;
    };
    dfa.start = intern(closure(nfa, {s}));
    for (std::size_t d = 0; d < sets.size(); ++d) {
        dfa.accept[d] = std::binary_search(sets[d].begin(), sets[d].end(), e);
        for (int bit = 0; bit < 2; ++bit) {
            std::vector<int> moved;
            for (int q : sets[d])
                for (const auto& edge : nfa.out[q])
                    if (edge.symbol == bit)
                        moved.push_back(edge.to);
            if (!moved.empty())
                dfa.next[d][bit] = intern(closure(nfa, std::move(moved)));
        }
    }
    return dfa;
}

int count_words(const BitDfa& dfa, std::size_t k) {
    const std::size_t n = dfa.accept.size();
    std::vector<int> cur(n), nxt(n);
    for (std::size_t s = 0; s < n; ++s)
        cur[s] = dfa.accept[s] ? 1 : 0;
    for (std::size_t len = 0; len < k; ++len) {
        for (std::size_t s = 0; s < n; ++s) {
            int c = 0;
            for (int bit = 0; bit < 2; ++bit)
                if (int t = dfa.next[s][bit]; t >= 0)
                    c = std::min(2, c + cur[t]);
            nxt[s] = c;
        }
        std::swap(cur, nxt);
    }
    return cur[dfa.start];
}

Range Range::star() { return Range(Kind::star, {}, {}, chain_dfa({}, true)); }

Range Range::index(std::size_t i) {
    std::vector<Interval> parts{{i, i}};
    auto dfa = intervals_dfa(parts);
    return Range(Kind::index, std::move(parts), {}, std::move(dfa));
}

Range Range::interval(std::size_t i, std::size_t j) {
    if (i > j)
        throw Error(ErrorKind::syntax_error, "range interval " + std::to_string(i) + "-" + std::to_string(j) +
                                                 " has i > j");
    std::vector<Interval> parts{{i, j}};
    auto dfa = intervals_dfa(parts);
    return Range(Kind::interval, std::move(parts), {}, std::move(dfa));
}

Range Range::union_of(std::vector<Interval> parts) {
    for (const auto& [i, j] : parts)
        if (i > j)
            throw Error(ErrorKind::syntax_error, "range interval has i > j");
    auto dfa = intervals_dfa(parts);
    return Range(Kind::interval_union, std::move(parts), {}, std::move(dfa));
}

Range Range::last() { return Range(Kind::last, {}, {}, chain_dfa({true}, false)); }

Range Range::raw(std::string_view regex) {
    auto dfa = std::make_shared<BitDfa>(compile_bit_regex(regex));
    bool any = false;
    for (std::size_t k = 0; k <= density_probe; ++k) {
        int c = count_words(*dfa, k);
        if (c > 1)
            throw Error(ErrorKind::multiple_words, "range regex '" + std::string(regex) +
                                                       "' is not density one: several words of length " +
                                                       std::to_string(k));
        any = any || c == 1;
    }
    if (!any)
        throw Error(ErrorKind::no_word_of_length,
                    "range regex '" + std::string(regex) + "' accepts no word up to the probe length");
    return Range(Kind::raw, {}, std::string(trim(regex)), std::move(dfa));
}

std::string Range::to_string() const {
    switch (kind_) {
    case Kind::star: return "*";
    case Kind::last: return "last";
    case Kind::raw: return "regex:" + source_;
    case Kind::index: return std::to_string(intervals_.front().first);
    case Kind::interval:
    case Kind::interval_union: {
        std::string out;
        for (std::size_t n = 0; n < intervals_.size(); ++n) {
            if (n)
                out += ',';
            auto [i, j] = intervals_[n];
            out += i == j ? std::to_string(i) : std::to_string(i) + "-" + std::to_string(j);
        }
        return out;
    }
    }
    return "*";
}

Range parse_range(std::string_view text) {
    auto s = trim(text);
    if (s == "*")
        return Range::star();
    if (s == "last")
        return Range::last();
    if (s.starts_with("regex:"))
        return Range::raw(s.substr(6));
    std::vector<Range::Interval> parts;
    std::size_t start = 0;
    for (;;) {
        auto comma = s.find(',', start);
        auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        auto dash = piece.find('-');
        if (dash == std::string_view::npos) {
            auto i = parse_index(piece, text);
            parts.emplace_back(i, i);
        } else {
            auto i = parse_index(trim(piece.substr(0, dash)), text);
            auto j = parse_index(trim(piece.substr(dash + 1)), text);
            if (i > j)
                throw Error(ErrorKind::syntax_error, "range '" + std::string(text) + "' has i > j");
            parts.emplace_back(i, j);
        }
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (parts.size() == 1) {
        auto [i, j] = parts.front();
        return i == j ? Range::index(i) : Range::interval(i, j);
    }
    return Range::union_of(std::move(parts));
}

std::string unique_word(const Range& range, std::size_t k) {
    const BitDfa& dfa = range.automaton();
    const std::size_t n = dfa.accept.size();
    // counts[len][s]: accepted words of length len from s, saturated at 2.
    std::vector<std::vector<int>> counts(k + 1, std::vector<int>(n));
    for (std::size_t s = 0; s < n; ++s)
        counts[0][s] = dfa.accept[s] ? 1 : 0;
    for (std::size_t len = 1; len <= k; ++len)
        for (std::size_t s = 0; s < n; ++s) {
            int c = 0;
            for (int bit = 0; bit < 2; ++bit)
                if (int t = dfa.next[s][bit]; t >= 0)
                    c = std::min(2, c + counts[len - 1][t]);
            counts[len][s] = c;
        }
    int total = counts[k][dfa.start];
    if (total == 0)
        throw Error(ErrorKind::no_word_of_length,
                    "range " + range.to_string() + " has no word of length " + std::to_string(k));
    if (total > 1)
        throw Error(ErrorKind::multiple_words,
                    "range " + range.to_string() + " has several words of length " + std::to_string(k));
    std::string word;
    int s = dfa.start;
    for (std::size_t pos = 0; pos < k; ++pos) {
        std::size_t rest = k - pos - 1;
        for (int bit = 0; bit < 2; ++bit) {
            int t = dfa.next[s][bit];
            if (t >= 0 && counts[rest][t] > 0) {
                word += static_cast<char>('0' + bit);
                s = t;
                break;
            }
        }
    }
    return word;
}

std::vector<doc::NodeId> apply_range(std::span<const doc::NodeId> nodes, const Range& range, Direction dir) {
    if (range.is_star())
        return {nodes.begin(), nodes.end()};
    bool backward = (dir == Direction::backward) != range.matches_backward();
    std::string word = unique_word(range, nodes.size());
    std::vector<doc::NodeId> out;
    const std::size_t k = nodes.size();
    for (std::size_t p = 0; p < k; ++p) {
        std::size_t at = backward ? k - 1 - p : p;
        if (word[p] == '1')
            out.push_back(nodes[at]);
    }
    if (backward)
        std::reverse(out.begin(), out.end());
    return out;
}

std::vector<doc::NodeId> select(std::span<const doc::NodeId> nodes, const Range& range) {
    try {
        return apply_range(nodes, range);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::no_word_of_length)
            return {};
        throw;
    }
}

std::vector<doc::NodeId> subelem_range(const doc::DocTree& t, doc::NodeId v0, const Path& path, const Range& range) {
    auto all = subelem(t, v0, path);
    return select(all, range);
}

} // namespace wrap::path
