#include "wrap/path.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "wrap/error.hpp"

namespace wrap::path {

namespace {

bool is_tag_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_tag_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':';
}

class RegexParser {
public:
    explicit RegexParser(std::string_view in) : in_(in) {}

    Regex run() {
        Regex re = alt();
        skip();
        if (pos_ != in_.size())
            fail("unexpected '" + std::string(1, in_[pos_]) + "'");
        return re;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::syntax_error, "path regex: " + msg, pos_);
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
        if (pos_ >= in_.size())
            return false;
        char c = in_[pos_];
        return is_tag_start(c) || c == '_' || c == '^' || c == '(' || c == '#';
    }

    Regex alt() {
        std::vector<Regex> parts{concat()};
        while (peek('|')) {
            ++pos_;
            parts.push_back(concat());
        }
        if (parts.size() == 1)
            return std::move(parts.front());
        std::vector<Regex> flat;
        for (auto& p : parts) {
            if (p.kind == Regex::Kind::alt)
                for (auto& q : p.parts) flat.push_back(std::move(q));
            else
                flat.push_back(std::move(p));
        }
        return Regex::make_alt(std::move(flat));
    }

    Regex concat() {
        std::vector<Regex> parts{postfix()};
        for (;;) {
            if (peek('.')) {
                ++pos_;
                parts.push_back(postfix());
            } else if (starts_atom()) {
                parts.push_back(postfix());
            } else {
                break;
            }
        }
        if (parts.size() == 1)
            return std::move(parts.front());
        std::vector<Regex> flat;
        for (auto& p : parts) {
            if (p.kind == Regex::Kind::concat)
                for (auto& q : p.parts) flat.push_back(std::move(q));
            else
                flat.push_back(std::move(p));
        }
        return Regex::make_concat(std::move(flat));
    }

    Regex postfix() {
        Regex re = atom();
        while (peek('*')) {
            ++pos_;
            if (re.kind != Regex::Kind::star)
                re = Regex::make_star(std::move(re));
        }
        return re;
    }

    std::string tag_name() {
        std::size_t start = pos_;
        if (pos_ < in_.size() && in_[pos_] == '#') {
            ++pos_;
            while (pos_ < in_.size() && is_tag_char(in_[pos_]))
                ++pos_;
            std::string name(in_.substr(start, pos_ - start));
            if (name != doc::text_tag)
                fail("only #text may start with '#'");
            return name;
        }
        if (pos_ >= in_.size() || !is_tag_start(in_[pos_]))
            fail("expected tag name");
        while (pos_ < in_.size() && is_tag_char(in_[pos_]))
            ++pos_;
        std::string name(in_.substr(start, pos_ - start));
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return name;
    }

    Regex atom() {
        skip();
        if (pos_ >= in_.size())
            fail("unexpected end of expression");
        char c = in_[pos_];
        if (c == '(') {
            ++pos_;
            Regex re = alt();
            if (!peek(')'))
                fail("expected ')'");
            ++pos_;
            return re;
        }
        if (c == '_') {
            ++pos_;
            return Regex::make_any();
        }
        if (c == '^') {
            ++pos_;
            skip();
            return Regex::make_not_tag(tag_name());
        }
        return Regex::make_tag(tag_name());
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

int precedence(const Regex& re) {
    switch (re.kind) {
    case Regex::Kind::alt: return 0;
    case Regex::Kind::concat: return 1;
    case Regex::Kind::star: return 2;
    default: return 3;
    }
}

void print(const Regex& re, int ctx, std::string& out) {
    bool paren = precedence(re) < ctx;
    if (paren)
        out += '(';
    switch (re.kind) {
    case Regex::Kind::tag: out += re.tag; break;
    case Regex::Kind::not_tag: out += "^" + re.tag; break;
    case Regex::Kind::any: out += '_'; break;
    case Regex::Kind::star:
        print(re.parts.front(), 3, out);
        out += '*';
        break;
    case Regex::Kind::concat:
        for (std::size_t i = 0; i < re.parts.size(); ++i) {
            if (i)
                out += '.';
            print(re.parts[i], 2, out);
        }
        break;
    case Regex::Kind::alt:
        for (std::size_t i = 0; i < re.parts.size(); ++i) {
            if (i)
                out += '|';
            print(re.parts[i], 1, out);
        }
        break;
    }
    if (paren)
        out += ')';
}

// Thompson NFA. Symbol edges carry the atom they came from.
struct Nfa {
    struct Edge {
        const Regex* symbol; // nullptr: epsilon
        int to;
    };
    std::vector<std::vector<Edge>> out;

    int add() {
        out.emplace_back();
        return static_cast<int>(out.size()) - 1;
    }

    std::pair<int, int> build(const Regex& re) {
        switch (re.kind) {
        case Regex::Kind::tag:
        case Regex::Kind::not_tag:
        case Regex::Kind::any: {
            int s = add(), e = add();
            out[s].push_back({&re, e});
            return {s, e};
        }
        case Regex::Kind::concat: {
            auto [s, e] = build(re.parts.front());
            for (std::size_t i = 1; i < re.parts.size(); ++i) {
                auto [s2, e2] = build(re.parts[i]);
                out[e].push_back({nullptr, s2});
                e = e2;
            }
            return {s, e};
        }
        case Regex::Kind::alt: {
            int s = add(), e = add();
            for (const auto& p : re.parts) {
                auto [ps, pe] = build(p);
                out[s].push_back({nullptr, ps});
                out[pe].push_back({nullptr, e});
            }
            return {s, e};
        }
        case Regex::Kind::star: {
            int s = add(), e = add();
            auto [is, ie] = build(re.parts.front());
            out[s].push_back({nullptr, is});
            out[s].push_back({nullptr, e});
            out[ie].push_back({nullptr, is});
            out[ie].push_back({nullptr, e});
            return {s, e};
        }
        }
        return {0, 0};
    }

    std::vector<int> closure(std::vector<int> states) const {
        std::vector<bool> seen(out.size());
        std::vector<int> stack = states;
        for (int s : states)
            seen[s] = true;
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            for (const auto& e : out[s]) {
                if (!e.symbol && !seen[e.to]) {
                    seen[e.to] = true;
                    states.push_back(e.to);
                    stack.push_back(e.to);
                }
            }
        }
        std::sort(states.begin(), states.end());
        return states;
    }
};

void collect_tags(const Regex& re, std::set<std::string>& tags) {
    if ((re.kind == Regex::Kind::tag || re.kind == Regex::Kind::not_tag) && re.tag != doc::text_tag)
        tags.insert(re.tag);
    for (const auto& p : re.parts)
        collect_tags(p, tags);
}

} // namespace

Regex parse_regex(std::string_view text) { return RegexParser(text).run(); }

std::string to_string(const Regex& re) {
    std::string out;
    print(re, 0, out);
    return out;
}

PathAutomaton::PathAutomaton(const Regex& re) {
    std::set<std::string> tags;
    collect_tags(re, tags);
    int n = 0;
    for (const auto& t : tags)
        classes_.emplace(t, n++);
    text_class_ = n++;
    other_class_ = n++;
    const int class_count = n;

    auto matches = [&](const Regex& sym, int cls) {
        switch (sym.kind) {
        case Regex::Kind::tag:
            return sym.tag == doc::text_tag ? cls == text_class_ : cls == classes_.find(sym.tag)->second;
        case Regex::Kind::any:
            return cls != text_class_;
        case Regex::Kind::not_tag: {
            if (cls == text_class_)
                return false;
            auto it = classes_.find(sym.tag);
            return it == classes_.end() || cls != it->second;
        }
        default:
            return false;
        }
    };

    Nfa nfa;
    auto [s, e] = nfa.build(re);
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> sets;
    auto intern = [&](std::vector<int> set) {
        auto [it, inserted] = ids.emplace(set, static_cast<int>(sets.size()));
        if (inserted) {
            sets.push_back(std::move(set));
            next_.emplace_back(class_count, dead);
            accept_.push_back(false);
        }
        return it->second;
    };
    start_ = intern(nfa.closure({s}));
    for (std::size_t d = 0; d < sets.size(); ++d) {
        accept_[d] = std::binary_search(sets[d].begin(), sets[d].end(), e);
        for (int cls = 0; cls < class_count; ++cls) {
            std::vector<int> moved;
            for (int q : sets[d])
                for (const auto& edge : nfa.out[q])
                    if (edge.symbol && matches(*edge.symbol, cls))
                        moved.push_back(edge.to);
            if (moved.empty())
                continue;
            int target = intern(nfa.closure(std::move(moved)));
            next_[d][cls] = target;
        }
    }
}

int PathAutomaton::class_of(std::string_view label) const {
    if (label == doc::text_tag)
        return text_class_;
    auto it = classes_.find(label);
    return it == classes_.end() ? other_class_ : it->second;
}

int PathAutomaton::step(int state, std::string_view label) const {
    if (state == dead)
        return dead;
    return next_[state][class_of(label)];
}

bool PathAutomaton::accepts(std::span<const std::string> word) const {
    int s = start_;
    for (const auto& label : word)
        s = step(s, label);
    return accepting(s);
}

Path::Path(Regex re) : regex_(std::move(re)), automaton_(std::make_shared<PathAutomaton>(regex_)) {}

std::vector<doc::NodeId> subelem(const doc::DocTree& t, doc::NodeId v0, const PathAutomaton& path) {
    std::vector<doc::NodeId> out;
    if (path.accepts_empty())
        out.push_back(v0);
    std::vector<std::pair<doc::NodeId, int>> stack{{v0, path.start()}};
    while (!stack.empty()) {
        auto [v, state] = stack.back();
        stack.pop_back();
        for (doc::NodeId c : t.children(v)) {
            int next = path.step(state, t.label(c));
            if (next == PathAutomaton::dead)
                continue;
            if (path.accepting(next))
                out.push_back(c);
            stack.emplace_back(c, next);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool contains_string(const doc::DocTree& t, doc::NodeId v, std::string_view s) { return t.txt(v) == s; }

} // namespace wrap::path
