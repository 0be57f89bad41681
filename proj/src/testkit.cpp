#include "wrap/testkit.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace wrap::testkit {

namespace {

using Kind = Re::Kind;

ReP mk(Kind k, std::string tag = {}, ReP a = nullptr, ReP b = nullptr) {
    auto r = std::make_shared<Re>();
    r->kind = k;
    r->tag = std::move(tag);
    r->a = std::move(a);
    r->b = std::move(b);
    return r;
}

const ReP& empty_re() {
    static const ReP r = mk(Kind::empty);
    return r;
}
const ReP& eps_re() {
    static const ReP r = mk(Kind::eps);
    return r;
}

ReP cat(ReP a, ReP b) {
    if (a->kind == Kind::empty || b->kind == Kind::empty)
        return empty_re();
    if (a->kind == Kind::eps)
        return b;
    if (b->kind == Kind::eps)
        return a;
    return mk(Kind::cat, {}, std::move(a), std::move(b));
}

ReP alt(ReP a, ReP b) {
    if (a->kind == Kind::empty)
        return b;
    if (b->kind == Kind::empty)
        return a;
    return mk(Kind::alt, {}, std::move(a), std::move(b));
}

bool nullable(const ReP& r) {
    switch (r->kind) {
    case Kind::eps:
    case Kind::star: return true;
    case Kind::cat: return nullable(r->a) && nullable(r->b);
    case Kind::alt: return nullable(r->a) || nullable(r->b);
    default: return false;
    }
}

ReP deriv(const ReP& r, const std::string& label) {
    const bool element = label != doc::text_tag;
    switch (r->kind) {
    case Kind::empty:
    case Kind::eps: return empty_re();
    case Kind::tag: return label == r->tag ? eps_re() : empty_re();
    case Kind::any: return element ? eps_re() : empty_re();
    case Kind::not_tag: return element && label != r->tag ? eps_re() : empty_re();
    case Kind::cat: {
        ReP left = cat(deriv(r->a, label), r->b);
        return nullable(r->a) ? alt(left, deriv(r->b, label)) : left;
    }
    case Kind::alt: return alt(deriv(r->a, label), deriv(r->b, label));
    case Kind::star: return cat(deriv(r->a, label), r);
    }
    return empty_re();
}

bool tag_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':'; }

class ReParser {
public:
    explicit ReParser(std::string_view s) : s_(s) {}
    ReP run() {
        ReP r = alternation();
        ws();
        if (i_ != s_.size())
            throw std::invalid_argument("regex: trailing input");
        return r;
    }

private:
    void ws() {
        while (i_ < s_.size() && s_[i_] == ' ')
            ++i_;
    }
    ReP alternation() {
        ReP r = concatenation();
        ws();
        while (i_ < s_.size() && s_[i_] == '|') {
            ++i_;
            r = mk(Kind::alt, {}, r, concatenation());
            ws();
        }
        return r;
    }
    ReP concatenation() {
        ReP r = postfix();
        for (;;) {
            ws();
            if (i_ < s_.size() && s_[i_] == '.') {
                ++i_;
                r = mk(Kind::cat, {}, r, postfix());
            } else if (i_ < s_.size() && (tag_char(s_[i_]) || s_[i_] == '(' || s_[i_] == '^' || s_[i_] == '#')) {
                r = mk(Kind::cat, {}, r, postfix());
            } else {
                return r;
            }
        }
    }
    ReP postfix() {
        ReP r = atom();
        while (i_ < s_.size() && s_[i_] == '*') {
            ++i_;
            r = mk(Kind::star, {}, r);
        }
        return r;
    }
    ReP atom() {
        ws();
        if (i_ >= s_.size())
            throw std::invalid_argument("regex: unexpected end");
        if (s_[i_] == '(') {
            ++i_;
            ReP r = alternation();
            ws();
            if (i_ >= s_.size() || s_[i_] != ')')
                throw std::invalid_argument("regex: missing ')'");
            ++i_;
            return r;
        }
        bool negated = false;
        std::string prefix;
        if (s_[i_] == '^') {
            negated = true;
            ++i_;
        } else if (s_[i_] == '#') {
            prefix = "#";
            ++i_;
        }
        std::size_t start = i_;
        while (i_ < s_.size() && tag_char(s_[i_]))
            ++i_;
        std::string name = prefix + std::string(s_.substr(start, i_ - start));
        if (name.empty())
            throw std::invalid_argument("regex: expected tag");
        if (negated)
            return mk(Kind::not_tag, name);
        if (name == "_")
            return mk(Kind::any);
        return mk(Kind::tag, name);
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

// ---- statements ----

class StmtParser {
public:
    StmtParser(std::string_view s, Syntax syn) : s_(s), syn_(syn) {}

    Stmt run() {
        Stmt st = syn_ == Syntax::rpn ? rpn_stmt() : vhel_stmt();
        ws();
        if (i_ < s_.size() && s_[i_] == ';')
            ++i_;
        ws();
        if (i_ != s_.size())
            throw std::invalid_argument("statement: trailing input at " + std::to_string(i_));
        return st;
    }

private:
    void ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }
    bool eat(std::string_view tok) {
        ws();
        if (s_.substr(i_, tok.size()) != tok)
            return false;
        if (std::isalpha(static_cast<unsigned char>(tok.back())) && i_ + tok.size() < s_.size() &&
            tag_char(s_[i_ + tok.size()]))
            return false;
        i_ += tok.size();
        return true;
    }
    void need(std::string_view tok) {
        if (!eat(tok))
            throw std::invalid_argument("statement: expected '" + std::string(tok) + "' at " + std::to_string(i_));
    }

    std::string str() {
        ws();
        if (i_ >= s_.size() || s_[i_] != '"')
            throw std::invalid_argument("statement: expected string");
        std::string out;
        for (++i_; i_ < s_.size() && s_[i_] != '"'; ++i_) {
            if (s_[i_] == '\\')
                ++i_;
            out += s_[i_];
        }
        ++i_;
        return out;
    }

    Sel bracket_sel() {
        auto close = s_.find(']', i_);
        Sel s = parse_sel(s_.substr(i_ + 1, close - i_ - 1));
        i_ = close + 1;
        return s;
    }

    // RPN: a '(' is tried as a record first and re-read as a path on failure.
    Stmt rpn_stmt() {
        ws();
        if (eat("txt"))
            return {};
        if (i_ < s_.size() && s_[i_] == '(') {
            std::size_t save = i_;
            try {
                ++i_;
                Stmt st;
                st.record = true;
                st.entries.push_back(rpn_stmt());
                need("#");
                st.entries.push_back(rpn_stmt());
                while (eat("#"))
                    st.entries.push_back(rpn_stmt());
                need(")");
                return st;
            } catch (const std::invalid_argument&) {
                i_ = save;
            }
        }
        Patom p = rpn_patom();
        need(".");
        Stmt rest = rpn_stmt();
        rest.chain.insert(rest.chain.begin(), std::move(p));
        return rest;
    }

    Patom rpn_patom() {
        ws();
        Patom p;
        std::size_t start = i_;
        if (i_ < s_.size() && s_[i_] == '(') {
            int depth = 0;
            do {
                if (s_[i_] == '(')
                    ++depth;
                else if (s_[i_] == ')')
                    --depth;
                ++i_;
            } while (i_ < s_.size() && depth > 0);
        } else {
            if (i_ < s_.size() && (s_[i_] == '^' || s_[i_] == '#'))
                ++i_;
            while (i_ < s_.size() && tag_char(s_[i_]))
                ++i_;
            if (i_ < s_.size() && s_[i_] == '*')
                ++i_;
        }
        if (i_ == start)
            throw std::invalid_argument("statement: expected patom at " + std::to_string(i_));
        p.path = parse_re(s_.substr(start, i_ - start));
        if (i_ < s_.size() && s_[i_] == '[')
            p.range = bracket_sel();
        ws();
        if (eat("{")) {
            do
                p.conds.push_back(rpn_cond());
            while (eat("and"));
            need("}");
        }
        return p;
    }

    Cond rpn_cond() {
        Cond c;
        if (eat("!"))
            c.cut = true;
        while (!eat("txt")) {
            c.chain.push_back(rpn_patom());
            need(".");
        }
        need("=");
        c.text = str();
        return c;
    }

    Patom vhel_patom(bool descendant) {
        ws();
        std::size_t start = i_;
        while (i_ < s_.size() && tag_char(s_[i_]) && s_.substr(i_, 2) != "->")
            ++i_;
        if (i_ == start)
            throw std::invalid_argument("statement: expected tag at " + std::to_string(i_));
        std::string tag(s_.substr(start, i_ - start));
        Patom p;
        ReP atom = tag == "_" ? mk(Kind::any) : mk(Kind::tag, tag);
        p.path = descendant ? mk(Kind::cat, {}, mk(Kind::star, {}, mk(Kind::any)), atom) : atom;
        if (i_ < s_.size() && s_[i_] == '[')
            p.range = bracket_sel();
        return p;
    }

    bool arrow() { return eat("->") || eat("\xE2\x86\x92"); }

    // Reads `pseq` and reports whether it ended in `.txt`.
    std::vector<Patom> vhel_pseq(bool& txt, bool with_conds) {
        std::vector<Patom> out;
        txt = false;
        bool desc = arrow();
        if (!desc && eat("txt")) {
            txt = true;
            return out;
        }
        for (;;) {
            out.push_back(vhel_patom(desc));
            if (with_conds && eat("{")) {
                do
                    out.back().conds.push_back(vhel_cond());
                while (eat("and"));
                need("}");
            }
            if (arrow()) {
                desc = true;
                continue;
            }
            if (eat(".")) {
                if (eat("txt")) {
                    txt = true;
                    return out;
                }
                desc = false;
                continue;
            }
            return out;
        }
    }

    Cond vhel_cond() {
        Cond c;
        if (eat("!"))
            c.cut = true;
        bool txt = false;
        c.chain = vhel_pseq(txt, false);
        if (!txt)
            throw std::invalid_argument("statement: condition without txt");
        need("=");
        c.text = str();
        return c;
    }

    Stmt vhel_stmt() {
        Stmt st;
        bool txt = false;
        ws();
        if (i_ < s_.size() && s_[i_] != '(')
            st.chain = vhel_pseq(txt, true);
        if (txt)
            return st;
        need("(");
        st.record = true;
        do
            st.entries.push_back(vhel_stmt());
        while (eat("#"));
        need(")");
        return st;
    }

    std::string_view s_;
    Syntax syn_;
    std::size_t i_ = 0;
};

bool is_atom(const ReP& r) { return r->kind == Kind::tag || r->kind == Kind::any || r->kind == Kind::not_tag; }

std::string quote_stmt(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + '"';
}

std::string vhel_step(const ReP& r, bool first) {
    if (r->kind == Kind::tag || r->kind == Kind::any)
        return (first ? "" : ".") + re_text(r);
    if (r->kind == Kind::cat && r->a->kind == Kind::star && r->a->a->kind == Kind::any &&
        (r->b->kind == Kind::tag || r->b->kind == Kind::any))
        return "->" + re_text(r->b);
    throw std::invalid_argument("statement: path outside the variable-free fragment");
}

std::string print_patom(const Patom& p, Syntax syn, bool first);

std::string print_cond(const Cond& c, Syntax syn) {
    std::string out = c.cut ? "!" : "";
    for (std::size_t i = 0; i < c.chain.size(); ++i)
        out += print_patom(c.chain[i], syn, i == 0) + (syn == Syntax::rpn ? "." : "");
    if (syn == Syntax::vhel && !c.chain.empty())
        out += ".";
    return out + "txt = " + quote_stmt(c.text);
}

std::string print_patom(const Patom& p, Syntax syn, bool first) {
    std::string out;
    if (syn == Syntax::rpn)
        out = is_atom(p.path) ? re_text(p.path) : "(" + re_text(p.path) + ")";
    else
        out = vhel_step(p.path, first);
    if (!p.range.star)
        out += "[" + sel_text(p.range) + "]";
    if (!p.conds.empty()) {
        out += "{";
        for (std::size_t i = 0; i < p.conds.size(); ++i)
            out += (i ? " and " : "") + print_cond(p.conds[i], syn);
        out += "}";
    }
    return out;
}

// ---- oracle evaluation ----

using Elems = std::vector<std::string>;

std::string set_canon(Elems items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    std::string out = "{";
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? "," : "") + items[i];
    return out + "}";
}

struct Oracle {
    const doc::DocTree& t;
    bool helvf;
    bool cut;

    bool cond_holds(const Cond& c, std::size_t pos, doc::NodeId v) const {
        if (pos == c.chain.size())
            return naive_txt(t, v) == c.text;
        for (doc::NodeId w : step(c.chain[pos], v))
            if (cond_holds(c, pos + 1, w))
                return true;
        return false;
    }

    bool conds_hold(const Patom& p, doc::NodeId w) const {
        for (const auto& c : p.conds)
            if (!cond_holds(c, 0, w))
                return false;
        return true;
    }

    std::vector<doc::NodeId> step(const Patom& p, doc::NodeId v) const {
        auto reach = naive_subelem(t, v, p.path);
        std::vector<doc::NodeId> out;
        if (!helvf) {
            for (doc::NodeId w : naive_select(reach, p.range))
                if (conds_hold(p, w))
                    out.push_back(w);
            return out;
        }
        for (doc::NodeId w : reach) {
            bool stop = false;
            if (cut)
                for (const auto& c : p.conds)
                    if (c.cut && !cond_holds(c, 0, w))
                        stop = true;
            if (stop)
                break;
            if (conds_hold(p, w))
                out.push_back(w);
        }
        return naive_select(out, p.range);
    }

    std::string value(const Stmt& s, doc::NodeId v) const {
        Elems items;
        collect(s, 0, v, items);
        return set_canon(std::move(items));
    }

    void collect(const Stmt& s, std::size_t pos, doc::NodeId v, Elems& items) const {
        if (pos == s.chain.size()) {
            if (!s.record) {
                items.push_back(quote_json(naive_txt(t, v)));
                return;
            }
            std::string rec = "<";
            for (std::size_t i = 0; i < s.entries.size(); ++i)
                rec += (i ? "," : "") + value(s.entries[i], v);
            items.push_back(rec + ">");
            return;
        }
        for (doc::NodeId w : step(s.chain[pos], v))
            collect(s, pos + 1, w, items);
    }
};

// ---- generators ----

class Gen {
public:
    Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t upto(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n)(rng_); }
    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[upto(v.size() - 1)];
    }

    ReP re(const std::vector<std::string>& tags, std::size_t depth) {
        if (depth == 0 || chance(0.4)) {
            auto r = upto(9);
            if (r < 7)
                return mk(Kind::tag, pick(tags));
            if (r < 9)
                return mk(Kind::any);
            return mk(Kind::not_tag, pick(tags));
        }
        switch (upto(2)) {
        case 0: return mk(Kind::cat, {}, re(tags, depth - 1), re(tags, depth - 1));
        case 1: return mk(Kind::alt, {}, re(tags, depth - 1), re(tags, depth - 1));
        default: return mk(Kind::star, {}, re(tags, depth - 1));
        }
    }

    std::mt19937_64 rng_;
};

class StmtGen {
public:
    explicit StmtGen(const StmtGenSpec& spec) : spec_(spec), g_(spec.seed) {}

    Stmt stmt(std::size_t depth) {
        Stmt s;
        std::size_t n = g_.upto(spec_.max_chain);
        for (std::size_t i = 0; i < n; ++i)
            s.chain.push_back(patom(depth, true));
        if (depth < spec_.max_depth && g_.chance(spec_.record_prob)) {
            s.record = true;
            std::size_t k = 2 + g_.upto(1);
            for (std::size_t i = 0; i < k; ++i)
                s.entries.push_back(stmt(depth + 1));
        }
        return s;
    }

private:
    bool vhel() const { return spec_.language == Syntax::vhel; }

    Patom patom(std::size_t depth, bool allow_conds) {
        Patom p;
        if (vhel()) {
            ReP atom = g_.chance(0.15) ? mk(Kind::any) : mk(Kind::tag, g_.pick(spec_.tags));
            p.path = g_.chance(0.3) ? mk(Kind::cat, {}, mk(Kind::star, {}, mk(Kind::any)), atom) : atom;
        } else {
            p.path = g_.re(spec_.tags, 2);
        }
        p.range = parse_sel(g_.pick(spec_.ranges));
        if (allow_conds && depth < spec_.max_depth && g_.chance(spec_.cond_prob)) {
            std::size_t k = 1 + g_.upto(1);
            for (std::size_t i = 0; i < k; ++i)
                p.conds.push_back(cond(depth + 1));
        }
        return p;
    }

    Cond cond(std::size_t depth) {
        Cond c;
        std::size_t n = vhel() ? 1 + g_.upto(1) : g_.upto(2);
        for (std::size_t i = 0; i < n; ++i)
            c.chain.push_back(patom(depth, !vhel()));
        c.text = g_.pick(spec_.texts);
        c.cut = g_.chance(spec_.cut_prob);
        return c;
    }

    const StmtGenSpec& spec_;
    Gen g_;
};

void stmt_candidates(const Stmt& s, std::vector<Stmt>& out) {
    for (std::size_t i = 0; i < s.chain.size(); ++i) {
        Stmt c = s;
        c.chain.erase(c.chain.begin() + static_cast<std::ptrdiff_t>(i));
        out.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < s.chain.size(); ++i)
        for (std::size_t k = 0; k < s.chain[i].conds.size(); ++k) {
            Stmt c = s;
            c.chain[i].conds.erase(c.chain[i].conds.begin() + static_cast<std::ptrdiff_t>(k));
            out.push_back(std::move(c));
        }
    for (std::size_t i = 0; i < s.chain.size(); ++i)
        if (!s.chain[i].range.star) {
            Stmt c = s;
            c.chain[i].range = Sel{};
            out.push_back(std::move(c));
        }
    if (s.record) {
        Stmt flat = s;
        flat.record = false;
        flat.entries.clear();
        out.push_back(std::move(flat));
        if (s.entries.size() > 2)
            for (std::size_t i = 0; i < s.entries.size(); ++i) {
                Stmt c = s;
                c.entries.erase(c.entries.begin() + static_cast<std::ptrdiff_t>(i));
                out.push_back(std::move(c));
            }
        for (std::size_t i = 0; i < s.entries.size(); ++i) {
            std::vector<Stmt> inner;
            stmt_candidates(s.entries[i], inner);
            for (auto& e : inner) {
                Stmt c = s;
                c.entries[i] = std::move(e);
                out.push_back(std::move(c));
            }
        }
    }
}

doc::DocTree without_subtree(const doc::DocTree& t, doc::NodeId cut) {
    doc::DocTree::Builder b;
    auto emit = [&](auto&& self, doc::NodeId v) -> void {
        if (v == cut)
            return;
        if (t.is_text(v)) {
            b.text(t.text(v));
            return;
        }
        b.open(t.label(v));
        for (doc::NodeId c : t.children(v))
            self(self, c);
        b.close();
    };
    for (doc::NodeId c : t.children(doc::root_id))
        emit(emit, c);
    return std::move(b).finish();
}

} // namespace

ReP parse_re(std::string_view text) { return ReParser(text).run(); }

std::string re_text(const ReP& r) {
    switch (r->kind) {
    case Kind::empty: return "()";
    case Kind::eps: return "";
    case Kind::tag: return r->tag;
    case Kind::any: return "_";
    case Kind::not_tag: return "^" + r->tag;
    case Kind::cat: return "(" + re_text(r->a) + "." + re_text(r->b) + ")";
    case Kind::alt: return "(" + re_text(r->a) + "|" + re_text(r->b) + ")";
    case Kind::star: return "(" + re_text(r->a) + ")*";
    }
    return {};
}

bool re_matches(const ReP& re, const std::vector<std::string>& word) {
    ReP r = re;
    for (const auto& l : word) {
        r = deriv(r, l);
        if (r->kind == Kind::empty)
            return false;
    }
    return nullable(r);
}

std::vector<doc::NodeId> naive_subelem(const doc::DocTree& t, doc::NodeId v0, const ReP& re) {
    std::vector<doc::NodeId> out;
    std::vector<std::string> word;
    auto walk = [&](auto&& self, doc::NodeId v) -> void {
        if (re_matches(re, word))
            out.push_back(v);
        for (doc::NodeId c : t.children(v)) {
            word.emplace_back(t.label(c));
            self(self, c);
            word.pop_back();
        }
    };
    walk(walk, v0);
    std::sort(out.begin(), out.end());
    return out;
}

Sel parse_sel(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ')
            s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ')
            s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    Sel s;
    if (text == "*" || text.empty())
        return s;
    s.star = false;
    if (text == "last") {
        s.last = true;
        return s;
    }
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string part(trim(text.substr(0, comma)));
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        auto dash = part.find('-');
        std::size_t i = std::stoul(part.substr(0, dash));
        std::size_t j = dash == std::string::npos ? i : std::stoul(part.substr(dash + 1));
        s.intervals.emplace_back(i, j);
    }
    return s;
}

std::string sel_text(const Sel& s) {
    if (s.star)
        return "*";
    if (s.last)
        return "last";
    std::string out;
    for (std::size_t k = 0; k < s.intervals.size(); ++k) {
        auto [i, j] = s.intervals[k];
        out += (k ? "," : "") + std::to_string(i) + (i == j ? "" : "-" + std::to_string(j));
    }
    return out;
}

std::vector<doc::NodeId> naive_select(const std::vector<doc::NodeId>& nodes, const Sel& s) {
    if (s.star)
        return nodes;
    if (s.last)
        return nodes.empty() ? nodes : std::vector<doc::NodeId>{nodes.back()};
    std::vector<doc::NodeId> out;
    for (std::size_t p = 0; p < nodes.size(); ++p)
        for (auto [i, j] : s.intervals)
            if (i <= p && p <= j) {
                out.push_back(nodes[p]);
                break;
            }
    return out;
}

Stmt parse_stmt(std::string_view text, Syntax syntax) { return StmtParser(text, syntax).run(); }

std::string print_stmt(const Stmt& s, Syntax syn) {
    std::string out;
    for (std::size_t i = 0; i < s.chain.size(); ++i) {
        out += print_patom(s.chain[i], syn, i == 0);
        if (syn == Syntax::rpn)
            out += ".";
    }
    if (!s.record) {
        if (syn == Syntax::vhel && !s.chain.empty())
            out += ".";
        return out + "txt";
    }
    out += "(";
    for (std::size_t i = 0; i < s.entries.size(); ++i)
        out += (i ? " # " : "") + print_stmt(s.entries[i], syn);
    return out + ")";
}

std::size_t stmt_depth(const Stmt& s) {
    std::size_t d = 0;
    auto cond_depth = [](auto&& self, const Cond& c) -> std::size_t {
        std::size_t m = 0;
        for (const auto& p : c.chain)
            for (const auto& inner : p.conds)
                m = std::max(m, self(self, inner));
        return m + 1;
    };
    for (const auto& p : s.chain)
        for (const auto& c : p.conds)
            d = std::max(d, cond_depth(cond_depth, c));
    for (const auto& e : s.entries)
        d = std::max(d, stmt_depth(e) + 1);
    return d;
}

std::string naive_txt(const doc::DocTree& t, doc::NodeId v) {
    if (t.is_text(v))
        return std::string(t.text(v));
    std::string out;
    for (doc::NodeId c : t.children(v))
        out += naive_txt(t, c);
    return out;
}

std::string quote_json(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string naive_rpn(const Stmt& s, const doc::DocTree& t) { return Oracle{t, false, false}.value(s, doc::root_id); }

std::string naive_helvf(const Stmt& s, const doc::DocTree& t, bool cut) {
    return Oracle{t, true, cut}.value(s, doc::root_id);
}

doc::DocTree gen_tree(const TreeGenSpec& spec) {
    Gen g(spec.seed);
    std::size_t budget = spec.max_nodes <= 1 ? 0 : g.upto(spec.max_nodes - 1);
    doc::DocTree::Builder b;
    if (budget == 0)
        return std::move(b).finish();
    auto grow = [&](auto&& self, std::size_t depth) -> void {
        std::size_t fanout = depth >= spec.max_depth ? 0 : g.upto(spec.max_fanout);
        bool last_text = false;
        for (std::size_t i = 0; i < fanout && budget > 0; ++i) {
            --budget;
            if (!last_text && g.chance(spec.text_prob)) {
                b.text(g.pick(spec.texts));
                last_text = true;
                continue;
            }
            last_text = false;
            b.open(g.pick(spec.tags));
            self(self, depth + 1);
            b.close();
        }
    };
    --budget;
    b.open(g.pick(spec.tags));
    // Keep drawing children for the top element until the budget is spent
    // or a round adds nothing.
    for (std::size_t rounds = 0; budget > 0 && rounds < 4; ++rounds)
        grow(grow, 1);
    b.close();
    return std::move(b).finish();
}

ReP gen_re(std::uint64_t seed, const std::vector<std::string>& tags, std::size_t max_depth) {
    Gen g(seed);
    return g.re(tags, max_depth);
}

Stmt gen_stmt(const StmtGenSpec& spec) { return StmtGen(spec).stmt(0); }

doc::DocTree shrink_tree(doc::DocTree t, const std::function<bool(const doc::DocTree&)>& fails) {
    for (bool progress = true; progress;) {
        progress = false;
        for (doc::NodeId v = 1; v < t.size(); ++v) {
            doc::DocTree smaller = without_subtree(t, v);
            if (fails(smaller)) {
                t = std::move(smaller);
                progress = true;
                break;
            }
        }
    }
    return t;
}

Stmt shrink_stmt(Stmt s, Syntax syntax, const std::function<bool(const Stmt&)>& fails) {
    for (bool progress = true; progress;) {
        progress = false;
        std::vector<Stmt> cands;
        stmt_candidates(s, cands);
        for (auto& c : cands) {
            // Candidates must stay printable in the requested syntax.
            try {
                parse_stmt(print_stmt(c, syntax), syntax);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (fails(c)) {
                s = std::move(c);
                progress = true;
                break;
            }
        }
    }
    return s;
}

bool parity_oracle(const doc::DocTree& t) {
    auto top = t.children(doc::root_id);
    if (top.empty())
        return true;
    return t.children(top.front()).size() % 2 == 0;
}

} // namespace wrap::testkit
