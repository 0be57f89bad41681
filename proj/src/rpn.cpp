#include "wrap/rpn.hpp"

#include <cctype>

#include "wrap/error.hpp"

namespace wrap::rpn {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':'; }

class RpnParser {
public:
    RpnParser(std::string_view in, ParseOptions opts) : in_(in), opts_(opts) {}

    Statement run() {
        Statement s = statement();
        skip();
        if (pos_ < in_.size() && in_[pos_] == ';')
            ++pos_;
        skip();
        if (pos_ != in_.size())
            fail("unexpected trailing input");
        return s;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorKind::syntax_error, msg, pos_); }

    void skip() {
        while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_])))
            ++pos_;
    }

    bool peek(char c) {
        skip();
        return pos_ < in_.size() && in_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c))
            fail(pos_ >= in_.size() ? std::string("unexpected end of input, expected '") + c + "'"
                                    : std::string("expected '") + c + "'");
        ++pos_;
    }

    bool keyword(std::string_view kw) {
        skip();
        if (in_.substr(pos_, kw.size()) != kw)
            return false;
        std::size_t after = pos_ + kw.size();
        return after >= in_.size() || !is_ident_char(in_[after]);
    }

    std::size_t matching_paren(std::size_t open) const {
        int depth = 0;
        for (std::size_t i = open; i < in_.size(); ++i) {
            char c = in_[i];
            if (c == '"') {
                for (++i; i < in_.size() && in_[i] != '"'; ++i)
                    if (in_[i] == '\\')
                        ++i;
            } else if (c == '(') {
                ++depth;
            } else if (c == ')') {
                if (--depth == 0)
                    return i;
            }
        }
        return std::string_view::npos;
    }

    // A '(' opens a record iff a separator '#' occurs at its top level.
    bool paren_is_record(std::size_t open) const {
        int depth = 0, braces = 0;
        for (std::size_t i = open; i < in_.size(); ++i) {
            char c = in_[i];
            if (c == '"') {
                for (++i; i < in_.size() && in_[i] != '"'; ++i)
                    if (in_[i] == '\\')
                        ++i;
            } else if (c == '(') {
                ++depth;
            } else if (c == ')') {
                if (--depth == 0)
                    return false;
            } else if (c == '{') {
                ++braces;
            } else if (c == '}') {
                --braces;
            } else if (c == '#' && depth == 1 && braces == 0 && in_.substr(i + 1, 4) != "text") {
                return true;
            }
        }
        return false;
    }

    Statement statement() {
        Statement s;
        for (;;) {
            skip();
            if (keyword("txt")) {
                pos_ += 3;
                return s;
            }
            if (peek('(') && paren_is_record(pos_)) {
                ++pos_;
                s.record = true;
                s.entries.push_back(statement());
                while (peek('#')) {
                    ++pos_;
                    s.entries.push_back(statement());
                }
                expect(')');
                if (s.entries.size() < 2)
                    fail("a record needs at least two entries");
                return s;
            }
            s.chain.push_back(patom());
            expect('.');
        }
    }

    path::Path path_expr() {
        skip();
        if (pos_ >= in_.size())
            fail("unexpected end of input, expected a path");
        std::size_t start = pos_;
        if (in_[pos_] == '(') {
            std::size_t close = matching_paren(pos_);
            if (close == std::string_view::npos)
                fail("unbalanced '('");
            pos_ = close + 1;
            if (pos_ < in_.size() && in_[pos_] == '*')
                ++pos_;
        } else {
            if (in_[pos_] == '^' || in_[pos_] == '#')
                ++pos_;
            std::size_t id = pos_;
            while (pos_ < in_.size() && is_ident_char(in_[pos_]))
                ++pos_;
            if (pos_ == id && !(in_[start] == '_'))
                fail("expected a path");
            if (pos_ < in_.size() && in_[pos_] == '*')
                ++pos_;
        }
        try {
            return path::Path::parse(in_.substr(start, pos_ - start));
        } catch (const Error& e) {
            throw Error(e.kind(), e.message(), start);
        }
    }

    Patom patom() {
        Patom p;
        p.path = path_expr();
        if (peek('[')) {
            std::size_t at = pos_;
            auto close = in_.find(']', pos_);
            if (close == std::string_view::npos)
                fail("unterminated '['");
            try {
                p.range = path::parse_range(in_.substr(pos_ + 1, close - pos_ - 1));
            } catch (const Error& e) {
                throw Error(e.kind(), e.message(), at);
            }
            p.explicit_range = true;
            pos_ = close + 1;
        }
        if (peek('{')) {
            ++pos_;
            p.conds.push_back(cond(true));
            while (keyword("and")) {
                pos_ += 3;
                p.conds.push_back(cond(true));
            }
            expect('}');
        }
        return p;
    }

    Cond cond(bool top) {
        Cond c;
        if (top && peek('!')) {
            if (!opts_.allow_cut)
                fail("cut markers are not allowed here");
            ++pos_;
            c.cut = true;
        }
        for (;;) {
            if (keyword("txt")) {
                pos_ += 3;
                expect('=');
                c.text = string_lit();
                return c;
            }
            c.chain.push_back(patom());
            expect('.');
        }
    }

    std::string string_lit() {
        skip();
        if (pos_ >= in_.size() || in_[pos_] != '"')
            fail("expected string");
        ++pos_;
        std::string out;
        while (pos_ < in_.size() && in_[pos_] != '"') {
            if (in_[pos_] == '\\' && pos_ + 1 < in_.size())
                ++pos_;
            out += in_[pos_++];
        }
        if (pos_ >= in_.size())
            fail("unterminated string");
        ++pos_;
        return out;
    }

    std::string_view in_;
    ParseOptions opts_;
    std::size_t pos_ = 0;
};

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + '"';
}

bool simple_path(const path::Regex& re) {
    using K = path::Regex::Kind;
    if (re.kind == K::tag || re.kind == K::not_tag || re.kind == K::any)
        return true;
    return re.kind == K::star && simple_path(re.parts.front()) && re.parts.front().kind != K::star;
}

using Elements = std::vector<std::pair<doc::NodeId, ComplexObject>>;

void eval_into(const Statement& s, std::size_t pos, const doc::DocTree& t, doc::NodeId v, Elements& out) {
    if (pos == s.chain.size()) {
        if (!s.record) {
            out.emplace_back(v, ComplexObject::str(t.txt(v)));
            return;
        }
        std::vector<ComplexObject> entries;
        for (const auto& e : s.entries)
            entries.push_back(eval_rpn_at(e, t, v));
        out.emplace_back(v, ComplexObject::record(std::move(entries)));
        return;
    }
    const Patom& p = s.chain[pos];
    for (doc::NodeId w : path::subelem_range(t, v, p.path, p.range)) {
        bool ok = true;
        for (const auto& c : p.conds)
            if (!eval_cond(c, t, w)) {
                ok = false;
                break;
            }
        if (ok)
            eval_into(s, pos + 1, t, w, out);
    }
}

bool cond_from(const Cond& c, std::size_t pos, const doc::DocTree& t, doc::NodeId v) {
    if (pos == c.chain.size())
        return t.txt(v) == c.text;
    const Patom& p = c.chain[pos];
    for (doc::NodeId w : path::subelem_range(t, v, p.path, p.range)) {
        bool ok = true;
        for (const auto& inner : p.conds)
            if (!eval_cond(inner, t, w)) {
                ok = false;
                break;
            }
        if (ok && cond_from(c, pos + 1, t, w))
            return true;
    }
    return false;
}

} // namespace

Statement parse_rpn(std::string_view text, ParseOptions options) { return RpnParser(text, options).run(); }

std::string patom_text(const Patom& p) {
    std::string out;
    const auto& re = p.path.regex();
    out += simple_path(re) ? path::to_string(re) : "(" + path::to_string(re) + ")";
    if (!p.range.is_star() || p.explicit_range)
        out += "[" + p.range.to_string() + "]";
    if (!p.conds.empty()) {
        out += "{";
        for (std::size_t i = 0; i < p.conds.size(); ++i) {
            if (i)
                out += " and ";
            out += to_text(p.conds[i]);
        }
        out += "}";
    }
    return out;
}

std::string to_text(const Cond& cond) {
    std::string out = cond.cut ? "!" : "";
    for (const auto& p : cond.chain)
        out += patom_text(p) + ".";
    return out + "txt = " + quote(cond.text);
}

std::string to_text(const Statement& stmt) {
    std::string out;
    for (const auto& p : stmt.chain)
        out += patom_text(p) + ".";
    if (!stmt.record)
        return out + "txt";
    out += "(";
    for (std::size_t i = 0; i < stmt.entries.size(); ++i) {
        if (i)
            out += " # ";
        out += to_text(stmt.entries[i]);
    }
    return out + ")";
}

ObjectType typecheck(const Statement& stmt) {
    if (!stmt.record)
        return ObjectType::set_of(ObjectType::str());
    std::vector<ObjectType> entries;
    for (const auto& e : stmt.entries)
        entries.push_back(typecheck(e));
    return ObjectType::set_of(ObjectType::record_of(std::move(entries)));
}

ComplexObject eval_rpn_at(const Statement& stmt, const doc::DocTree& t, doc::NodeId v) {
    Elements out;
    eval_into(stmt, 0, t, v, out);
    return ComplexObject::set(std::move(out));
}

ComplexObject eval_rpn(const Statement& stmt, const doc::DocTree& t) { return eval_rpn_at(stmt, t, doc::root_id); }

bool eval_cond(const Cond& cond, const doc::DocTree& t, doc::NodeId v) { return cond_from(cond, 0, t, v); }

} // namespace wrap::rpn
