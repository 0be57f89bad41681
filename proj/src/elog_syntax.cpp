#include <algorithm>
#include <cctype>
#include <functional>

#include "wrap/elog.hpp"
#include "wrap/error.hpp"

namespace wrap::elog {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + '"';
}

struct Term {
    enum class Kind { var, wildcard, string, ident };
    Kind kind;
    std::string text;
};

struct BodyAtom {
    std::size_t at;
    std::string name;
    std::optional<std::string> path;    // subelem / contains
    std::optional<std::string> range;
    std::vector<Term> args;
};

class ElogParser {
public:
    explicit ElogParser(std::string_view in) : in_(in) {}

    Program run() {
        Program prog;
        for (;;) {
            skip();
            if (pos_ >= in_.size())
                break;
            if (in_[pos_] == '@')
                directive(prog);
            else
                prog.rules.push_back(rule());
        }
        return prog;
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::size_t at = Error::npos) const {
        throw Error(ErrorKind::syntax_error, msg, at == Error::npos ? pos_ : at);
    }

    void skip() {
        for (;;) {
            while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_])))
                ++pos_;
            if (pos_ < in_.size() && in_[pos_] == '%') {
                while (pos_ < in_.size() && in_[pos_] != '\n')
                    ++pos_;
                continue;
            }
            break;
        }
    }

    bool peek(std::string_view s) {
        skip();
        return in_.substr(pos_, s.size()) == s;
    }

    void expect(std::string_view s) {
        if (!peek(s))
            fail("expected '" + std::string(s) + "'");
        pos_ += s.size();
    }

    std::string ident() {
        skip();
        std::size_t start = pos_;
        while (pos_ < in_.size() && is_ident_char(in_[pos_]))
            ++pos_;
        if (start == pos_)
            fail("expected identifier");
        return std::string(in_.substr(start, pos_ - start));
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

    std::string bracketed() {
        expect("[");
        std::size_t start = pos_;
        auto end = in_.find(']', pos_);
        if (end == std::string_view::npos)
            fail("unterminated '['");
        pos_ = end + 1;
        return std::string(in_.substr(start, end - start));
    }

    Term term() {
        skip();
        if (pos_ >= in_.size())
            fail("unexpected end of input");
        if (in_[pos_] == '"')
            return {Term::Kind::string, string_lit()};
        std::string id = ident();
        if (id == "_")
            return {Term::Kind::wildcard, id};
        if (std::isupper(static_cast<unsigned char>(id.front())) || id.front() == '_')
            return {Term::Kind::var, id};
        return {Term::Kind::ident, id};
    }

    BodyAtom atom() {
        skip();
        BodyAtom a;
        a.at = pos_;
        a.name = ident();
        if (a.name == "subelem" || a.name == "contains") {
            skip();
            std::size_t at = pos_;
            auto path_text = bracketed();
            std::string_view pt = path_text;
            while (!pt.empty() && std::isspace(static_cast<unsigned char>(pt.front()))) pt.remove_prefix(1);
            while (!pt.empty() && std::isspace(static_cast<unsigned char>(pt.back()))) pt.remove_suffix(1);
            if (pt.size() < 2 || pt.front() != '"' || pt.back() != '"')
                fail("path must be a quoted regex", at);
            a.path = std::string(pt.substr(1, pt.size() - 2));
            if (peek("["))
                a.range = bracketed();
        }
        expect("(");
        if (!peek(")")) {
            a.args.push_back(term());
            while (peek(",")) {
                ++pos_;
                a.args.push_back(term());
            }
        }
        expect(")");
        return a;
    }

    std::string var_arg(const BodyAtom& a, std::size_t i) {
        if (a.args.size() <= i || a.args[i].kind != Term::Kind::var)
            fail("argument " + std::to_string(i + 1) + " of " + a.name + " must be a variable", a.at);
        return a.args[i].text;
    }

    void arity(const BodyAtom& a, std::size_t n) {
        if (a.args.size() != n)
            fail(a.name + " expects " + std::to_string(n) + " argument(s)", a.at);
    }

    path::Path make_path(const BodyAtom& a) {
        try {
            return path::Path::parse(*a.path);
        } catch (const Error& e) {
            throw Error(e.kind(), e.message(), a.at);
        }
    }

    path::Range make_range(const BodyAtom& a) {
        if (!a.range)
            return path::Range::star();
        try {
            return path::parse_range(*a.range);
        } catch (const Error& e) {
            throw Error(e.kind(), e.message(), a.at);
        }
    }

    std::optional<Condition> condition(const BodyAtom& a) {
        Condition c;
        if (a.name == "contains") {
            c.kind = Condition::Kind::contains;
            arity(a, 2);
            c.x = var_arg(a, 0);
            c.y = var_arg(a, 1);
            c.path = make_path(a);
            c.range = make_range(a);
            return c;
        }
        if (a.path)
            fail(a.name + " does not take a path", a.at);
        if (a.name == "contains_s" || a.name == "label") {
            c.kind = a.name == "label" ? Condition::Kind::label : Condition::Kind::contains_s;
            arity(a, 2);
            c.x = var_arg(a, 0);
            if (a.args[1].kind != Term::Kind::string && !(c.kind == Condition::Kind::label &&
                                                          a.args[1].kind == Term::Kind::ident))
                fail(a.name + " expects a string as second argument", a.at);
            c.text = a.args[1].text;
            return c;
        }
        if (a.name == "firstchild" || a.name == "nextsibling") {
            c.kind = a.name == "firstchild" ? Condition::Kind::firstchild : Condition::Kind::nextsibling;
            arity(a, 2);
            c.x = var_arg(a, 0);
            c.y = var_arg(a, 1);
            return c;
        }
        if (a.name == "lastsibling" || (a.name == root_pred && a.args.size() == 1)) {
            c.kind = a.name == "lastsibling" ? Condition::Kind::lastsibling : Condition::Kind::root;
            arity(a, 1);
            c.x = var_arg(a, 0);
            return c;
        }
        return std::nullopt;
    }

    Rule rule() {
        Rule r;
        skip();
        std::size_t at = pos_;
        BodyAtom head = atom();
        if (head.path || head.args.size() != 2)
            fail("rule head must be a binary pattern atom", at);
        r.head = head.name;
        if (r.head == root_pred || r.head == dom_pred || r.head == self_source || r.head == "subelem" ||
            r.head == "contains" || r.head == "contains_s" || r.head == "firstchild" ||
            r.head == "nextsibling" || r.head == "lastsibling" || r.head == "label")
            fail("'" + r.head + "' cannot be defined by a rule", at);
        r.x0 = var_arg(head, 0);
        r.x = var_arg(head, 1);
        if (r.x0 == r.x)
            fail("head variables must differ", at);
        expect(":-");
        std::vector<BodyAtom> body{atom()};
        for (;;) {
            if (peek(",")) {
                ++pos_;
                body.push_back(atom());
                continue;
            }
            break;
        }
        if (peek("[")) {
            std::size_t rat = pos_;
            auto text = bracketed();
            try {
                r.rule_range = path::parse_range(text);
            } catch (const Error& e) {
                throw Error(e.kind(), e.message(), rat);
            }
        }
        expect(".");

        std::size_t next = 0;
        const BodyAtom& first = body.front();
        if (first.name == dom_pred && first.args.size() == 2 && first.args[0].kind == Term::Kind::var) {
            if (first.args[0].text != r.x0 || var_arg(first, 1) != r.x)
                throw Error(ErrorKind::unsafe_rule, "dom(X0,X) must use the head variables", first.at);
            r.dom_pair = true;
            r.parent = std::string(dom_pred);
            next = 1;
        } else {
            if (first.path || first.args.size() != 2 || first.args[0].kind != Term::Kind::wildcard)
                fail("first body atom must be a parent pattern atom p0(_,X0) or dom(X0,X)", first.at);
            if (var_arg(first, 1) != r.x0)
                throw Error(ErrorKind::unsafe_rule, "parent atom must bind the head's first variable", first.at);
            r.parent = first.name;
            if (body.size() < 2 || body[1].name != "subelem")
                fail("second body atom must be subelem[...]", body.size() < 2 ? first.at : body[1].at);
            const BodyAtom& step = body[1];
            arity(step, 2);
            if (var_arg(step, 0) != r.x0 || var_arg(step, 1) != r.x)
                throw Error(ErrorKind::unsafe_rule, "subelem must relate the head variables " + r.x0 + " and " + r.x,
                            step.at);
            r.path = make_path(step);
            r.range = make_range(step);
            next = 2;
        }
        for (std::size_t i = next; i < body.size(); ++i) {
            const BodyAtom& a = body[i];
            if (a.name == "subelem")
                fail("only one subelem step per rule", a.at);
            if (auto c = condition(a)) {
                r.conds.push_back(std::move(*c));
                continue;
            }
            if (a.path || a.args.size() != 2 || a.args[0].kind != Term::Kind::wildcard)
                fail("unknown condition atom '" + a.name + "'", a.at);
            if (a.name == dom_pred || a.name == root_pred)
                fail("'" + a.name + "' may only appear as parent atom", a.at);
            r.refs.push_back({a.name, var_arg(a, 1)});
        }
        return r;
    }

    std::vector<std::string> names_until_dot() {
        std::vector<std::string> out;
        while (!peek("."))
            out.push_back(ident());
        ++pos_;
        return out;
    }

    void directive(Program& prog) {
        std::size_t at = pos_;
        ++pos_;
        std::string name = ident();
        if (name == "aux") {
            for (auto& p : names_until_dot())
                prog.aux.insert(std::move(p));
        } else if (name == "record") {
            prog.records.push_back(names_until_dot());
        } else if (name == "schema") {
            if (prog.schema)
                fail("duplicate @schema", at);
            skip();
            auto end = in_.find('.', pos_);
            if (end == std::string_view::npos)
                fail("unterminated @schema");
            try {
                prog.schema = parse_schema(in_.substr(pos_, end - pos_));
            } catch (const Error& e) {
                throw Error(e.kind(), e.message(), at);
            }
            pos_ = end + 1;
        } else {
            fail("unknown directive @" + name, at);
        }
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

std::string cond_text(const Condition& c) {
    switch (c.kind) {
    case Condition::Kind::contains:
        return "contains[" + quote(c.path.to_string()) + "][" + c.range.to_string() + "](" + c.x + "," + c.y + ")";
    case Condition::Kind::contains_s: return "contains_s(" + c.x + "," + quote(c.text) + ")";
    case Condition::Kind::firstchild: return "firstchild(" + c.x + "," + c.y + ")";
    case Condition::Kind::nextsibling: return "nextsibling(" + c.x + "," + c.y + ")";
    case Condition::Kind::lastsibling: return "lastsibling(" + c.x + ")";
    case Condition::Kind::label: return "label(" + c.x + "," + quote(c.text) + ")";
    case Condition::Kind::root: return "root(" + c.x + ")";
    }
    return {};
}

class SchemaParser {
public:
    explicit SchemaParser(std::string_view in) : in_(in) {}

    ObjectSchema run() {
        ObjectSchema s = set();
        skip();
        if (pos_ != in_.size())
            fail("trailing input");
        return s;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::syntax_error, "schema: " + msg, pos_);
    }
    void skip() {
        while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_])))
            ++pos_;
    }
    void expect(char c) {
        skip();
        if (pos_ >= in_.size() || in_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string ident() {
        skip();
        std::size_t start = pos_;
        while (pos_ < in_.size() && is_ident_char(in_[pos_]))
            ++pos_;
        if (start == pos_)
            fail("expected name");
        return std::string(in_.substr(start, pos_ - start));
    }

    ObjectSchema set() {
        ObjectSchema s;
        expect('{');
        std::string source = ident();
        if (source != self_source)
            s.pred = source;
        expect(':');
        skip();
        if (pos_ < in_.size() && in_[pos_] == '<') {
            ++pos_;
            s.record = true;
            s.entries.push_back(set());
            for (;;) {
                skip();
                if (pos_ < in_.size() && in_[pos_] == ',') {
                    ++pos_;
                    s.entries.push_back(set());
                    continue;
                }
                break;
            }
            expect('>');
            if (s.entries.size() < 2)
                fail("records need at least two entries");
        } else if (ident() != "str") {
            fail("expected 'str' or '<'");
        }
        expect('}');
        return s;
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

void collect_schema_preds(const ObjectSchema& s, std::vector<std::string>& out) {
    if (s.pred)
        out.push_back(*s.pred);
    for (const auto& e : s.entries)
        collect_schema_preds(e, out);
}

} // namespace

ObjectSchema parse_schema(std::string_view text) { return SchemaParser(text).run(); }

std::string to_string(const ObjectSchema& schema) {
    std::string out = "{" + (schema.pred ? *schema.pred : std::string(self_source)) + ":";
    if (schema.record) {
        out += "<";
        for (std::size_t i = 0; i < schema.entries.size(); ++i) {
            if (i)
                out += ",";
            out += to_string(schema.entries[i]);
        }
        out += ">";
    } else {
        out += "str";
    }
    return out + "}";
}

ObjectType schema_type(const ObjectSchema& schema) {
    if (!schema.record)
        return ObjectType::set_of(ObjectType::str());
    std::vector<ObjectType> entries;
    for (const auto& e : schema.entries)
        entries.push_back(schema_type(e));
    return ObjectType::set_of(ObjectType::record_of(std::move(entries)));
}

std::vector<std::string> Program::predicates() const {
    std::vector<std::string> out;
    for (const auto& r : rules)
        if (std::find(out.begin(), out.end(), r.head) == out.end())
            out.push_back(r.head);
    return out;
}

std::set<std::string> Program::condition_predicates() const {
    std::set<std::string> out;
    for (const auto& r : rules)
        if (r.dom_pair)
            out.insert(r.head);
    return out;
}

bool Program::has_rule_ranges() const {
    return std::any_of(rules.begin(), rules.end(), [](const Rule& r) { return r.rule_range.has_value(); });
}

std::map<std::string, std::size_t> Program::ordinals() const {
    std::map<std::string, std::size_t> out;
    std::function<void(const ObjectSchema&)> walk = [&](const ObjectSchema& s) {
        for (std::size_t i = 0; i < s.entries.size(); ++i) {
            if (s.entries[i].pred)
                out.emplace(*s.entries[i].pred, i);
            walk(s.entries[i]);
        }
    };
    if (schema)
        walk(*schema);
    for (const auto& rec : records)
        for (std::size_t i = 0; i < rec.size(); ++i)
            out[rec[i]] = i;
    return out;
}

Program parse_elog(std::string_view text) {
    Program prog = ElogParser(text).run();
    validate(prog);
    return prog;
}

void validate(const Program& program) {
    std::set<std::string> defined;
    for (const auto& r : program.rules)
        defined.insert(r.head);
    auto known = [&](const std::string& p) { return defined.count(p) > 0; };

    std::set<std::string> dom_heads = program.condition_predicates();
    for (const auto& r : program.rules)
        if (!r.dom_pair && dom_heads.count(r.head))
            throw Error(ErrorKind::syntax_error,
                        "predicate '" + r.head + "' mixes dom(X0,X) rules with subelem rules");

    for (const auto& r : program.rules) {
        if (!r.dom_pair && r.parent != root_pred && r.parent != dom_pred && !known(r.parent))
            throw Error(ErrorKind::unknown_predicate, "rule for '" + r.head + "' uses undefined parent '" + r.parent + "'");
        for (const auto& ref : r.refs)
            if (!known(ref.pred))
                throw Error(ErrorKind::unknown_predicate, "rule for '" + r.head + "' references undefined '" + ref.pred + "'");
        if (r.dom_pair && r.rule_range)
            throw Error(ErrorKind::syntax_error, "rule for '" + r.head + "': dom(X0,X) rules take no rule range");

        // Safety: every variable must be reachable from the bound head
        // variables through binary condition atoms.
        std::set<std::string> bound{r.x};
        if (!r.dom_pair)
            bound.insert(r.x0);
        std::set<std::string> all = bound;
        auto note = [&](const std::string& v) {
            if (r.dom_pair && v == r.x0)
                throw Error(ErrorKind::unsafe_rule,
                            "rule for '" + r.head + "': " + r.x0 + " is unconstrained under dom(X0,X)");
            all.insert(v);
        };
        for (const auto& c : r.conds) {
            note(c.x);
            if (!c.y.empty())
                note(c.y);
        }
        for (const auto& ref : r.refs)
            note(ref.var);
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& c : r.conds) {
                if (c.y.empty())
                    continue;
                bool bx = bound.count(c.x), by = bound.count(c.y);
                if (bx != by) {
                    bound.insert(bx ? c.y : c.x);
                    grew = true;
                }
            }
        }
        for (const auto& v : all)
            if (!bound.count(v))
                throw Error(ErrorKind::unsafe_rule,
                            "rule for '" + r.head + "': variable " + v + " is not connected to the head variables");
    }
    for (const auto& p : program.aux)
        if (!known(p))
            throw Error(ErrorKind::unknown_predicate, "@aux names undefined predicate '" + p + "'");
    for (const auto& rec : program.records)
        for (const auto& p : rec)
            if (!known(p))
                throw Error(ErrorKind::unknown_predicate, "@record names undefined predicate '" + p + "'");
    if (program.schema) {
        std::vector<std::string> preds;
        collect_schema_preds(*program.schema, preds);
        std::set<std::string> seen;
        for (const auto& p : preds) {
            if (!known(p))
                throw Error(ErrorKind::unknown_predicate, "@schema names undefined predicate '" + p + "'");
            if (!seen.insert(p).second)
                throw Error(ErrorKind::syntax_error, "@schema uses predicate '" + p + "' twice");
        }
    }
}

std::string to_text(const Program& program) {
    std::string out;
    if (program.schema)
        out += "@schema " + to_string(*program.schema) + ".\n";
    if (!program.aux.empty()) {
        out += "@aux";
        for (const auto& p : program.aux)
            out += " " + p;
        out += ".\n";
    }
    for (const auto& rec : program.records) {
        out += "@record";
        for (const auto& p : rec)
            out += " " + p;
        out += ".\n";
    }
    for (const auto& r : program.rules) {
        out += r.head + "(" + r.x0 + "," + r.x + ") :- ";
        if (r.dom_pair)
            out += std::string(dom_pred) + "(" + r.x0 + "," + r.x + ")";
        else
            out += r.parent + "(_," + r.x0 + "), subelem[" + quote(r.path.to_string()) + "][" + r.range.to_string() +
                   "](" + r.x0 + "," + r.x + ")";
        for (const auto& c : r.conds)
            out += ", " + cond_text(c);
        for (const auto& ref : r.refs)
            out += ", " + ref.pred + "(_," + ref.var + ")";
        if (r.rule_range)
            out += " [" + r.rule_range->to_string() + "]";
        out += ".\n";
    }
    return out;
}

} // namespace wrap::elog
