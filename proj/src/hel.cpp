#include "wrap/hel.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "wrap/error.hpp"

namespace wrap::hel {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':'; }
bool is_var_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_var_name(std::string_view s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])))
        return false;
    if (s == "last" || s == "regex")
        return false;
    return std::all_of(s.begin(), s.end(), is_var_char);
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + '"';
}

path::Regex step_regex(const std::string& tag, bool descendant) {
    auto atom = tag == "_" ? path::Regex::make_any() : path::Regex::make_tag(tag);
    if (!descendant)
        return atom;
    return path::Regex::make_concat({path::Regex::make_star(path::Regex::make_any()), std::move(atom)});
}

// Inverse of step_regex; false when the path is outside the fragment.
bool fragment_step(const path::Regex& re, std::string& tag, bool& descendant) {
    using K = path::Regex::Kind;
    auto simple = [&](const path::Regex& r) {
        if (r.kind == K::tag) {
            tag = r.tag;
            return true;
        }
        if (r.kind == K::any) {
            tag = "_";
            return true;
        }
        return false;
    };
    descendant = false;
    if (simple(re))
        return true;
    if (re.kind == K::concat && re.parts.size() == 2 && re.parts[0].kind == K::star &&
        re.parts[0].parts.front().kind == K::any && simple(re.parts[1])) {
        descendant = true;
        return true;
    }
    return false;
}

rpn::Patom to_patom(const HelPatom& p) {
    rpn::Patom out;
    out.path = path::Path(step_regex(p.tag, p.descendant));
    out.range = p.range;
    out.explicit_range = p.explicit_range;
    return out;
}

// Shared scanner for the variable-bearing and the variable-free syntax.
class HelParser {
public:
    HelParser(std::string_view in, bool vf) : in_(in), vf_(vf) {}

    HelStatement hel() {
        HelStatement s;
        s.cc = cc();
        if (keyword("where")) {
            pos_ += 5;
            s.where.push_back(hel_cond());
            while (keyword("and") || peek(',')) {
                pos_ += in_[pos_] == ',' ? 1 : 3;
                s.where.push_back(hel_cond());
            }
        }
        finish();
        return s;
    }

    rpn::Statement vhel() {
        rpn::Statement s = vcc();
        finish();
        return s;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorKind::syntax_error, msg, pos_); }

    void finish() {
        if (peek(';'))
            ++pos_;
        skip();
        if (pos_ != in_.size())
            fail("unexpected trailing input");
    }

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

    // '->' or '→' consumed; '.' is left to the caller.
    bool descendant_step() {
        skip();
        if (in_.substr(pos_, 2) == "->") {
            pos_ += 2;
            return true;
        }
        if (in_.substr(pos_, 3) == "\xE2\x86\x92") {
            pos_ += 3;
            return true;
        }
        return false;
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

    HelPatom patom(bool descendant) {
        skip();
        HelPatom p;
        p.descendant = descendant;
        std::size_t start = pos_;
        while (pos_ < in_.size() && is_ident_char(in_[pos_]) && in_.substr(pos_, 2) != "->")
            ++pos_;
        if (pos_ == start)
            fail(pos_ >= in_.size() ? "unexpected end of input, expected a tag" : "expected a tag");
        p.tag = std::string(in_.substr(start, pos_ - start));
        if (p.tag != "_")
            std::transform(p.tag.begin(), p.tag.end(), p.tag.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (pos_ < in_.size() && in_[pos_] == '[') {
            std::size_t at = pos_;
            auto close = in_.find(']', pos_);
            if (close == std::string_view::npos)
                fail("unterminated '['");
            std::string_view body = in_.substr(pos_ + 1, close - pos_ - 1);
            while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front())))
                body.remove_prefix(1);
            while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back())))
                body.remove_suffix(1);
            std::string_view range_text = body;
            auto colon = body.find(':');
            if (is_var_name(body)) {
                p.var = std::string(body);
                range_text = {};
            } else if (colon != std::string_view::npos && is_var_name(body.substr(0, colon))) {
                p.var = std::string(body.substr(0, colon));
                range_text = body.substr(colon + 1);
            }
            if (p.var && vf_)
                throw Error(ErrorKind::syntax_error, "index variables are not allowed in variable-free statements", at);
            if (!range_text.empty()) {
                try {
                    p.range = path::parse_range(range_text);
                } catch (const Error& e) {
                    throw Error(e.kind(), e.message(), at);
                }
                p.explicit_range = true;
            }
            pos_ = close + 1;
        }
        return p;
    }

    // Parses patoms up to `.txt` (sets `txt`) or up to a '(' / terminator.
    template <class OnPatom>
    void pseq(bool& txt, OnPatom on_patom) {
        txt = false;
        bool desc = descendant_step();
        if (!desc && keyword("txt")) {
            pos_ += 3;
            txt = true;
            return;
        }
        for (;;) {
            on_patom(patom(desc));
            if (descendant_step()) {
                desc = true;
                continue;
            }
            if (peek('.')) {
                ++pos_;
                if (keyword("txt")) {
                    pos_ += 3;
                    txt = true;
                    return;
                }
                desc = false;
                continue;
            }
            return;
        }
    }

    Cc cc() {
        Cc c;
        bool txt = false;
        pseq(txt, [&](HelPatom p) { c.pseq.push_back(std::move(p)); });
        if (txt) {
            if (c.pseq.empty())
                fail("a construction path needs at least one patom");
            return c;
        }
        if (c.pseq.empty())
            fail("a construction path needs at least one patom");
        expect('(');
        c.record = true;
        c.entries.push_back(cc());
        while (peek('#')) {
            ++pos_;
            c.entries.push_back(cc());
        }
        expect(')');
        if (c.entries.size() < 2)
            fail("a record needs at least two entries");
        return c;
    }

    HelCond hel_cond() {
        HelCond c;
        if (peek('!')) {
            ++pos_;
            c.cut = true;
        }
        bool txt = false;
        pseq(txt, [&](HelPatom p) { c.pseq.push_back(std::move(p)); });
        if (!txt)
            fail("a condition ends in '.txt = \"...\"'");
        expect('=');
        c.text = string_lit();
        return c;
    }

    rpn::Statement vcc() {
        rpn::Statement s;
        bool txt = false;
        if (!peek('(')) {
            pseq(txt, [&](HelPatom p) {
                rpn::Patom rp = to_patom(p);
                if (peek('{')) {
                    ++pos_;
                    rp.conds.push_back(vcond());
                    while (keyword("and")) {
                        pos_ += 3;
                        rp.conds.push_back(vcond());
                    }
                    expect('}');
                }
                s.chain.push_back(std::move(rp));
            });
        }
        if (txt)
            return s;
        expect('(');
        s.record = true;
        s.entries.push_back(vcc());
        while (peek('#')) {
            ++pos_;
            s.entries.push_back(vcc());
        }
        expect(')');
        if (s.entries.size() < 2)
            fail("a record needs at least two entries");
        return s;
    }

    rpn::Cond vcond() {
        rpn::Cond c;
        if (peek('!')) {
            ++pos_;
            c.cut = true;
        }
        bool txt = false;
        pseq(txt, [&](HelPatom p) { c.chain.push_back(to_patom(p)); });
        if (!txt)
            fail("a condition ends in '.txt = \"...\"'");
        expect('=');
        c.text = string_lit();
        return c;
    }

    std::string_view in_;
    bool vf_;
    std::size_t pos_ = 0;
};

std::string hel_patom_text(const HelPatom& p) {
    std::string out = p.tag;
    if (p.var && p.explicit_range)
        out += "[" + *p.var + ":" + p.range.to_string() + "]";
    else if (p.var)
        out += "[" + *p.var + "]";
    else if (p.explicit_range || !p.range.is_star())
        out += "[" + p.range.to_string() + "]";
    return out;
}

std::string pseq_text(const Pseq& ps) {
    std::string out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i].descendant)
            out += "->";
        else if (i)
            out += ".";
        out += hel_patom_text(ps[i]);
    }
    return out;
}

std::string cc_text(const Cc& c) {
    std::string out = pseq_text(c.pseq);
    if (!c.record)
        return out + ".txt";
    out += "(";
    for (std::size_t i = 0; i < c.entries.size(); ++i)
        out += (i ? " # " : "") + cc_text(c.entries[i]);
    return out + ")";
}

// Printing of one variable-free patom; throws outside the fragment.
std::string vf_patom_text(const rpn::Patom& p, bool first) {
    std::string tag;
    bool desc = false;
    if (!fragment_step(p.path.regex(), tag, desc))
        throw Error(ErrorKind::not_fragment, "patom path '" + p.path.to_string() + "' is neither t nor _*.t");
    std::string out = desc ? "->" : first ? "" : ".";
    out += tag;
    if (!p.range.is_star() || p.explicit_range)
        out += "[" + p.range.to_string() + "]";
    return out;
}

std::string vf_cond_text(const rpn::Cond& c) {
    std::string out = c.cut ? "!" : "";
    for (std::size_t i = 0; i < c.chain.size(); ++i) {
        if (!c.chain[i].conds.empty())
            throw Error(ErrorKind::not_fragment, "conditions may not be nested inside conditions");
        out += vf_patom_text(c.chain[i], i == 0);
    }
    return out + (c.chain.empty() ? "txt = " : ".txt = ") + quote(c.text);
}

std::string vf_text(const rpn::Statement& s) {
    std::string out;
    for (std::size_t i = 0; i < s.chain.size(); ++i) {
        const auto& p = s.chain[i];
        out += vf_patom_text(p, i == 0);
        if (!p.conds.empty()) {
            out += "{";
            for (std::size_t k = 0; k < p.conds.size(); ++k)
                out += (k ? " and " : "") + vf_cond_text(p.conds[k]);
            out += "}";
        }
    }
    if (!s.record)
        return out + (s.chain.empty() ? "txt" : ".txt");
    out += "(";
    for (std::size_t i = 0; i < s.entries.size(); ++i)
        out += (i ? " # " : "") + vf_text(s.entries[i]);
    return out + ")";
}

void collect_paths(const Cc& c, Pseq prefix, std::vector<Pseq>& out) {
    prefix.insert(prefix.end(), c.pseq.begin(), c.pseq.end());
    if (!c.record) {
        out.push_back(std::move(prefix));
        return;
    }
    for (const auto& e : c.entries)
        collect_paths(e, prefix, out);
}

void collect_vars(const Cc& c, std::map<std::string, int>& count) {
    for (const auto& p : c.pseq)
        if (p.var)
            ++count[*p.var];
    for (const auto& e : c.entries)
        collect_vars(e, count);
}

rpn::Statement desugar_cc(const Cc& c, const std::map<std::string, std::vector<rpn::Cond>>& nested) {
    rpn::Statement s;
    for (const auto& p : c.pseq) {
        rpn::Patom rp = to_patom(p);
        if (p.var)
            if (auto it = nested.find(*p.var); it != nested.end())
                rp.conds = it->second;
        s.chain.push_back(std::move(rp));
    }
    s.record = c.record;
    for (const auto& e : c.entries)
        s.entries.push_back(desugar_cc(e, nested));
    return s;
}

void check_cond(const rpn::Cond& c) {
    for (const auto& p : c.chain) {
        std::string tag;
        bool desc = false;
        if (!fragment_step(p.path.regex(), tag, desc))
            throw Error(ErrorKind::not_fragment, "patom path '" + p.path.to_string() + "' is neither t nor _*.t");
        if (!p.conds.empty())
            throw Error(ErrorKind::not_fragment, "conditions may not be nested inside conditions");
    }
}

bool has_cut(const rpn::Statement& s) {
    for (const auto& p : s.chain)
        for (const auto& c : p.conds)
            if (c.cut)
                return true;
    return std::any_of(s.entries.begin(), s.entries.end(), has_cut);
}

class VfEvaluator {
public:
    VfEvaluator(const doc::DocTree& t, EvalOptions opts) : t_(t), opts_(opts) {}

    ComplexObject statement(const rpn::Statement& s, doc::NodeId v) {
        std::vector<std::pair<doc::NodeId, ComplexObject>> out;
        walk(s, 0, v, out);
        return ComplexObject::set(std::move(out));
    }

private:
    void walk(const rpn::Statement& s, std::size_t pos, doc::NodeId v,
              std::vector<std::pair<doc::NodeId, ComplexObject>>& out) {
        if (pos == s.chain.size()) {
            if (!s.record) {
                out.emplace_back(v, ComplexObject::str(t_.txt(v)));
                return;
            }
            std::vector<ComplexObject> entries;
            for (const auto& e : s.entries)
                entries.push_back(statement(e, v));
            out.emplace_back(v, ComplexObject::record(std::move(entries)));
            return;
        }
        for (doc::NodeId w : successors(s.chain[pos], v))
            walk(s, pos + 1, w, out);
    }

    // Condition filter (with cut when enabled), then the range.
    std::vector<doc::NodeId> successors(const rpn::Patom& p, doc::NodeId v) {
        std::vector<doc::NodeId> kept;
        for (doc::NodeId z : path::subelem(t_, v, p.path)) {
            bool all = true, cut_ok = true;
            for (const auto& c : p.conds) {
                bool ok = holds(c, z);
                all = all && ok;
                if (opts_.cut && c.cut && !ok)
                    cut_ok = false;
            }
            if (!cut_ok)
                break;
            if (all)
                kept.push_back(z);
        }
        return path::select(kept, p.range);
    }

    bool holds(const rpn::Cond& c, doc::NodeId v) {
        std::vector<doc::NodeId> ends{v};
        for (const auto& p : c.chain) {
            std::vector<doc::NodeId> next;
            for (doc::NodeId u : ends) {
                auto succ = successors(p, u);
                next.insert(next.end(), succ.begin(), succ.end());
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            ends = std::move(next);
        }
        if (ends.size() > 1) {
            std::string msg = "condition '" + rpn::to_text(c) + "' selects " + std::to_string(ends.size()) +
                              " nodes from node " + std::to_string(v);
            if (opts_.strict)
                throw Error(ErrorKind::single_value_violation, msg);
            if (opts_.warnings)
                opts_.warnings->push_back(msg);
        }
        return std::any_of(ends.begin(), ends.end(), [&](doc::NodeId u) { return t_.txt(u) == c.text; });
    }

    const doc::DocTree& t_;
    EvalOptions opts_;
};

} // namespace

HelStatement parse_hel(std::string_view text) { return HelParser(text, false).hel(); }

std::string to_text(const HelStatement& stmt) {
    std::string out = cc_text(stmt.cc);
    for (std::size_t i = 0; i < stmt.where.size(); ++i) {
        const auto& c = stmt.where[i];
        out += i ? " and " : " where ";
        out += (c.cut ? "!" : "") + pseq_text(c.pseq) + ".txt = " + quote(c.text);
    }
    return out + ";";
}

void validate_vars(const HelStatement& stmt) {
    std::map<std::string, int> count;
    collect_vars(stmt.cc, count);
    for (const auto& [v, n] : count)
        if (n > 1)
            throw Error(ErrorKind::var_used_twice, "index variable '" + v + "' occurs " + std::to_string(n) +
                                                       " times in the construction part");
    std::vector<Pseq> paths;
    collect_paths(stmt.cc, {}, paths);

    for (std::size_t ci = 0; ci < stmt.where.size(); ++ci) {
        const HelCond& c = stmt.where[ci];
        std::string label = "condition " + std::to_string(ci + 1);
        std::size_t last = Pseq::size_type(-1);
        for (std::size_t i = 0; i < c.pseq.size(); ++i) {
            if (!c.pseq[i].var)
                continue;
            if (!count.count(*c.pseq[i].var))
                throw Error(ErrorKind::var_unbound,
                            label + " uses index variable '" + *c.pseq[i].var + "' not bound in the construction part");
            last = i;
        }
        if (last == Pseq::size_type(-1))
            throw Error(ErrorKind::no_variable, label + " has no index variable to attach to");
        bool matched = false;
        std::string why;
        for (const auto& path : paths) {
            if (path.size() <= last)
                continue;
            bool ok = true;
            for (std::size_t i = 0; i <= last && ok; ++i) {
                const HelPatom& a = c.pseq[i];
                const HelPatom& b = path[i];
                if (a.tag != b.tag || a.descendant != b.descendant) {
                    ok = false;
                    why = "tag '" + a.tag + "' at step " + std::to_string(i + 1) + " differs from '" + b.tag + "'";
                } else if (a.var != b.var) {
                    ok = false;
                    why = "index variable at step " + std::to_string(i + 1) + " differs";
                } else if (!a.range.is_star()) {
                    // The prefix is dropped by desugaring; a range on it would be lost.
                    ok = false;
                    why = "range at step " + std::to_string(i + 1) + " lies in the shared prefix";
                }
            }
            if (ok) {
                matched = true;
                break;
            }
        }
        if (!matched)
            throw Error(ErrorKind::prefix_mismatch,
                        label + " does not match a construction path" + (why.empty() ? "" : ": " + why));
    }
}

rpn::Statement desugar(const HelStatement& stmt) {
    validate_vars(stmt);
    std::map<std::string, std::vector<rpn::Cond>> nested;
    for (const auto& c : stmt.where) {
        std::size_t last = 0;
        for (std::size_t i = 0; i < c.pseq.size(); ++i)
            if (c.pseq[i].var)
                last = i;
        rpn::Cond rc;
        rc.text = c.text;
        rc.cut = c.cut;
        for (std::size_t i = last + 1; i < c.pseq.size(); ++i)
            rc.chain.push_back(to_patom(c.pseq[i]));
        nested[*c.pseq[last].var].push_back(std::move(rc));
    }
    return desugar_cc(stmt.cc, nested);
}

rpn::Statement parse_vhel(std::string_view text) { return HelParser(text, true).vhel(); }

std::string to_vhel(const rpn::Statement& stmt) { return vf_text(stmt) + ";"; }

void check_vf(const rpn::Statement& stmt) {
    for (const auto& p : stmt.chain) {
        std::string tag;
        bool desc = false;
        if (!fragment_step(p.path.regex(), tag, desc))
            throw Error(ErrorKind::not_fragment, "patom path '" + p.path.to_string() + "' is neither t nor _*.t");
        for (const auto& c : p.conds)
            check_cond(c);
    }
    for (const auto& e : stmt.entries)
        check_vf(e);
}

ComplexObject eval_vf(const rpn::Statement& stmt, const doc::DocTree& t, EvalOptions options) {
    return VfEvaluator(t, options).statement(stmt, doc::root_id);
}

rpn::Translation translate_vf(const rpn::Statement& stmt) {
    check_vf(stmt);
    if (has_cut(stmt))
        throw Error(ErrorKind::unsupported, "cut-marked conditions have no rule translation");
    return rpn::translate(stmt, rpn::RangePlacement::rule_level);
}

} // namespace wrap::hel
