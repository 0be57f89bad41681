#include "wrap/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "wrap/testkit.hpp"

namespace wrap::cli {

namespace {

std::string read_file(const std::string& path, int code) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Failure{code, path + ": cannot read file"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void add_tags(const path::Regex& re, Alphabet& a) {
    if (re.kind == path::Regex::Kind::tag || re.kind == path::Regex::Kind::not_tag) {
        if (re.tag != doc::text_tag)
            a.tags.insert(re.tag);
        return;
    }
    for (const auto& p : re.parts)
        add_tags(p, a);
}

void add_stmt(const rpn::Statement& s, Alphabet& a);

void add_patoms(const std::vector<rpn::Patom>& chain, Alphabet& a) {
    for (const auto& p : chain) {
        add_tags(p.path.regex(), a);
        for (const auto& c : p.conds) {
            a.texts.insert(c.text);
            add_patoms(c.chain, a);
        }
    }
}

void add_stmt(const rpn::Statement& s, Alphabet& a) {
    add_patoms(s.chain, a);
    for (const auto& e : s.entries)
        add_stmt(e, a);
}

std::string render(const ComplexObject& o) { return o.to_json().dump() + "\n"; }

std::string atoms_of(const elog::Program& p, const doc::DocTree& t, OutMode mode) {
    auto store = elog::eval_fixpoint(p, t);
    if (mode == OutMode::dot)
        return elog::output_graph(store, t).to_dot(t);
    return store.dump();
}

// Runs `body`, mapping loader failures and engine errors to exit codes.
template <class F>
Outcome guarded(F&& body) {
    try {
        return body();
    } catch (const Failure& f) {
        return {f.code, "", f.message + "\n"};
    } catch (const Error& e) {
        return {wrapper_error, "", std::string(e.what()) + "\n"};
    }
}

} // namespace

std::optional<Lang> detect_language(std::string_view path) {
    auto dot = path.rfind('.');
    if (dot == std::string_view::npos)
        return std::nullopt;
    auto ext = path.substr(dot + 1);
    if (ext == "rpn")
        return Lang::rpn;
    if (ext == "hel")
        return Lang::hel;
    if (ext == "vhel")
        return Lang::vhel;
    if (ext == "elog")
        return Lang::elog;
    return std::nullopt;
}

std::string_view to_string(Lang lang) {
    switch (lang) {
    case Lang::rpn: return "rpn";
    case Lang::hel: return "hel";
    case Lang::vhel: return "vhel";
    case Lang::elog: return "elog";
    }
    return "?";
}

std::string located(const std::string& path, std::string_view text, const Error& e) {
    std::string out = path;
    if (e.offset() != Error::npos) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < e.offset() && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        out += ":" + std::to_string(line) + ":" + std::to_string(col);
    }
    return out + ": " + std::string(wrap::to_string(e.kind())) + ": " + e.message();
}

Wrapper load_wrapper(const std::string& path) {
    auto lang = detect_language(path);
    if (!lang)
        throw Failure{wrapper_error, path + ": unknown wrapper language (expected .rpn, .hel, .vhel or .elog)"};
    Wrapper w;
    w.path = path;
    w.lang = *lang;
    w.text = read_file(path, wrapper_error);
    try {
        switch (w.lang) {
        case Lang::rpn:
            w.stmt = rpn::parse_rpn(w.text);
            break;
        case Lang::hel:
            w.hel = hel::parse_hel(w.text);
            w.stmt = hel::desugar(w.hel);
            break;
        case Lang::vhel:
            w.stmt = hel::parse_vhel(w.text);
            hel::check_vf(w.stmt);
            break;
        case Lang::elog:
            w.program = elog::parse_elog(w.text);
            elog::check_program(w.program);
            break;
        }
    } catch (const Error& e) {
        throw Failure{wrapper_error, located(path, w.text, e)};
    }
    return w;
}

doc::DocTree load_document(const std::string& path) {
    std::string text = read_file(path, document_error);
    try {
        return doc::parse_document(text);
    } catch (const Error& e) {
        throw Failure{document_error, located(path, text, e)};
    }
}

ComplexObject evaluate(const Wrapper& w, const doc::DocTree& t, const EvalSettings& settings) {
    switch (w.lang) {
    case Lang::rpn:
        return rpn::eval_rpn(w.stmt, t);
    case Lang::hel:
    case Lang::vhel:
        return hel::eval_vf(w.stmt, t, {settings.strict, settings.cut, settings.warnings});
    case Lang::elog:
        if (!w.program.schema)
            throw Failure{wrapper_error, w.path + ": no @schema declared; only --out atoms or dot apply"};
        auto store = elog::eval_fixpoint(w.program, t);
        return elog::to_complex_object(elog::eliminate_aux(store, w.program.aux, w.program), *w.program.schema, t);
    }
    return {};
}

elog::Program as_program(const Wrapper& w) {
    switch (w.lang) {
    case Lang::rpn: return rpn::translate(w.stmt, rpn::RangePlacement::in_step).program;
    case Lang::hel:
    case Lang::vhel: return hel::translate_vf(w.stmt).program;
    case Lang::elog: return w.program;
    }
    return {};
}

Outcome cmd_run(const RunConfig& config) {
    return guarded([&] {
        Wrapper w = load_wrapper(config.wrapper);
        doc::DocTree t = load_document(config.document);
        OutMode mode = config.out.value_or(w.lang == Lang::elog ? OutMode::atoms : OutMode::json);
        Outcome o;
        if (mode != OutMode::json) {
            o.out = atoms_of(as_program(w), t, mode);
            return o;
        }
        std::vector<std::string> warnings;
        o.out = render(evaluate(w, t, {config.strict, config.cut, &warnings}));
        for (const auto& msg : warnings)
            o.err += config.wrapper + ": warning: " + msg + "\n";
        return o;
    });
}

Outcome cmd_translate(const std::string& wrapper, Target target) {
    return guarded([&] {
        Wrapper w = load_wrapper(wrapper);
        Outcome o;
        if (target == Target::vhel) {
            if (w.lang != Lang::hel && w.lang != Lang::vhel)
                throw Failure{wrapper_error, wrapper + ": no translation from " + std::string(to_string(w.lang)) +
                                                 " to vhel (only hel and vhel sources)"};
            o.out = hel::to_vhel(w.stmt) + "\n";
            return o;
        }
        switch (w.lang) {
        case Lang::rpn: o.out = elog::to_text(rpn::translate(w.stmt, rpn::RangePlacement::in_step).program); break;
        case Lang::hel:
        case Lang::vhel: o.out = elog::to_text(hel::translate_vf(w.stmt).program); break;
        case Lang::elog: throw Failure{wrapper_error, wrapper + ": already an elog program"};
        }
        return o;
    });
}

Outcome cmd_check(const std::string& wrapper) {
    return guarded([&] {
        Wrapper w = load_wrapper(wrapper);
        Outcome o;
        switch (w.lang) {
        case Lang::rpn:
        case Lang::hel:
        case Lang::vhel: o.out = "ok " + rpn::typecheck(w.stmt).to_string() + "\n"; break;
        case Lang::elog:
            o.out = "ok " + std::to_string(w.program.rules.size()) + " rules";
            if (w.program.schema)
                o.out += " " + elog::schema_type(*w.program.schema).to_string();
            o.out += "\n";
            break;
        }
        return o;
    });
}

Alphabet alphabet_of(const Wrapper& w) {
    Alphabet a;
    if (w.lang != Lang::elog) {
        add_stmt(w.stmt, a);
        return a;
    }
    for (const auto& r : w.program.rules) {
        add_tags(r.path.regex(), a);
        for (const auto& c : r.conds) {
            if (c.kind == elog::Condition::Kind::contains)
                add_tags(c.path.regex(), a);
            else if (c.kind == elog::Condition::Kind::contains_s)
                a.texts.insert(c.text);
            else if (c.kind == elog::Condition::Kind::label)
                a.tags.insert(c.text);
        }
    }
    return a;
}

Outcome cmd_diff(const DiffConfig& config) {
    return guarded([&] {
        Wrapper a = load_wrapper(config.a);
        Wrapper b = load_wrapper(config.b);
        // Evaluation errors are results too: strict single-valuedness may
        // fail on one side only.
        auto value = [&](const Wrapper& w, const doc::DocTree& t) {
            try {
                return evaluate(w, t, {config.strict, false, nullptr}).to_json().dump();
            } catch (const Error& e) {
                return std::string("error: ") + e.what();
            }
        };
        auto differs = [&](const doc::DocTree& t) { return value(a, t) != value(b, t); };
        auto report = [&](const doc::DocTree& t, const std::string& where) {
            Outcome o;
            o.code = divergence;
            o.out = "divergence on " + where + "\n";
            o.out += "  document: " + doc::serialize(t) + "\n";
            o.out += "  " + config.a + ": " + value(a, t) + "\n";
            o.out += "  " + config.b + ": " + value(b, t) + "\n";
            return o;
        };
        if (config.document) {
            doc::DocTree t = load_document(*config.document);
            if (differs(t))
                return report(t, *config.document);
            return Outcome{ok, "no divergence\n", ""};
        }
        Alphabet al = alphabet_of(a);
        Alphabet bl = alphabet_of(b);
        al.tags.insert(bl.tags.begin(), bl.tags.end());
        al.texts.insert(bl.texts.begin(), bl.texts.end());
        // One tag outside the wrappers' alphabet exercises `_` and `^t`.
        al.tags.insert("z");
        al.texts.insert("x");
        testkit::TreeGenSpec spec;
        spec.max_nodes = config.max_nodes;
        spec.tags.assign(al.tags.begin(), al.tags.end());
        spec.texts.assign(al.texts.begin(), al.texts.end());
        for (std::size_t i = 0; i < config.generate; ++i) {
            spec.seed = config.seed + i;
            doc::DocTree t = testkit::gen_tree(spec);
            if (differs(t))
                return report(testkit::shrink_tree(std::move(t), differs),
                              "generated document " + std::to_string(i) + " (seed " + std::to_string(spec.seed) +
                                  ", shrunk)");
        }
        return Outcome{ok, "no divergence in " + std::to_string(config.generate) + " documents\n", ""};
    });
}

doc::DocTree quadratic_tree(std::size_t m, std::size_t n) {
    doc::DocTree::Builder b;
    for (std::size_t i = 0; i < m; ++i)
        b.open("b");
    for (std::size_t j = 0; j < n; ++j) {
        b.open("l");
        b.close();
    }
    for (std::size_t i = 0; i < m; ++i)
        b.close();
    return std::move(b).finish();
}

elog::Program quadratic_program() { return elog::parse_elog("p(X0,X) :- dom(_,X0), subelem[\"(^l)*.l\"](X0,X)."); }

BenchResult bench_quadratic(std::size_t m, std::size_t n) {
    doc::DocTree t = quadratic_tree(m, n);
    elog::Program p = quadratic_program();
    auto start = std::chrono::steady_clock::now();
    auto store = elog::eval_fixpoint(p, t);
    auto stop = std::chrono::steady_clock::now();
    return {store.count("p"), std::chrono::duration<double>(stop - start).count()};
}

Outcome cmd_bench(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0)
        return {usage_error, "", "bench: m and n must be at least 1\n"};
    BenchResult r = bench_quadratic(m, n);
    std::ostringstream out;
    out << "quadratic m=" << m << " n=" << n << " atoms=" << r.atoms << " seconds=" << r.seconds << "\n";
    return {ok, out.str(), ""};
}

} // namespace wrap::cli
