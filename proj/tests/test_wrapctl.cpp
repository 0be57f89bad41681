#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "wrap/cli.hpp"

using namespace wrap;
using namespace wrap::cli;
using fixtures::corpus;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / ("wrapctl_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

} // namespace

TEST(Wrapctl, DetectLanguage) {
    EXPECT_EQ(detect_language("a/b.rpn"), Lang::rpn);
    EXPECT_EQ(detect_language("x.hel"), Lang::hel);
    EXPECT_EQ(detect_language("x.vhel"), Lang::vhel);
    EXPECT_EQ(detect_language("x.elog"), Lang::elog);
    EXPECT_FALSE(detect_language("x.txt").has_value());
    EXPECT_FALSE(detect_language("rpn").has_value());
}

TEST(Wrapctl, RunRowFilter) {
    auto o = cmd_run({corpus("rowfilter.rpn"), corpus("doc1.doc")});
    EXPECT_EQ(o.code, ok) << o.err;
    EXPECT_EQ(o.out, "[\"A\",\"C\"]\n");
}

TEST(Wrapctl, RunUnstratified) {
    auto o = cmd_run({corpus("unstratified.elog"), corpus("doc1.doc")});
    EXPECT_EQ(o.code, wrapper_error);
    EXPECT_NE(o.err.find("NotStratified"), std::string::npos);
}

TEST(Wrapctl, RunMalformedDocument) {
    auto o = cmd_run({corpus("rowfilter.rpn"), corpus("malformed.doc")});
    EXPECT_EQ(o.code, document_error);
    EXPECT_NE(o.err.find("malformed.doc:1:"), std::string::npos) << o.err;
}

TEST(Wrapctl, WrapperErrorCarriesLocation) {
    auto path = temp_file("bad.rpn", "html.body\n  .tr[1-].txt\n");
    auto o = cmd_run({path, corpus("doc1.doc")});
    EXPECT_EQ(o.code, wrapper_error);
    EXPECT_NE(o.err.find("bad.rpn:2:"), std::string::npos) << o.err;
}

TEST(Wrapctl, RunCutAndLenient) {
    RunConfig c{corpus("cut.vhel"), corpus("doc1.doc")};
    EXPECT_EQ(cmd_run(c).out, "[\"A\",\"C\"]\n");
    c.cut = true;
    EXPECT_EQ(cmd_run(c).out, "[\"A\"]\n");
    auto multi = temp_file("multi.vhel", R"(html.body.table.tr{td.txt = "item"}.td[1].txt)");
    RunConfig m{multi, corpus("doc1.doc")};
    EXPECT_EQ(cmd_run(m).code, wrapper_error);
    m.strict = false;
    auto o = cmd_run(m);
    EXPECT_EQ(o.code, ok);
    EXPECT_EQ(o.out, "[\"A\",\"C\"]\n");
    EXPECT_NE(o.err.find("warning"), std::string::npos);
}

TEST(Wrapctl, RunOutputModes) {
    RunConfig c{corpus("quadratic.elog"), corpus("quadratic.doc")};
    auto atoms = cmd_run(c);
    EXPECT_EQ(atoms.out, fixtures::slurp(corpus("quadratic.elog.expected.atoms")));
    c.out = OutMode::dot;
    auto dot = cmd_run(c);
    EXPECT_EQ(dot.out.rfind("digraph", 0), 0u);
    c.out = OutMode::json;
    EXPECT_EQ(cmd_run(c).code, wrapper_error);
    RunConfig r{corpus("rowfilter.rpn"), corpus("doc1.doc"), OutMode::atoms};
    EXPECT_NE(cmd_run(r).out.find("p5(14,17)"), std::string::npos);
}

TEST(Wrapctl, CorpusGoldens) {
    std::size_t checked = 0;
    for (const auto& entry : std::filesystem::directory_iterator(WRAP_CORPUS_DIR)) {
        auto path = entry.path().string();
        if (!detect_language(path))
            continue;
        auto doc = entry.path();
        doc.replace_extension(".doc");
        std::string document = std::filesystem::exists(doc) ? doc.string() : corpus("doc1.doc");
        for (auto [suffix, mode, cut] : {std::tuple{".expected.json", OutMode::json, false},
                                         std::tuple{".cut.expected.json", OutMode::json, true},
                                         std::tuple{".expected.atoms", OutMode::atoms, false}}) {
            std::string golden = path + suffix;
            if (!std::filesystem::exists(golden))
                continue;
            RunConfig c{path, document, mode};
            c.cut = cut;
            auto o = cmd_run(c);
            EXPECT_EQ(o.code, ok) << path << ": " << o.err;
            EXPECT_EQ(o.out, fixtures::slurp(golden)) << golden;
            ++checked;
        }
    }
    EXPECT_GE(checked, 12u);
}

TEST(Wrapctl, TranslateListing) {
    auto o = cmd_translate(corpus("listing.hel"), Target::vhel);
    EXPECT_EQ(o.code, ok) << o.err;
    EXPECT_EQ(o.out, fixtures::slurp(corpus("listing.vhel")));
}

TEST(Wrapctl, TranslateTxt) {
    auto path = temp_file("txt.rpn", "txt\n");
    auto o = cmd_translate(path, Target::elog);
    EXPECT_EQ(o.code, ok);
    EXPECT_EQ(o.out, "@schema {self:str}.\n");
    auto p = elog::parse_elog(o.out);
    EXPECT_TRUE(p.rules.empty());
}

TEST(Wrapctl, TranslateUnsupportedDirections) {
    EXPECT_EQ(cmd_translate(corpus("rowfilter.rpn"), Target::vhel).code, wrapper_error);
    EXPECT_EQ(cmd_translate(corpus("parity.elog"), Target::elog).code, wrapper_error);
    EXPECT_EQ(cmd_translate(corpus("cut.vhel"), Target::elog).code, wrapper_error);
}

TEST(Wrapctl, TranslationsReparseAndAgree) {
    auto t = fixtures::doc1();
    for (const char* name : {"rowfilter.rpn", "pin_range.rpn", "listing.hel", "listing.vhel", "pin_range.vhel"}) {
        Wrapper w = load_wrapper(corpus(name));
        auto elog_text = cmd_translate(corpus(name), Target::elog).out;
        auto program = elog::parse_elog(elog_text);
        EXPECT_EQ(program, as_program(w)) << name;
        auto out = temp_file(std::string(name) + ".elog", elog_text);
        Wrapper back = load_wrapper(out);
        EXPECT_EQ(evaluate(back, t), evaluate(w, t)) << name;
        if (w.lang != Lang::rpn) {
            auto vhel_text = cmd_translate(corpus(name), Target::vhel).out;
            EXPECT_EQ(hel::parse_vhel(vhel_text), w.stmt) << name;
        }
    }
}

TEST(Wrapctl, Check) {
    EXPECT_EQ(cmd_check(corpus("rowfilter.rpn")).out, "ok {String}\n");
    EXPECT_EQ(cmd_check(corpus("listing.hel")).out, "ok {<{String}, {String}>}\n");
    EXPECT_EQ(cmd_check(corpus("unstratified.elog")).code, wrapper_error);
    EXPECT_EQ(cmd_check(corpus("missing.rpn")).code, wrapper_error);
    EXPECT_EQ(cmd_check(corpus("doc1.doc")).code, wrapper_error);
}

TEST(Wrapctl, DiffGeneratedRowFilter) {
    DiffConfig d{corpus("rowfilter.rpn"), corpus("rowfilter.elog")};
    d.generate = 500;
    d.seed = 1;
    auto o = cmd_diff(d);
    EXPECT_EQ(o.code, ok) << o.out << o.err;
    EXPECT_EQ(o.out.rfind("no divergence", 0), 0u);
}

TEST(Wrapctl, DiffPinnedDivergence) {
    DiffConfig d{corpus("pin_range.rpn"), corpus("pin_range.vhel")};
    d.document = corpus("doc1.doc");
    auto o = cmd_diff(d);
    EXPECT_EQ(o.code, divergence);
    EXPECT_NE(o.out.find("pin_range.rpn: []"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("pin_range.vhel: [\"C\"]"), std::string::npos) << o.out;
}

TEST(Wrapctl, DiffGeneratedDivergenceIsShrunk) {
    DiffConfig d{temp_file("small.rpn", R"((_*.a)[1]{b.txt = "x"}.txt)"),
                 temp_file("small.vhel", R"(->a[1]{b.txt = "x"}.txt)")};
    d.generate = 500;
    d.strict = false;
    auto o = cmd_diff(d);
    ASSERT_EQ(o.code, divergence) << o.out;
    EXPECT_NE(o.out.find("shrunk"), std::string::npos);
    // A witness needs two a elements, one of them with a b child reading "x".
    auto line = o.out.substr(o.out.find("document: ") + 10);
    auto t = doc::parse_document(line.substr(0, line.find('\n')));
    EXPECT_LE(t.size(), 8u) << o.out;
}

TEST(Wrapctl, DiffIdentical) {
    DiffConfig d{corpus("listing.vhel"), corpus("listing.vhel")};
    d.generate = 50;
    EXPECT_EQ(cmd_diff(d).code, ok);
    d.generate = 0;
    d.document = corpus("doc1.doc");
    EXPECT_EQ(cmd_diff(d).out, "no divergence\n");
}

TEST(Wrapctl, Bench) {
    EXPECT_EQ(bench_quadratic(3, 2).atoms, 6u);
    EXPECT_EQ(bench_quadratic(1, 1).atoms, 1u);
    EXPECT_EQ(bench_quadratic(100, 100).atoms, 10000u);
    EXPECT_EQ(cmd_bench(0, 3).code, usage_error);
    EXPECT_NE(cmd_bench(3, 2).out.find("atoms=6"), std::string::npos);
}
