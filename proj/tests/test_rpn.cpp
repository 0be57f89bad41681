#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wrap/error.hpp"
#include "wrap/rpn.hpp"
#include "wrap/testkit.hpp"

using namespace wrap;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::malformed_input;
}

std::string eval(const char* text) { return rpn::eval_rpn(rpn::parse_rpn(text), fixtures::doc1()).canonical(); }

} // namespace

TEST(RpnParse, RowFilter) {
    auto s = rpn::parse_rpn(fixtures::rowfilter);
    ASSERT_EQ(s.chain.size(), 5u);
    EXPECT_FALSE(s.record);
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_EQ(s.chain[i].conds.size(), i == 3 ? 1u : 0u);
    const auto& c = s.chain[3].conds[0];
    EXPECT_EQ(c.text, "item");
    ASSERT_EQ(c.chain.size(), 1u);
    EXPECT_EQ(c.chain[0].range, path::Range::index(0));
    EXPECT_EQ(s.chain[4].range, path::Range::index(1));
}

TEST(RpnParse, Txt) {
    auto s = rpn::parse_rpn("txt");
    EXPECT_TRUE(s.chain.empty());
    EXPECT_FALSE(s.record);
}

TEST(RpnParse, UnbalancedRecord) {
    EXPECT_EQ(kind_of([] { rpn::parse_rpn("(txt # txt"); }), ErrorKind::syntax_error);
}

TEST(RpnParse, CutNeedsOption) {
    EXPECT_EQ(kind_of([] { rpn::parse_rpn(fixtures::cut_pin); }), ErrorKind::syntax_error);
    EXPECT_TRUE(rpn::parse_rpn(fixtures::cut_pin, {true}).chain[3].conds[0].cut);
}

TEST(RpnParse, PrintReparses) {
    for (const char* text : {fixtures::rowfilter, fixtures::range_pin, "txt", "(a.txt # b.txt)",
                             "(_*.td).txt", "html.(body.txt # _.table.txt)", "(a|b)*.c[last]{d.txt = \"x\" and txt = \"\"}.txt"}) {
        auto s = rpn::parse_rpn(text);
        EXPECT_EQ(rpn::parse_rpn(rpn::to_text(s)), s) << text;
    }
}

TEST(RpnType, RowFilterIsFlat) {
    EXPECT_EQ(rpn::typecheck(rpn::parse_rpn(fixtures::rowfilter)), ObjectType::set_of(ObjectType::str()));
    EXPECT_NE(rpn::typecheck(rpn::parse_rpn(fixtures::rowfilter)),
              ObjectType::set_of(ObjectType::set_of(ObjectType::str())));
}

TEST(RpnType, Record) {
    auto set_str = ObjectType::set_of(ObjectType::str());
    EXPECT_EQ(rpn::typecheck(rpn::parse_rpn("(a.txt # b.txt)")),
              ObjectType::set_of(ObjectType::record_of({set_str, set_str})));
    EXPECT_EQ(rpn::typecheck(rpn::parse_rpn("txt")), set_str);
}

TEST(RpnEval, RowFilter) { EXPECT_EQ(eval(fixtures::rowfilter), R"({"A","C"})"); }

TEST(RpnEval, TxtAtRoot) { EXPECT_EQ(eval("txt"), R"({"itemAxBitemC"})"); }

TEST(RpnEval, RangeBeforeCondition) { EXPECT_EQ(eval(fixtures::range_pin), "{}"); }

TEST(RpnEval, ValueConformsToType) {
    auto t = fixtures::doc1();
    for (const char* text : {fixtures::rowfilter, "(html.txt # _*.td.txt)", "html.body.table.tr.(td[0].txt # td[1].txt)"}) {
        auto s = rpn::parse_rpn(text);
        EXPECT_TRUE(conforms(rpn::eval_rpn(s, t), rpn::typecheck(s))) << text;
    }
}

TEST(RpnEval, MatchesOracle) {
    auto t = fixtures::doc1();
    for (const char* text : {fixtures::rowfilter, fixtures::range_pin, "txt", "html.body.table.tr.(td[0].txt # td[1].txt)"}) {
        auto engine = rpn::eval_rpn(rpn::parse_rpn(text), t).canonical();
        auto oracle = testkit::naive_rpn(testkit::parse_stmt(text, testkit::Syntax::rpn), t);
        EXPECT_EQ(engine, oracle) << text;
    }
}

TEST(RpnTranslate, RowFilterCounts) {
    auto tr = rpn::translate_rpn(rpn::parse_rpn(fixtures::rowfilter));
    auto conds = tr.program.condition_predicates();
    std::size_t chain = 0;
    for (const auto& p : tr.program.predicates())
        if (!conds.count(p))
            ++chain;
    EXPECT_EQ(chain, 5u);
    EXPECT_EQ(tr.aux.size(), 4u);
    // One rule for the td[0] step, one for its txt = "item" tail.
    EXPECT_EQ(conds.size(), 2u);
    ASSERT_TRUE(tr.schema.pred.has_value());
    EXPECT_FALSE(tr.aux.count(*tr.schema.pred));
    EXPECT_EQ(elog::schema_type(tr.schema), rpn::typecheck(rpn::parse_rpn(fixtures::rowfilter)));
}

TEST(RpnTranslate, TxtIsEmptyProgram) {
    auto tr = rpn::translate_rpn(rpn::parse_rpn("txt"));
    EXPECT_TRUE(tr.program.rules.empty());
    EXPECT_FALSE(tr.schema.pred.has_value());
    EXPECT_FALSE(tr.schema.record);
    EXPECT_EQ(rpn::run_translation(tr, fixtures::doc1()).canonical(), R"({"itemAxBitemC"})");
}

TEST(RpnTranslate, RuleLevelPlacement) {
    auto tr = rpn::translate(rpn::parse_rpn("a[1].b.txt"), rpn::RangePlacement::rule_level);
    ASSERT_EQ(tr.program.rules.size(), 2u);
    EXPECT_EQ(tr.program.rules[0].rule_range, path::Range::index(1));
    EXPECT_TRUE(tr.program.rules[0].range.is_star());
    EXPECT_FALSE(tr.program.rules[1].rule_range.has_value());
}

TEST(RpnTranslate, EndToEndOnDoc1) {
    auto t = fixtures::doc1();
    for (const char* text : {fixtures::rowfilter, fixtures::range_pin, "txt", "html.body.table.tr.(td[0].txt # td[1].txt)",
                             "(_*.tr)[last].td.txt", "(html.txt # _*.td{txt = \"x\"}.txt)"}) {
        auto s = rpn::parse_rpn(text);
        auto tr = rpn::translate_rpn(s);
        EXPECT_EQ(rpn::run_translation(tr, t), rpn::eval_rpn(s, t)) << text;
        // Translations re-parse to the same program.
        EXPECT_EQ(elog::parse_elog(elog::to_text(tr.program)), tr.program) << text;
    }
}

TEST(RpnTranslate, EndToEndOnRandomInputs) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        testkit::TreeGenSpec ts;
        ts.seed = seed;
        testkit::StmtGenSpec ss;
        ss.seed = seed;
        auto t = testkit::gen_tree(ts);
        auto text = testkit::print_stmt(testkit::gen_stmt(ss), testkit::Syntax::rpn);
        auto s = rpn::parse_rpn(text);
        ASSERT_EQ(rpn::run_translation(rpn::translate_rpn(s), t), rpn::eval_rpn(s, t))
            << text << " on " << doc::serialize(t);
    }
}
