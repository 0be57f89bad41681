#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wrap/rpn.hpp"
#include "wrap/testkit.hpp"

using namespace wrap;
using namespace wrap::testkit;
using doc::NodeId;

TEST(NaiveSubelem, EpsilonFreeOnSingleNode) {
    doc::DocTree t = doc::DocTree::Builder().finish();
    EXPECT_TRUE(naive_subelem(t, doc::root_id, parse_re("a.b*")).empty());
    EXPECT_EQ(naive_subelem(t, doc::root_id, parse_re("a*")), std::vector<NodeId>{doc::root_id});
}

TEST(NaiveSubelem, SingleTagIsChildren) {
    auto t = doc::parse_document("<r><a/><b><a/></b><a>x</a></r>");
    EXPECT_EQ(naive_subelem(t, 1, parse_re("a")), (std::vector<NodeId>{2, 5}));
}

TEST(Regex, PrintReparses) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto re = gen_re(seed, {"a", "b"}, 4);
        EXPECT_EQ(re_text(parse_re(re_text(re))), re_text(re));
    }
}

TEST(Sel, Select) {
    std::vector<NodeId> s{1, 2, 3, 4, 5};
    EXPECT_EQ(naive_select(s, parse_sel("*")), s);
    EXPECT_EQ(naive_select(s, parse_sel("1-2")), (std::vector<NodeId>{2, 3}));
    EXPECT_EQ(naive_select(s, parse_sel("0,3-9")), (std::vector<NodeId>{1, 4, 5}));
    EXPECT_EQ(naive_select(s, parse_sel("last")), std::vector<NodeId>{5});
    EXPECT_TRUE(naive_select(s, parse_sel("7")).empty());
}

TEST(Oracles, RowFilter) {
    auto t = fixtures::doc1();
    EXPECT_EQ(naive_rpn(parse_stmt(fixtures::rowfilter, Syntax::rpn), t), R"({"A","C"})");
    EXPECT_EQ(naive_rpn(parse_stmt("txt", Syntax::rpn), t), R"({"itemAxBitemC"})");
    EXPECT_EQ(naive_txt(t, doc::root_id), "itemAxBitemC");
}

TEST(Oracles, DivergencePair) {
    auto t = fixtures::doc1();
    EXPECT_EQ(naive_rpn(parse_stmt(fixtures::range_pin, Syntax::rpn), t), "{}");
    EXPECT_EQ(naive_helvf(parse_stmt(fixtures::range_pin, Syntax::vhel), t), R"({"C"})");
    EXPECT_EQ(naive_helvf(parse_stmt(fixtures::cut_pin, Syntax::vhel), t, true), R"({"A"})");
}

TEST(Oracles, RecordListing) {
    EXPECT_EQ(naive_helvf(parse_stmt(fixtures::vhel_listing, Syntax::vhel), fixtures::doc1()),
              R"({<{"item"},{"A","C"}>})");
}

TEST(GenTree, Deterministic) {
    TreeGenSpec spec;
    spec.seed = 42;
    EXPECT_EQ(gen_tree(spec), gen_tree(spec));
    spec.seed = 43;
    TreeGenSpec other;
    other.seed = 44;
    EXPECT_NE(doc::serialize(gen_tree(spec)), doc::serialize(gen_tree(other)));
}

TEST(GenTree, SingleNodeBound) {
    TreeGenSpec spec;
    spec.max_nodes = 1;
    for (spec.seed = 0; spec.seed < 20; ++spec.seed)
        EXPECT_EQ(gen_tree(spec).size(), 1u);
}

TEST(GenTree, SizeBound) {
    TreeGenSpec spec;
    spec.max_nodes = 40;
    for (spec.seed = 0; spec.seed < 500; ++spec.seed)
        EXPECT_LE(gen_tree(spec).size(), 40u);
}

TEST(GenStmt, DeterministicAndWithinDepth) {
    StmtGenSpec spec;
    for (spec.seed = 0; spec.seed < 300; ++spec.seed) {
        auto a = print_stmt(gen_stmt(spec), Syntax::rpn);
        EXPECT_EQ(a, print_stmt(gen_stmt(spec), Syntax::rpn));
        EXPECT_LE(stmt_depth(gen_stmt(spec)), spec.max_depth);
    }
}

TEST(GenStmt, RpnStatementsTypecheck) {
    StmtGenSpec spec;
    for (spec.seed = 0; spec.seed < 10000; ++spec.seed) {
        auto text = print_stmt(gen_stmt(spec), Syntax::rpn);
        auto s = rpn::parse_rpn(text);
        auto type = rpn::typecheck(s);
        ASSERT_EQ(type.kind, ObjectType::Kind::set) << text;
    }
}

TEST(GenStmt, PrintParseRoundTrip) {
    for (auto syntax : {Syntax::rpn, Syntax::vhel}) {
        StmtGenSpec spec;
        spec.language = syntax;
        spec.cut_prob = syntax == Syntax::vhel ? 0.3 : 0.0;
        for (spec.seed = 0; spec.seed < 500; ++spec.seed) {
            auto text = print_stmt(gen_stmt(spec), syntax);
            EXPECT_EQ(print_stmt(parse_stmt(text, syntax), syntax), text);
        }
    }
}

TEST(Shrink, TreeKeepsFailure) {
    TreeGenSpec spec;
    spec.seed = 7;
    spec.max_nodes = 40;
    auto t = gen_tree(spec);
    auto has_b = [](const doc::DocTree& x) {
        for (NodeId v = 0; v < x.size(); ++v)
            if (x.label(v) == "b")
                return true;
        return false;
    };
    for (spec.seed = 0; !has_b(t); ++spec.seed)
        t = gen_tree(spec);
    auto small = shrink_tree(t, has_b);
    EXPECT_TRUE(has_b(small));
    EXPECT_LE(small.size(), t.size());
    EXPECT_LE(small.size(), 3u);
}

TEST(Shrink, StatementKeepsFailure) {
    auto s = parse_stmt(R"(a.b{c.txt = "x"}.(d.txt # e[1].txt))", Syntax::rpn);
    auto mentions_e = [](const Stmt& x) { return print_stmt(x, Syntax::rpn).find('e') != std::string::npos; };
    auto small = shrink_stmt(s, Syntax::rpn, mentions_e);
    EXPECT_TRUE(mentions_e(small));
    EXPECT_LT(print_stmt(small, Syntax::rpn).size(), print_stmt(s, Syntax::rpn).size());
}

TEST(Parity, Examples) {
    EXPECT_TRUE(parity_oracle(fixtures::top_with_children(2)));
    EXPECT_FALSE(parity_oracle(fixtures::top_with_children(3)));
    EXPECT_TRUE(parity_oracle(fixtures::top_with_children(0)));
    EXPECT_TRUE(parity_oracle(doc::DocTree::Builder().finish()));
}
