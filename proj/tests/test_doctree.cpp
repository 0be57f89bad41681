#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wrap/error.hpp"

using namespace wrap;
using doc::DocTree;
using doc::NodeId;

TEST(DocTree, SmallestDocument) {
    DocTree t = doc::parse_document("<a></a>");
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.label(0), "#doc");
    EXPECT_EQ(t.label(1), "a");
    EXPECT_EQ(t.parent(1), NodeId{0});
}

TEST(DocTree, PreorderIds) {
    DocTree t = doc::parse_document("<a><b>hi</b><c/></a>");
    ASSERT_EQ(t.size(), 5u);
    EXPECT_EQ(t.label(1), "a");
    EXPECT_EQ(t.label(2), "b");
    EXPECT_TRUE(t.is_text(3));
    EXPECT_EQ(t.label(3), "#text");
    EXPECT_EQ(t.text(3), "hi");
    EXPECT_EQ(t.label(4), "c");
}

TEST(DocTree, MismatchedClose) {
    try {
        doc::parse_document("<a><b></a>");
        FAIL() << "expected MalformedInput";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::malformed_input);
    }
}

TEST(DocTree, Txt) {
    DocTree t = doc::parse_document("<a><b>x</b><b>y</b><e/></a>");
    EXPECT_EQ(t.txt(1), "xy");
    EXPECT_EQ(t.txt(3), "x");
    EXPECT_EQ(t.txt(6), "");
    EXPECT_EQ(t.txt(0), "xy");
}

TEST(DocTree, Structural) {
    DocTree t = doc::parse_document("<a><b/><c/></a>");
    EXPECT_EQ(t.first_child(1), NodeId{2});
    EXPECT_EQ(t.next_sibling(2), NodeId{3});
    EXPECT_TRUE(t.is_last_sibling(3));
    EXPECT_FALSE(t.is_last_sibling(2));
    EXPECT_FALSE(t.next_sibling(1).has_value());
    EXPECT_TRUE(t.is_root(0));
    EXPECT_FALSE(t.first_child(2).has_value());
}

TEST(DocTree, ParentPrecedesChild) {
    DocTree t = fixtures::doc1();
    for (NodeId v = 1; v < t.size(); ++v) {
        NodeId p = *t.parent(v);
        EXPECT_TRUE(t.precedes(p, v));
        EXPECT_TRUE(t.is_ancestor(p, v));
    }
}

TEST(DocTree, InvariantsOnDoc1) {
    DocTree t = fixtures::doc1();
    std::size_t edges = 0;
    for (NodeId v = 0; v < t.size(); ++v) {
        for (NodeId c : t.children(v)) {
            EXPECT_EQ(t.parent(c), v);
            ++edges;
        }
        if (t.is_text(v)) {
            EXPECT_TRUE(t.children(v).empty());
        }
    }
    EXPECT_EQ(edges, t.size() - 1);
    EXPECT_EQ(t.txt(0), "itemAxBitemC");
}

TEST(DocTree, SerializeRoundTrip) {
    DocTree t = fixtures::doc1();
    EXPECT_EQ(doc::serialize(t), fixtures::doc1_text);
    EXPECT_EQ(doc::parse_document(doc::serialize(t)), t);
}

TEST(DocTree, BuilderMatchesParser) {
    DocTree::Builder b;
    b.open("a");
    b.open("b");
    b.text("hi");
    b.close();
    b.open("c");
    b.close();
    b.close();
    EXPECT_EQ(std::move(b).finish(), doc::parse_document("<a><b>hi</b><c/></a>"));
}
