#include <gtest/gtest.h>

#include <numeric>

#include "fixtures.hpp"
#include "wrap/error.hpp"
#include "wrap/range.hpp"
#include "wrap/testkit.hpp"

using namespace wrap;
using doc::NodeId;
using path::Range;

namespace {

std::vector<NodeId> seq(std::size_t n) {
    std::vector<NodeId> s(n);
    std::iota(s.begin(), s.end(), NodeId{10});
    return s;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::malformed_input;
}

std::vector<std::vector<std::string>> words_upto(const std::vector<std::string>& sigma, std::size_t n) {
    std::vector<std::vector<std::string>> out{{}};
    for (std::size_t from = 0, len = 0; len < n; ++len) {
        std::size_t to = out.size();
        for (std::size_t i = from; i < to; ++i)
            for (const auto& a : sigma) {
                auto w = out[i];
                w.push_back(a);
                out.push_back(std::move(w));
            }
        from = to;
    }
    return out;
}

} // namespace

TEST(PathAutomaton, SingleTag) {
    path::PathAutomaton a(path::parse_regex("a"));
    EXPECT_TRUE(a.accepts(std::vector<std::string>{"a"}));
    EXPECT_FALSE(a.accepts(std::vector<std::string>{"b"}));
    EXPECT_FALSE(a.accepts_empty());
}

TEST(PathAutomaton, StarDotTagAgreesWithNaiveMatcher) {
    path::PathAutomaton a(path::parse_regex("_*.t"));
    auto naive = testkit::parse_re("_*.t");
    for (const auto& w : words_upto({"t", "a", "b", "#text"}, 6)) {
        bool expect = testkit::re_matches(naive, w);
        EXPECT_EQ(a.accepts(w), expect);
        // `_` never matches text leaves, so only words ending in t without #text qualify.
        bool ends_t = !w.empty() && w.back() == "t" && std::count(w.begin(), w.end(), "#text") == 0;
        EXPECT_EQ(expect, ends_t);
    }
}

TEST(PathAutomaton, StarOfConcat) {
    path::PathAutomaton a(path::parse_regex("(a.b)*"));
    EXPECT_TRUE(a.accepts(std::vector<std::string>{}));
    EXPECT_TRUE(a.accepts(std::vector<std::string>{"a", "b"}));
    EXPECT_FALSE(a.accepts(std::vector<std::string>{"a"}));
}

TEST(PathAutomaton, RegexPrintsAndReparses) {
    for (const char* text : {"a", "_*.t", "(a.b)*", "^l*.l", "a|b.c", "(a|b)*.#text"}) {
        auto re = path::parse_regex(text);
        EXPECT_EQ(path::parse_regex(path::to_string(re)), re) << text;
    }
}

TEST(Subelem, Doc1Rows) {
    auto t = fixtures::doc1();
    auto trs = path::subelem(t, doc::root_id, path::Path::parse("html.body.table.tr"));
    ASSERT_EQ(trs.size(), 3u);
    for (NodeId v : trs)
        EXPECT_EQ(t.label(v), "tr");
    EXPECT_TRUE(std::is_sorted(trs.begin(), trs.end()));
    auto naive = testkit::naive_subelem(t, doc::root_id, testkit::parse_re("html.body.table.tr"));
    EXPECT_EQ(trs, naive);
}

TEST(Subelem, EmptyLanguage) {
    auto t = fixtures::doc1();
    // A text leaf never has element children.
    EXPECT_TRUE(path::subelem(t, doc::root_id, path::Path::parse("#text.a")).empty());
}

TEST(Subelem, AnyStarReachesWholeElementTree) {
    auto t = doc::parse_document("<a><b/><c><d/></c></a>");
    auto all = path::subelem(t, doc::root_id, path::Path::parse("_*"));
    EXPECT_EQ(all, (std::vector<NodeId>{0, 1, 2, 3, 4}));
    auto with_text = path::subelem(fixtures::doc1(), doc::root_id, path::Path::parse("(_|#text)*"));
    EXPECT_EQ(with_text.size(), fixtures::doc1().size());
}

TEST(Range, StarIsIdentity) {
    for (std::size_t n = 0; n <= 20; ++n)
        EXPECT_EQ(path::apply_range(seq(n), Range::star()), seq(n));
}

TEST(Range, Interval) {
    auto s = seq(5);
    EXPECT_EQ(path::apply_range(s, Range::interval(1, 2)), (std::vector<NodeId>{11, 12}));
    EXPECT_EQ(path::apply_range(s, path::parse_range("1-2")), (std::vector<NodeId>{11, 12}));
}

TEST(Range, LastEqualsBackwardOneZeroStar) {
    auto s = seq(3);
    auto last = path::apply_range(s, Range::last(), path::Direction::forward);
    auto raw = path::apply_range(s, Range::raw("1.0*"), path::Direction::backward);
    EXPECT_EQ(last, (std::vector<NodeId>{12}));
    EXPECT_EQ(raw, last);
    for (std::size_t n = 1; n <= 50; ++n)
        EXPECT_EQ(path::apply_range(seq(n), Range::last()), std::vector<NodeId>{seq(n).back()});
}

TEST(Range, UniqueWord) {
    EXPECT_EQ(path::unique_word(Range::interval(0, 0), 3), "100");
    EXPECT_EQ(path::unique_word(Range::star(), 0), "");
    EXPECT_EQ(path::unique_word(Range::index(2), 4), "0010");
    EXPECT_EQ(path::unique_word(Range::index(5), 3), "000");
}

TEST(Range, DensityViolation) {
    EXPECT_EQ(kind_of([] { Range::raw("1*01*"); }), ErrorKind::multiple_words);
    EXPECT_EQ(kind_of([] { path::parse_range("regex:1*01*"); }), ErrorKind::multiple_words);
    EXPECT_EQ(kind_of([] { Range::raw("1^{40}"); }), ErrorKind::no_word_of_length);
    // A language with gaps is accepted; a missing length fails only where it is used.
    auto one = Range::raw("1");
    EXPECT_EQ(path::apply_range(seq(1), one), seq(1));
    EXPECT_EQ(kind_of([&] { path::apply_range(seq(3), one); }), ErrorKind::no_word_of_length);
    EXPECT_TRUE(path::select(seq(3), one).empty());
}

TEST(Range, StructuredRangesMatchDirectIndexing) {
    for (std::size_t n = 0; n <= 50; ++n) {
        auto s = seq(n);
        for (std::size_t i = 0; i <= 6; ++i) {
            auto idx = path::apply_range(s, Range::index(i));
            EXPECT_EQ(idx, i < n ? std::vector<NodeId>{s[i]} : std::vector<NodeId>{});
            for (std::size_t j = i; j <= 8; ++j) {
                std::vector<NodeId> expect;
                for (std::size_t p = i; p <= j && p < n; ++p)
                    expect.push_back(s[p]);
                EXPECT_EQ(path::apply_range(s, Range::interval(i, j)), expect);
                auto w = path::unique_word(Range::interval(i, j), n);
                EXPECT_EQ(static_cast<std::size_t>(std::count(w.begin(), w.end(), '1')), expect.size());
            }
        }
        std::vector<NodeId> uni;
        for (std::size_t p = 0; p < n; ++p)
            if (p <= 1 || (p >= 4 && p <= 5))
                uni.push_back(s[p]);
        EXPECT_EQ(path::apply_range(s, path::parse_range("0-1,4-5")), uni);
    }
}

TEST(Range, SurfaceSyntaxRoundTrip) {
    for (const char* text : {"*", "0", "3", "1-2", "0-1,4-5", "last", "regex:10*"}) {
        auto r = path::parse_range(text);
        EXPECT_EQ(path::parse_range(r.to_string()), r) << text;
    }
}

TEST(SubelemRange, Doc1SecondRow) {
    auto t = fixtures::doc1();
    auto tr = path::subelem_range(t, doc::root_id, path::Path::parse("html.body.table.tr"), Range::index(1));
    ASSERT_EQ(tr.size(), 1u);
    EXPECT_EQ(t.txt(tr[0]), "xB");
    EXPECT_EQ(path::subelem_range(t, doc::root_id, path::Path::parse("html.body.table.tr"), Range::star()),
              path::subelem(t, doc::root_id, path::Path::parse("html.body.table.tr")));
    EXPECT_TRUE(path::subelem_range(t, doc::root_id, path::Path::parse("nothing"), Range::index(0)).empty());
}

TEST(ContainsString, ExactMatch) {
    auto t = fixtures::doc1();
    auto tds = path::subelem(t, doc::root_id, path::Path::parse("html.body.table.tr.td"));
    EXPECT_TRUE(path::contains_string(t, tds[0], "item"));
    EXPECT_FALSE(path::contains_string(t, tds[0], "Item"));
    auto e = doc::parse_document("<a/>");
    EXPECT_TRUE(path::contains_string(e, 1, ""));
}

TEST(Subelem, AgreesWithNaiveOracleOnSmallSample) {
    std::vector<std::string> tags{"a", "b", "c"};
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        testkit::TreeGenSpec spec;
        spec.seed = seed;
        spec.max_nodes = 25;
        auto t = testkit::gen_tree(spec);
        auto re = testkit::gen_re(seed * 7 + 1, tags, 3);
        auto engine = path::Path::parse(testkit::re_text(re));
        for (NodeId v = 0; v < t.size(); ++v)
            ASSERT_EQ(path::subelem(t, v, engine), testkit::naive_subelem(t, v, re))
                << testkit::re_text(re) << " at " << v << " in " << doc::serialize(t);
    }
}
