#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "wrap/doctree.hpp"

namespace fixtures {

// #doc -> html -> body -> table -> {tr(td"item",td"A"), tr(td"x",td"B"), tr(td"item",td"C")}
inline constexpr const char* doc1_text =
    "<html><body><table>"
    "<tr><td>item</td><td>A</td></tr>"
    "<tr><td>x</td><td>B</td></tr>"
    "<tr><td>item</td><td>C</td></tr>"
    "</table></body></html>";

inline wrap::doc::DocTree doc1() { return wrap::doc::parse_document(doc1_text); }

inline constexpr const char* rowfilter = R"(html.body.table.tr{td[0].txt = "item"}.td[1].txt)";
inline constexpr const char* range_pin = R"(html.body.table.tr[1]{td[0].txt = "item"}.td[1].txt)";
inline constexpr const char* cut_pin = R"(html.body.table.tr[*]{!td[0].txt = "item"}.td[1].txt)";
inline constexpr const char* hel_listing =
    "html.body.table(tr[0].td[0].txt # tr[i:*].td[1].txt)\n"
    "where html.body.table.tr[i].td[0].txt = \"item\";";
inline constexpr const char* vhel_listing =
    R"(html.body.table(tr[0].td[0].txt # tr[*]{td[0].txt = "item"}.td[1].txt);)";

inline std::string corpus(const std::string& name) { return std::string(WRAP_CORPUS_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A top element with n children, every third one a text leaf.
inline wrap::doc::DocTree top_with_children(std::size_t n) {
    wrap::doc::DocTree::Builder b;
    b.open("top");
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 3 == 1) {
            b.text("x");
        } else {
            b.open("c");
            b.close();
        }
    }
    b.close();
    return std::move(b).finish();
}

} // namespace fixtures
