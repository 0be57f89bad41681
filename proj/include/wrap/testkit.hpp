#pragma once

// Brute-force oracles and seeded generators. Nothing here calls into the
// path, range, elog, rpn or hel engines: values are compared through the
// canonical string form shared with ComplexObject::canonical.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wrap/doctree.hpp"

namespace wrap::testkit {

struct Re;
using ReP = std::shared_ptr<const Re>;

struct Re {
    enum class Kind { empty, eps, tag, any, not_tag, cat, alt, star };
    Kind kind = Kind::empty;
    std::string tag;
    ReP a, b;
};

ReP parse_re(std::string_view text);
/// Fully parenthesized; accepted by both this parser and the engine's.
std::string re_text(const ReP& re);
bool re_matches(const ReP& re, const std::vector<std::string>& word);

/// Every v at or below v0 whose label word (strictly below v0, down to v)
/// matches, found by enumerating all downward paths.
std::vector<doc::NodeId> naive_subelem(const doc::DocTree& t, doc::NodeId v0, const ReP& re);

/// Structured ranges only: `*`, `i`, `i-j`, comma unions, `last`.
struct Sel {
    bool star = true;
    bool last = false;
    std::vector<std::pair<std::size_t, std::size_t>> intervals;
};

Sel parse_sel(std::string_view text);
std::string sel_text(const Sel& s);
std::vector<doc::NodeId> naive_select(const std::vector<doc::NodeId>& nodes, const Sel& s);

struct Cond;
struct Patom {
    ReP path;
    Sel range;
    std::vector<Cond> conds;
};
struct Cond {
    std::vector<Patom> chain;
    std::string text;
    bool cut = false;
};
struct Stmt {
    std::vector<Patom> chain;
    bool record = false;
    std::vector<Stmt> entries;
};

enum class Syntax { rpn, vhel };

Stmt parse_stmt(std::string_view text, Syntax syntax);
std::string print_stmt(const Stmt& s, Syntax syntax);
std::size_t stmt_depth(const Stmt& s);

std::string naive_txt(const doc::DocTree& t, doc::NodeId v);
std::string quote_json(std::string_view s);

/// Range inside the path step, conditions after it.
std::string naive_rpn(const Stmt& s, const doc::DocTree& t);
/// Conditions first, range after; with `cut`, a node violating a '!'
/// condition ends the scan of its path matches.
std::string naive_helvf(const Stmt& s, const doc::DocTree& t, bool cut = false);

struct TreeGenSpec {
    std::uint64_t seed = 0;
    std::size_t max_nodes = 30;
    std::vector<std::string> tags{"a", "b", "c"};
    std::vector<std::string> texts{"x", "y"};
    std::size_t max_fanout = 4;
    std::size_t max_depth = 6;
    double text_prob = 0.3;
};

/// Size-bounded random tree; max_nodes counts the #doc root.
doc::DocTree gen_tree(const TreeGenSpec& spec);

ReP gen_re(std::uint64_t seed, const std::vector<std::string>& tags, std::size_t max_depth);

struct StmtGenSpec {
    std::uint64_t seed = 0;
    Syntax language = Syntax::rpn;
    std::size_t max_chain = 3;
    std::size_t max_depth = 3;
    double cond_prob = 0.35;
    double record_prob = 0.25;
    double cut_prob = 0.0;
    std::vector<std::string> tags{"a", "b", "c"};
    std::vector<std::string> texts{"", "x", "y", "xy", "yx", "xx"};
    std::vector<std::string> ranges{"*", "*", "*", "0", "1", "0-1", "1-2", "last", "0,2"};
};

/// Random statement; in vhel mode patoms are `t` or `->t` and conditions
/// are flat.
Stmt gen_stmt(const StmtGenSpec& spec);

/// Greedy minimization: repeatedly take the first smaller candidate that
/// still fails.
doc::DocTree shrink_tree(doc::DocTree t, const std::function<bool(const doc::DocTree&)>& fails);
Stmt shrink_stmt(Stmt s, Syntax syntax, const std::function<bool(const Stmt&)>& fails);

/// True iff the top element has an even number of children.
bool parity_oracle(const doc::DocTree& t);

} // namespace wrap::testkit
