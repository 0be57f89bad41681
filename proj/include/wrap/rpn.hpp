#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wrap/doctree.hpp"
#include "wrap/elog.hpp"
#include "wrap/object.hpp"
#include "wrap/path.hpp"
#include "wrap/range.hpp"

namespace wrap::rpn {

struct Cond;

/// Path step with a range (star when absent) and optional conditions.
struct Patom {
    path::Path path;
    path::Range range;
    std::vector<Cond> conds;
    // Printing hint only: print `[*]` even though the range is star.
    bool explicit_range = false;

    friend bool operator==(const Patom& a, const Patom& b);
};

/// `patom. ... .patom.txt = "s"`; `cut` marks a condition with '!'.
struct Cond {
    std::vector<Patom> chain;
    std::string text;
    bool cut = false;

    friend bool operator==(const Cond&, const Cond&) = default;
};

inline bool operator==(const Patom& a, const Patom& b) {
    return a.path == b.path && a.range == b.range && a.conds == b.conds;
}

/// A chain of patoms ending in `txt` or in a record `(X1 # ... # Xn)`.
struct Statement {
    std::vector<Patom> chain;
    bool record = false;
    std::vector<Statement> entries;

    friend bool operator==(const Statement&, const Statement&) = default;
};

struct ParseOptions {
    bool allow_cut = false;
};

Statement parse_rpn(std::string_view text, ParseOptions options = {});
std::string to_text(const Statement& stmt);
std::string to_text(const Cond& cond);
std::string patom_text(const Patom& p);

ObjectType typecheck(const Statement& stmt);

/// Statement value at the document root: ranges select among all path
/// successors before conditions filter them.
ComplexObject eval_rpn(const Statement& stmt, const doc::DocTree& t);
ComplexObject eval_rpn_at(const Statement& stmt, const doc::DocTree& t, doc::NodeId v);
bool eval_cond(const Cond& cond, const doc::DocTree& t, doc::NodeId v);

struct Translation {
    elog::Program program;
    elog::ObjectSchema schema;
    std::set<std::string> aux;
};

enum class RangePlacement {
    in_step,    // subelem_{π,ρ}: range before conditions
    rule_level, // subelem_π ... [ρ]: conditions before range
};

Translation translate(const Statement& stmt, RangePlacement placement);
inline Translation translate_rpn(const Statement& stmt) { return translate(stmt, RangePlacement::in_step); }

/// translate → eval_fixpoint → eliminate_aux → to_complex_object.
ComplexObject run_translation(const Translation& tr, const doc::DocTree& t);

} // namespace wrap::rpn
