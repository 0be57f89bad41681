#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wrap/doctree.hpp"
#include "wrap/object.hpp"
#include "wrap/range.hpp"
#include "wrap/rpn.hpp"

namespace wrap::hel {

/// `tag`, `tag[ρ]`, `tag[i:ρ]` or `tag[i]`, reached by a child step or,
/// when `descendant`, by `->`.
struct HelPatom {
    std::string tag;
    bool descendant = false;
    std::optional<std::string> var;
    path::Range range;
    bool explicit_range = false;

    friend bool operator==(const HelPatom& a, const HelPatom& b) {
        return a.tag == b.tag && a.descendant == b.descendant && a.var == b.var && a.range == b.range;
    }
};

using Pseq = std::vector<HelPatom>;

/// `pseq.txt` or `pseq(cc # ... # cc)`.
struct Cc {
    Pseq pseq;
    bool record = false;
    std::vector<Cc> entries;

    friend bool operator==(const Cc&, const Cc&) = default;
};

/// `pseq.txt = "s"`, optionally cut-marked with a leading '!'.
struct HelCond {
    Pseq pseq;
    std::string text;
    bool cut = false;

    friend bool operator==(const HelCond&, const HelCond&) = default;
};

struct HelStatement {
    Cc cc;
    std::vector<HelCond> where;

    friend bool operator==(const HelStatement&, const HelStatement&) = default;
};

HelStatement parse_hel(std::string_view text);
std::string to_text(const HelStatement& stmt);

/// Throws VarUsedTwice, VarUnbound, PrefixMismatch or NoVariable.
void validate_vars(const HelStatement& stmt);

/// Variable-free form: each condition, cut at its rightmost variable, is
/// nested at the cc patom carrying that variable. Validates first.
rpn::Statement desugar(const HelStatement& stmt);

/// Variable-free statements share the RPN AST.
rpn::Statement parse_vhel(std::string_view text);
std::string to_vhel(const rpn::Statement& stmt);

/// Throws NotFragment unless every patom is `t` or `_*.t` and no condition
/// patom carries conditions.
void check_vf(const rpn::Statement& stmt);

struct EvalOptions {
    // A condition path must reach at most one node.
    bool strict = true;
    // Honour '!' marks; otherwise they are ordinary conditions.
    bool cut = false;
    // Lenient mode reports violations here instead of throwing.
    std::vector<std::string>* warnings = nullptr;
};

/// Conditions filter path successors before the range selects among them.
ComplexObject eval_vf(const rpn::Statement& stmt, const doc::DocTree& t, EvalOptions options = {});
inline ComplexObject eval_cut(const rpn::Statement& stmt, const doc::DocTree& t, bool strict = true) {
    return eval_vf(stmt, t, {strict, true, nullptr});
}

/// Translation with each non-star range moved to the rule level. Throws
/// Unsupported for cut-marked conditions.
rpn::Translation translate_vf(const rpn::Statement& stmt);

} // namespace wrap::hel
