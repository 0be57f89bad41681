#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wrap/doctree.hpp"
#include "wrap/object.hpp"
#include "wrap/path.hpp"
#include "wrap/range.hpp"

namespace wrap::elog {

inline constexpr std::string_view root_pred = "root";
inline constexpr std::string_view dom_pred = "dom";
inline constexpr std::string_view self_source = "self";

struct Condition {
    enum class Kind { contains, contains_s, firstchild, nextsibling, lastsibling, label, root };

    Kind kind = Kind::root;
    std::string x;
    std::string y;           // contains, firstchild, nextsibling
    path::Path path;         // contains
    path::Range range;       // contains
    std::string text;        // contains_s string, label tag

    friend bool operator==(const Condition&, const Condition&) = default;
};

struct PatternRef {
    std::string pred;
    std::string var;
    friend bool operator==(const PatternRef&, const PatternRef&) = default;
};

/// p(x0, x) ← p0(_, x0), subelem_{π,ρ}(x0, x), C, R [ρ'].
///
/// A rule whose body starts with dom(x0, x) instead of a parent atom and a
/// subelem step leaves x0 unconstrained; such rules define condition
/// predicates, stored by their second argument only.
struct Rule {
    std::string head;
    std::string x0 = "X0";
    std::string x = "X";
    bool dom_pair = false;
    std::string parent{root_pred};
    path::Path path;
    path::Range range;
    std::vector<Condition> conds;
    std::vector<PatternRef> refs;
    std::optional<path::Range> rule_range;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Placement of a predicate in a complex-object type. Each node describes
/// one set: its elements are the nodes w with pred(v, w) for the enclosing
/// node v, or v itself when `pred` is empty. Elements render as records of
/// `entries` when `record` is set, else as strings.
struct SetSchema {
    std::optional<std::string> pred;
    bool record = false;
    std::vector<SetSchema> entries;

    friend bool operator==(const SetSchema&, const SetSchema&) = default;
};
using ObjectSchema = SetSchema;

std::string to_string(const ObjectSchema& schema);
ObjectSchema parse_schema(std::string_view text);
ObjectType schema_type(const ObjectSchema& schema);

struct Program {
    std::vector<Rule> rules;
    std::set<std::string> aux;
    std::vector<std::vector<std::string>> records;
    std::optional<ObjectSchema> schema;

    /// Head predicates in order of first definition.
    std::vector<std::string> predicates() const;
    /// Predicates defined by dom(x0, x) rules.
    std::set<std::string> condition_predicates() const;
    bool has_rule_ranges() const;
    /// Record-entry position per predicate, from `records` and the schema.
    std::map<std::string, std::size_t> ordinals() const;

    friend bool operator==(const Program&, const Program&) = default;
};

Program parse_elog(std::string_view text);
std::string to_text(const Program& program);
/// Throws UnknownPredicate, UnsafeRule or SyntaxError.
void validate(const Program& program);

/// Parent id of atoms of condition predicates (first argument unconstrained).
inline constexpr doc::NodeId any_parent = static_cast<doc::NodeId>(-1);

struct Atom {
    std::string pred;
    doc::NodeId parent;
    doc::NodeId node;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

class AtomStore {
public:
    using Pairs = std::set<std::pair<doc::NodeId, doc::NodeId>>;

    bool insert(const std::string& pred, doc::NodeId parent, doc::NodeId node);
    bool contains(const std::string& pred, doc::NodeId parent, doc::NodeId node) const;
    const Pairs& atoms(const std::string& pred) const;
    std::vector<std::string> predicates() const;
    std::size_t size() const;
    std::size_t count(const std::string& pred) const { return atoms(pred).size(); }
    std::vector<Atom> all() const;

    /// `p(v0,v)` per line, lines sorted; condition atoms print `p(_,v)`.
    std::string dump() const;

    friend bool operator==(const AtomStore&, const AtomStore&) = default;

private:
    std::map<std::string, Pairs> by_pred_;
};

/// Least fixpoint, computed semi-naively per stratum of the predicate
/// dependency graph. Rules with a rule-level range must not be recursive.
AtomStore eval_fixpoint(const Program& program, const doc::DocTree& t);

/// validate plus the stratification check of eval_fixpoint, without a document.
void check_program(const Program& program);

/// Q_p = {v | ∃v0 p(v0, v)}, in document order.
std::vector<doc::NodeId> unary_query(const AtomStore& store, const std::string& pred);

/// Adds p'(x0, x) ← dom(x0, x), p(_, x) for each pattern predicate p and
/// rewrites every body reference to a pattern predicate to its primed
/// companion. Companion names are returned through `companion_of`.
Program monadic_collapse(const Program& program, std::map<std::string, std::string>* companion_of = nullptr);

struct OutputGraph {
    std::size_t node_count = 0;
    std::map<std::pair<doc::NodeId, doc::NodeId>, std::set<std::string>> edges;
    std::map<std::string, std::vector<doc::NodeId>> queries;

    std::string to_dot(const doc::DocTree& t) const;
};

OutputGraph output_graph(const AtomStore& store, const doc::DocTree& t);

struct UnfoldedNode {
    doc::NodeId node = doc::root_id;
    std::vector<std::string> labels;
    std::vector<UnfoldedNode> children;

    std::size_t size() const;
    friend bool operator==(const UnfoldedNode&, const UnfoldedNode&) = default;
};

/// Tree of all edge paths from the document root. Children are ordered by
/// (smallest predicate ordinal on the edge, document order); predicates
/// without an ordinal sort as 0.
UnfoldedNode unfold(const OutputGraph& graph, const std::map<std::string, std::size_t>& ordinals = {});

/// Removes atoms of auxiliary predicates, closing the gap each leaves: for
/// q(v0, v) with q auxiliary and any p(v, w), p(v0, w) replaces it. Runs to a
/// fixpoint first. Throws AuxCycle when auxiliary atoms form a cycle.
AtomStore eliminate_aux(const AtomStore& store, const std::set<std::string>& aux);

/// Program-aware form: the atoms of each predicate are lifted through its
/// aux ancestors by relational composition along rule parents, so a gap
/// left by q is closed only by the predicates whose rules hang below q. The
/// plain form also joins atoms that merely meet at a node reached on two
/// statement levels (e.g. through ε-paths); translations use this one.
AtomStore eliminate_aux(const AtomStore& store, const std::set<std::string>& aux, const Program& program);


enum class Emit { nodes, text };

/// Canonical complex object rooted at the document root. Condition atoms
/// are not part of the output; any other atom must have a schema position.
ComplexObject to_complex_object(const AtomStore& store, const ObjectSchema& schema, const doc::DocTree& t,
                                Emit emit = Emit::text);

} // namespace wrap::elog
