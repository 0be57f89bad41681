#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wrap/doctree.hpp"

namespace wrap {

/// Value of the complex-object model: sets, fixed-arity records and strings.
///
/// Sets keep their elements ordered by the document position of the node
/// each element was produced from, with duplicates (by value) removed and
/// the earliest occurrence kept. Equality is set equality: it compares the
/// canonical form, in which set elements are sorted.
class ComplexObject {
public:
    enum class Kind { set, record, str };

    ComplexObject() : kind_(Kind::set) {}

    static ComplexObject str(std::string s);
    static ComplexObject record(std::vector<ComplexObject> entries);
    // Elements paired with their originating node.
    static ComplexObject set(std::vector<std::pair<doc::NodeId, ComplexObject>> elements);
    static ComplexObject empty_set() { return ComplexObject(); }

    Kind kind() const noexcept { return kind_; }
    const std::string& value() const noexcept { return str_; }
    const std::vector<ComplexObject>& items() const noexcept { return items_; }

    /// Order-insensitive serialization: `{...}` sets with sorted elements,
    /// `<...>` records, JSON-quoted strings.
    std::string canonical() const;
    /// Set → array in document order, record → fixed-length array, str → string.
    nlohmann::json to_json() const;

    bool is_subset_of(const ComplexObject& other) const;

    friend bool operator==(const ComplexObject& a, const ComplexObject& b) { return a.canonical() == b.canonical(); }

private:
    Kind kind_;
    std::string str_;
    std::vector<ComplexObject> items_;
};

/// Complex-object type: `{String}`, `{<T1, ..., Tn>}`.
struct ObjectType {
    enum class Kind { set, record, str };
    Kind kind = Kind::str;
    std::vector<ObjectType> items;

    static ObjectType str() { return {Kind::str, {}}; }
    static ObjectType set_of(ObjectType inner) { return {Kind::set, {std::move(inner)}}; }
    static ObjectType record_of(std::vector<ObjectType> entries) { return {Kind::record, std::move(entries)}; }

    std::string to_string() const;
    friend bool operator==(const ObjectType&, const ObjectType&) = default;
};

bool conforms(const ComplexObject& value, const ObjectType& type);

} // namespace wrap
