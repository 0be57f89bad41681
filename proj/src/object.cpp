#include "wrap/object.hpp"

#include <algorithm>
#include <set>

namespace wrap {

ComplexObject ComplexObject::str(std::string s) {
    ComplexObject o;
    o.kind_ = Kind::str;
    o.str_ = std::move(s);
    return o;
}

ComplexObject ComplexObject::record(std::vector<ComplexObject> entries) {
    ComplexObject o;
    o.kind_ = Kind::record;
    o.items_ = std::move(entries);
    return o;
}

ComplexObject ComplexObject::set(std::vector<std::pair<doc::NodeId, ComplexObject>> elements) {
    std::stable_sort(elements.begin(), elements.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    ComplexObject o;
    std::set<std::string> seen;
    for (auto& [origin, value] : elements)
        if (seen.insert(value.canonical()).second)
            o.items_.push_back(std::move(value));
    return o;
}

std::string ComplexObject::canonical() const {
    switch (kind_) {
    case Kind::str:
        return nlohmann::json(str_).dump();
    case Kind::record: {
        std::string out = "<";
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i)
                out += ',';
            out += items_[i].canonical();
        }
        return out + ">";
    }
    case Kind::set: {
        std::vector<std::string> parts;
        for (const auto& item : items_)
            parts.push_back(item.canonical());
        std::sort(parts.begin(), parts.end());
        parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
        std::string out = "{";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i)
                out += ',';
            out += parts[i];
        }
        return out + "}";
    }
    }
    return {};
}

nlohmann::json ComplexObject::to_json() const {
    if (kind_ == Kind::str)
        return str_;
    auto arr = nlohmann::json::array();
    for (const auto& item : items_)
        arr.push_back(item.to_json());
    return arr;
}

bool ComplexObject::is_subset_of(const ComplexObject& other) const {
    if (kind_ != Kind::set || other.kind_ != Kind::set)
        return *this == other;
    std::set<std::string> theirs;
    for (const auto& item : other.items_)
        theirs.insert(item.canonical());
    return std::all_of(items_.begin(), items_.end(),
                       [&](const ComplexObject& item) { return theirs.count(item.canonical()) > 0; });
}

std::string ObjectType::to_string() const {
    switch (kind) {
    case Kind::str: return "String";
    case Kind::set: return "{" + items.front().to_string() + "}";
    case Kind::record: {
        std::string out = "<";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i)
                out += ", ";
            out += items[i].to_string();
        }
        return out + ">";
    }
    }
    return {};
}

bool conforms(const ComplexObject& value, const ObjectType& type) {
    switch (type.kind) {
    case ObjectType::Kind::str:
        return value.kind() == ComplexObject::Kind::str;
    case ObjectType::Kind::set:
        return value.kind() == ComplexObject::Kind::set &&
               std::all_of(value.items().begin(), value.items().end(),
                           [&](const ComplexObject& item) { return conforms(item, type.items.front()); });
    case ObjectType::Kind::record:
        if (value.kind() != ComplexObject::Kind::record || value.items().size() != type.items.size())
            return false;
        for (std::size_t i = 0; i < type.items.size(); ++i)
            if (!conforms(value.items()[i], type.items[i]))
                return false;
        return true;
    }
    return false;
}

} // namespace wrap
