#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wrap::doc {

using NodeId = std::uint32_t;

inline constexpr NodeId root_id = 0;
inline constexpr std::string_view doc_tag = "#doc";
inline constexpr std::string_view text_tag = "#text";

/// Ordered, tag-labeled tree. Node ids are dense and assigned in preorder,
/// so id order is document order. Node 0 is the synthetic "#doc" root; text
/// content lives on "#text" leaves. Immutable once built.
class DocTree {
public:
    class Builder;

    std::size_t size() const noexcept { return labels_.size(); }

    const std::string& label(NodeId v) const { return labels_[v]; }
    std::optional<NodeId> parent(NodeId v) const;
    std::span<const NodeId> children(NodeId v) const { return children_[v]; }
    bool is_text(NodeId v) const { return texts_[v].has_value(); }
    // Text content of a text leaf; empty for element nodes.
    std::string_view text(NodeId v) const;

    std::optional<NodeId> first_child(NodeId v) const;
    std::optional<NodeId> next_sibling(NodeId v) const;
    bool is_last_sibling(NodeId v) const { return !next_sibling(v).has_value(); }
    bool is_root(NodeId v) const noexcept { return v == root_id; }
    // Strict document order.
    bool precedes(NodeId v, NodeId w) const noexcept { return v < w; }
    // One past the last id of v's subtree; the subtree is [v, subtree_end(v)).
    NodeId subtree_end(NodeId v) const { return ends_[v]; }
    bool is_ancestor(NodeId a, NodeId d) const { return a < d && d < ends_[a]; }
    std::size_t depth(NodeId v) const { return depths_[v]; }

    /// Concatenation of all text below v in document order.
    std::string txt(NodeId v) const;

    friend bool operator==(const DocTree&, const DocTree&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<NodeId> parents_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<std::optional<std::string>> texts_;
    std::vector<NodeId> ends_;
    std::vector<std::size_t> depths_;
};

/// Incremental preorder construction. Starts with the "#doc" root open.
class DocTree::Builder {
public:
    Builder();

    NodeId open(std::string_view tag);
    NodeId text(std::string_view content);
    void close();
    std::size_t open_depth() const { return stack_.size(); }

    DocTree finish() &&;

private:
    DocTree tree_;
    std::vector<NodeId> stack_;
};

/// Parse a tag-nested document. Tags are lowercased, attributes are read and
/// dropped, whitespace-only text runs are dropped, and the five predefined
/// entities are decoded. Exactly one top-level element is required.
DocTree parse_document(std::string_view input);

/// Markup that parse_document maps back to an equal tree.
std::string serialize(const DocTree& tree);

/// Canonical S-expression dump: `(tag child... "text")`.
std::string to_sexpr(const DocTree& tree);

} // namespace wrap::doc
