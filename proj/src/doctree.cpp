#include "wrap/doctree.hpp"

#include <algorithm>
#include <cctype>

#include "wrap/error.hpp"

namespace wrap::doc {

namespace {

constexpr NodeId no_parent = static_cast<NodeId>(-1);

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string escape_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view in) : in_(in) {}

    DocTree run() {
        DocTree::Builder b;
        std::vector<std::string> open;
        bool seen_top = false;
        while (pos_ < in_.size()) {
            if (in_[pos_] != '<') {
                read_text(b, open.empty());
                continue;
            }
            if (starts_with("<!--")) {
                auto end = in_.find("-->", pos_ + 4);
                if (end == std::string_view::npos)
                    fail("unterminated comment");
                pos_ = end + 3;
                continue;
            }
            if (starts_with("<!") || starts_with("<?")) {
                auto end = in_.find('>', pos_);
                if (end == std::string_view::npos)
                    fail("unterminated declaration");
                pos_ = end + 1;
                continue;
            }
            if (starts_with("</")) {
                std::size_t at = pos_;
                pos_ += 2;
                std::string name = read_name();
                skip_space();
                expect('>');
                if (open.empty())
                    fail("unexpected closing tag </" + name + ">", at);
                if (open.back() != name)
                    fail("mismatched closing tag </" + name + ">, expected </" + open.back() + ">", at);
                open.pop_back();
                b.close();
                continue;
            }
            std::size_t at = pos_;
            ++pos_;
            std::string name = read_name();
            if (open.empty()) {
                if (seen_top)
                    fail("more than one top-level element", at);
                seen_top = true;
            }
            bool self_closing = read_attributes();
            b.open(name);
            if (self_closing)
                b.close();
            else
                open.push_back(name);
        }
        if (!open.empty())
            fail("truncated input: <" + open.back() + "> not closed");
        if (!seen_top)
            fail("no top-level element");
        return std::move(b).finish();
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::size_t at = Error::npos) const {
        throw Error(ErrorKind::malformed_input, msg, at == Error::npos ? pos_ : at);
    }

    bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

    void skip_space() {
        while (pos_ < in_.size() && is_space(in_[pos_]))
            ++pos_;
    }

    void expect(char c) {
        if (pos_ >= in_.size())
            fail(std::string("truncated input: expected '") + c + "'");
        if (in_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string read_name() {
        std::size_t start = pos_;
        while (pos_ < in_.size() && is_name_char(in_[pos_]))
            ++pos_;
        if (pos_ == start)
            fail(pos_ >= in_.size() ? "truncated input: expected tag name" : "expected tag name");
        return lower(in_.substr(start, pos_ - start));
    }

    // Returns true for `<tag ... />`.
    bool read_attributes() {
        for (;;) {
            skip_space();
            if (pos_ >= in_.size())
                fail("truncated input inside tag");
            if (in_[pos_] == '>') {
                ++pos_;
                return false;
            }
            if (starts_with("/>")) {
                pos_ += 2;
                return true;
            }
            read_name();
            skip_space();
            if (pos_ < in_.size() && in_[pos_] == '=') {
                ++pos_;
                skip_space();
                if (pos_ >= in_.size())
                    fail("truncated attribute value");
                char q = in_[pos_];
                if (q == '"' || q == '\'') {
                    auto end = in_.find(q, pos_ + 1);
                    if (end == std::string_view::npos)
                        fail("unterminated attribute value");
                    pos_ = end + 1;
                } else {
                    while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '>' && in_[pos_] != '/')
                        ++pos_;
                }
            }
        }
    }

    void read_text(DocTree::Builder& b, bool top_level) {
        std::size_t start = pos_;
        std::string out;
        while (pos_ < in_.size() && in_[pos_] != '<') {
            if (in_[pos_] == '&') {
                auto semi = in_.find(';', pos_);
                if (semi == std::string_view::npos)
                    fail("unterminated entity");
                auto ent = in_.substr(pos_ + 1, semi - pos_ - 1);
                if (ent == "lt") out += '<';
                else if (ent == "gt") out += '>';
                else if (ent == "amp") out += '&';
                else if (ent == "quot") out += '"';
                else if (ent == "apos") out += '\'';
                else fail("unknown entity &" + std::string(ent) + ";");
                pos_ = semi + 1;
            } else {
                out += in_[pos_++];
            }
        }
        if (std::all_of(out.begin(), out.end(), is_space))
            return;
        if (top_level)
            fail("text outside the top-level element", start);
        b.text(out);
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

void serialize_node(const DocTree& t, NodeId v, std::string& out) {
    if (t.is_text(v)) {
        out += escape_text(t.text(v));
        return;
    }
    if (t.children(v).empty()) {
        out += "<" + t.label(v) + "/>";
        return;
    }
    out += "<" + t.label(v) + ">";
    for (NodeId c : t.children(v))
        serialize_node(t, c, out);
    out += "</" + t.label(v) + ">";
}

void sexpr_node(const DocTree& t, NodeId v, std::string& out) {
    if (t.is_text(v)) {
        out += '"';
        for (char c : t.text(v)) {
            if (c == '"' || c == '\\')
                out += '\\';
            out += c;
        }
        out += '"';
        return;
    }
    out += "(" + t.label(v);
    for (NodeId c : t.children(v)) {
        out += ' ';
        sexpr_node(t, c, out);
    }
    out += ')';
}

} // namespace

std::optional<NodeId> DocTree::parent(NodeId v) const {
    if (parents_[v] == no_parent)
        return std::nullopt;
    return parents_[v];
}

std::string_view DocTree::text(NodeId v) const {
    return texts_[v] ? std::string_view(*texts_[v]) : std::string_view();
}

std::optional<NodeId> DocTree::first_child(NodeId v) const {
    if (children_[v].empty())
        return std::nullopt;
    return children_[v].front();
}

std::optional<NodeId> DocTree::next_sibling(NodeId v) const {
    if (parents_[v] == no_parent)
        return std::nullopt;
    // The next sibling, when present, starts right after v's subtree.
    NodeId next = ends_[v];
    if (next < size() && parents_[next] == parents_[v])
        return next;
    return std::nullopt;
}

std::string DocTree::txt(NodeId v) const {
    std::string out;
    for (NodeId w = v; w < ends_[v]; ++w)
        if (texts_[w])
            out += *texts_[w];
    return out;
}

DocTree::Builder::Builder() {
    tree_.labels_.emplace_back(doc_tag);
    tree_.parents_.push_back(no_parent);
    tree_.children_.emplace_back();
    tree_.texts_.emplace_back();
    tree_.ends_.push_back(0);
    tree_.depths_.push_back(0);
    stack_.push_back(root_id);
}

NodeId DocTree::Builder::open(std::string_view tag) {
    auto id = static_cast<NodeId>(tree_.labels_.size());
    NodeId p = stack_.back();
    tree_.labels_.emplace_back(tag);
    tree_.parents_.push_back(p);
    tree_.children_.emplace_back();
    tree_.texts_.emplace_back();
    tree_.ends_.push_back(0);
    tree_.depths_.push_back(tree_.depths_[p] + 1);
    tree_.children_[p].push_back(id);
    stack_.push_back(id);
    return id;
}

NodeId DocTree::Builder::text(std::string_view content) {
    NodeId id = open(text_tag);
    tree_.texts_[id] = std::string(content);
    close();
    return id;
}

void DocTree::Builder::close() {
    tree_.ends_[stack_.back()] = static_cast<NodeId>(tree_.labels_.size());
    stack_.pop_back();
}

DocTree DocTree::Builder::finish() && {
    while (!stack_.empty())
        close();
    return std::move(tree_);
}

DocTree parse_document(std::string_view input) { return Parser(input).run(); }

std::string serialize(const DocTree& tree) {
    std::string out;
    for (NodeId c : tree.children(root_id))
        serialize_node(tree, c, out);
    return out;
}

std::string to_sexpr(const DocTree& tree) {
    std::string out;
    sexpr_node(tree, root_id, out);
    return out;
}

} // namespace wrap::doc
