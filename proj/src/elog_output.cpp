#include <algorithm>
#include <functional>

#include "wrap/elog.hpp"
#include "wrap/error.hpp"

namespace wrap::elog {

using doc::NodeId;

OutputGraph output_graph(const AtomStore& store, const doc::DocTree& t) {
    OutputGraph g;
    g.node_count = t.size();
    for (const auto& p : store.predicates()) {
        for (const auto& [v0, v] : store.atoms(p))
            if (v0 != any_parent)
                g.edges[{v0, v}].insert(p);
        g.queries[p] = unary_query(store, p);
    }
    return g;
}

std::string OutputGraph::to_dot(const doc::DocTree& t) const {
    std::map<NodeId, std::vector<std::string>> marks;
    for (const auto& [p, nodes] : queries)
        for (NodeId v : nodes)
            marks[v].push_back(p);
    std::string out = "digraph output {\n";
    for (NodeId v = 0; v < node_count; ++v) {
        std::string label = std::to_string(v) + ":" + t.label(v);
        if (auto it = marks.find(v); it != marks.end()) {
            label += " [";
            for (std::size_t i = 0; i < it->second.size(); ++i)
                label += (i ? "," : "") + it->second[i];
            label += "]";
        }
        out += "  n" + std::to_string(v) + " [label=\"" + label + "\"];\n";
    }
    for (const auto& [edge, preds] : edges) {
        std::string label;
        for (const auto& p : preds)
            label += (label.empty() ? "" : ",") + p;
        out += "  n" + std::to_string(edge.first) + " -> n" + std::to_string(edge.second) + " [label=\"" + label +
               "\"];\n";
    }
    return out + "}\n";
}

std::size_t UnfoldedNode::size() const {
    std::size_t n = 1;
    for (const auto& c : children)
        n += c.size();
    return n;
}

UnfoldedNode unfold(const OutputGraph& graph, const std::map<std::string, std::size_t>& ordinals) {
    std::map<NodeId, std::vector<std::pair<NodeId, const std::set<std::string>*>>> out_edges;
    for (const auto& [edge, preds] : graph.edges)
        out_edges[edge.first].emplace_back(edge.second, &preds);

    auto rank = [&](const std::set<std::string>& preds) {
        std::size_t best = static_cast<std::size_t>(-1);
        for (const auto& p : preds) {
            auto it = ordinals.find(p);
            best = std::min(best, it == ordinals.end() ? std::size_t{0} : it->second);
        }
        return best;
    };

    std::vector<bool> on_path(graph.node_count, false);
    std::function<UnfoldedNode(NodeId, std::vector<std::string>)> expand = [&](NodeId v, std::vector<std::string> labels) {
        if (on_path[v])
            throw Error(ErrorKind::cycle_detected, "output graph has a cycle through node " + std::to_string(v));
        on_path[v] = true;
        UnfoldedNode node{v, std::move(labels), {}};
        auto it = out_edges.find(v);
        if (it != out_edges.end()) {
            auto edges = it->second;
            std::stable_sort(edges.begin(), edges.end(), [&](const auto& a, const auto& b) {
                auto ra = rank(*a.second), rb = rank(*b.second);
                return ra != rb ? ra < rb : a.first < b.first;
            });
            for (const auto& [w, preds] : edges)
                node.children.push_back(expand(w, {preds->begin(), preds->end()}));
        }
        on_path[v] = false;
        return node;
    };
    return expand(doc::root_id, {});
}

namespace {

void check_aux_cycles(const AtomStore& store, const std::set<std::string>& aux) {
    // Self-loops from ε-paths close no gap and are harmless.
    std::map<NodeId, std::vector<NodeId>> aux_edges;
    for (const auto& p : aux)
        for (const auto& [v0, v] : store.atoms(p))
            if (v0 != any_parent && v0 != v)
                aux_edges[v0].push_back(v);
    std::map<NodeId, int> state;
    std::function<void(NodeId)> visit = [&](NodeId v) {
        state[v] = 1;
        for (NodeId w : aux_edges[v]) {
            if (state[w] == 1)
                throw Error(ErrorKind::aux_cycle, "auxiliary atoms form a cycle through node " + std::to_string(w));
            if (state[w] == 0)
                visit(w);
        }
        state[v] = 2;
    };
    for (const auto& [v, ws] : aux_edges)
        if (state[v] == 0)
            visit(v);
}

// Literal closure: any atom below an aux atom's target is lifted.
AtomStore close_gaps(const AtomStore& store, const std::set<std::string>& aux) {
    AtomStore work = store;
    std::map<NodeId, std::set<std::pair<std::string, NodeId>>> by_parent;
    // Aux atoms by their second argument: (pred, first argument).
    std::map<NodeId, std::set<std::pair<std::string, NodeId>>> aux_into;
    std::vector<std::tuple<std::string, NodeId, NodeId>> pending;
    for (const auto& a : work.all()) {
        if (a.parent == any_parent)
            continue;
        by_parent[a.parent].emplace(a.pred, a.node);
        if (aux.count(a.pred)) {
            aux_into[a.node].emplace(a.pred, a.parent);
            pending.emplace_back(a.pred, a.parent, a.node);
        }
    }
    while (!pending.empty()) {
        auto [q, v0, v] = pending.back();
        pending.pop_back();
        auto it = by_parent.find(v);
        if (it == by_parent.end())
            continue;
        auto children = it->second;
        for (const auto& [p, w] : children) {
            if (!work.insert(p, v0, w))
                continue;
            by_parent[v0].emplace(p, w);
            if (aux.count(p)) {
                aux_into[w].emplace(p, v0);
                pending.emplace_back(p, v0, w);
            }
            // Gaps already closed through v0 must see the new atom too.
            if (auto in = aux_into.find(v0); in != aux_into.end())
                for (const auto& [q2, u0] : in->second)
                    pending.emplace_back(q2, u0, v0);
        }
    }
    // An atom hanging below an aux target now lives at the aux source.
    AtomStore out;
    for (const auto& a : work.all())
        if (!aux.count(a.pred) && (a.parent == any_parent || !aux_into.count(a.parent)))
            out.insert(a.pred, a.parent, a.node);
    return out;
}

// Per-predicate composition along rule parents: the pairs of p are lifted
// through every aux ancestor, so atoms of different statement levels that
// share a node never mix.
AtomStore compose_gaps(const AtomStore& store, const std::set<std::string>& aux, const Program& program) {
    std::map<std::string, std::set<std::string>> parents;
    for (const auto& r : program.rules)
        if (!r.dom_pair)
            parents[r.head].insert(r.parent);

    std::map<std::string, AtomStore::Pairs> lifted;
    std::set<std::string> busy;
    std::function<const AtomStore::Pairs&(const std::string&)> lift = [&](const std::string& p) -> const AtomStore::Pairs& {
        if (auto it = lifted.find(p); it != lifted.end())
            return it->second;
        if (!busy.insert(p).second)
            throw Error(ErrorKind::aux_cycle, "auxiliary predicate '" + p + "' depends on itself");
        AtomStore::Pairs out;
        const auto& raw = store.atoms(p);
        auto ps = parents.find(p);
        bool direct = ps == parents.end();
        if (!direct)
            for (const auto& q : ps->second) {
                if (!aux.count(q)) {
                    direct = true;
                    continue;
                }
                std::map<NodeId, std::vector<NodeId>> up; // aux target -> lifted sources
                for (const auto& [u, v] : lift(q))
                    up[v].push_back(u);
                for (const auto& [v, w] : raw)
                    if (auto it = up.find(v); it != up.end())
                        for (NodeId u : it->second)
                            out.emplace(u, w);
            }
        if (direct)
            out.insert(raw.begin(), raw.end());
        busy.erase(p);
        return lifted[p] = std::move(out);
    };

    AtomStore out;
    for (const auto& p : store.predicates()) {
        if (aux.count(p))
            continue;
        const auto& raw = store.atoms(p);
        bool condition = !raw.empty() && raw.begin()->first == any_parent;
        for (const auto& [v0, v] : condition ? raw : lift(p))
            out.insert(p, v0, v);
    }
    return out;
}

} // namespace

AtomStore eliminate_aux(const AtomStore& store, const std::set<std::string>& aux) {
    check_aux_cycles(store, aux);
    return close_gaps(store, aux);
}

AtomStore eliminate_aux(const AtomStore& store, const std::set<std::string>& aux, const Program& program) {
    check_aux_cycles(store, aux);
    return compose_gaps(store, aux, program);
}

namespace {

ComplexObject render_set(const AtomStore& store, const ObjectSchema& s, const doc::DocTree& t, Emit emit, NodeId v);

ComplexObject render_element(const AtomStore& store, const ObjectSchema& s, const doc::DocTree& t, Emit emit,
                             NodeId w) {
    if (!s.record)
        return ComplexObject::str(emit == Emit::text ? t.txt(w) : "#" + std::to_string(w));
    std::vector<ComplexObject> entries;
    for (const auto& e : s.entries)
        entries.push_back(render_set(store, e, t, emit, w));
    return ComplexObject::record(std::move(entries));
}

ComplexObject render_set(const AtomStore& store, const ObjectSchema& s, const doc::DocTree& t, Emit emit, NodeId v) {
    std::vector<std::pair<NodeId, ComplexObject>> elems;
    if (!s.pred) {
        elems.emplace_back(v, render_element(store, s, t, emit, v));
    } else {
        const auto& atoms = store.atoms(*s.pred);
        for (auto it = atoms.lower_bound({v, 0}); it != atoms.end() && it->first == v; ++it)
            elems.emplace_back(it->second, render_element(store, s, t, emit, it->second));
    }
    return ComplexObject::set(std::move(elems));
}

void schema_preds(const ObjectSchema& s, std::set<std::string>& out) {
    if (s.pred)
        out.insert(*s.pred);
    for (const auto& e : s.entries)
        schema_preds(e, out);
}

} // namespace

ComplexObject to_complex_object(const AtomStore& store, const ObjectSchema& schema, const doc::DocTree& t, Emit emit) {
    std::set<std::string> known;
    schema_preds(schema, known);
    for (const auto& p : store.predicates()) {
        if (known.count(p))
            continue;
        const auto& atoms = store.atoms(p);
        bool condition_only =
            std::all_of(atoms.begin(), atoms.end(), [](const auto& a) { return a.first == any_parent; });
        if (!condition_only)
            throw Error(ErrorKind::schema_mismatch, "predicate '" + p + "' has no schema position");
    }
    return render_set(store, schema, t, emit, doc::root_id);
}

} // namespace wrap::elog
