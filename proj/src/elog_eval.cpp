#include <algorithm>
#include <functional>
#include <unordered_map>

#include "wrap/elog.hpp"
#include "wrap/error.hpp"

namespace wrap::elog {

using doc::NodeId;

bool AtomStore::insert(const std::string& pred, NodeId parent, NodeId node) {
    return by_pred_[pred].emplace(parent, node).second;
}

bool AtomStore::contains(const std::string& pred, NodeId parent, NodeId node) const {
    auto it = by_pred_.find(pred);
    return it != by_pred_.end() && it->second.count({parent, node}) > 0;
}

const AtomStore::Pairs& AtomStore::atoms(const std::string& pred) const {
    static const Pairs empty;
    auto it = by_pred_.find(pred);
    return it == by_pred_.end() ? empty : it->second;
}

std::vector<std::string> AtomStore::predicates() const {
    std::vector<std::string> out;
    for (const auto& [p, pairs] : by_pred_)
        if (!pairs.empty())
            out.push_back(p);
    return out;
}

std::size_t AtomStore::size() const {
    std::size_t n = 0;
    for (const auto& [p, pairs] : by_pred_)
        n += pairs.size();
    return n;
}

std::vector<Atom> AtomStore::all() const {
    std::vector<Atom> out;
    for (const auto& [p, pairs] : by_pred_)
        for (const auto& [v0, v] : pairs)
            out.push_back({p, v0, v});
    return out;
}

std::string AtomStore::dump() const {
    std::vector<std::string> lines;
    for (const auto& [p, pairs] : by_pred_)
        for (const auto& [v0, v] : pairs)
            lines.push_back(p + "(" + (v0 == any_parent ? std::string("_") : std::to_string(v0)) + "," +
                            std::to_string(v) + ")");
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines)
        out += l + "\n";
    return out;
}

std::vector<NodeId> unary_query(const AtomStore& store, const std::string& pred) {
    std::vector<NodeId> out;
    for (const auto& [v0, v] : store.atoms(pred))
        out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// One body atom in execution order. `generate` steps bind `to` from the
// already bound `from`; the rest only test bound variables.
struct Step {
    enum class Op { check_cond, generate, check_ref };
    Op op;
    const Condition* cond = nullptr;
    std::size_t ref_pred = 0;
    int from = -1;
    int to = -1;
    int a = -1;
    int b = -1;
};

struct CompiledRule {
    const Rule* rule;
    std::size_t head;
    std::size_t parent = 0; // predicate index when parent_kind == pattern
    enum class ParentKind { root, dom, pattern, none } parent_kind = ParentKind::none;
    int var_count = 0;
    int x0 = -1;
    int x = -1;
    std::vector<Step> plan;
    std::vector<std::size_t> body_preds;
};

class Evaluator {
public:
    Evaluator(const Program& prog, const doc::DocTree& t) : prog_(prog), t_(t) {
        for (const auto& p : prog.predicates()) {
            index_.emplace(p, names_.size());
            names_.push_back(p);
        }
        unary_.assign(names_.size(), std::vector<bool>(t.size(), false));
        delta_.assign(names_.size(), {});
        is_condition_.assign(names_.size(), false);
        for (const auto& p : prog.condition_predicates())
            is_condition_[index_.at(p)] = true;
        for (const auto& r : prog.rules)
            rules_.push_back(compile(r));
        txt_cache_.resize(t.size());
    }

    void check_strata() { strata(); }

    AtomStore run() {
        auto sccs = strata();
        for (const auto& scc : sccs)
            run_stratum(scc);
        return std::move(store_);
    }

private:
    CompiledRule compile(const Rule& r) {
        CompiledRule cr;
        cr.rule = &r;
        cr.head = index_.at(r.head);
        std::map<std::string, int> vars;
        auto var = [&](const std::string& name) {
            auto [it, inserted] = vars.emplace(name, static_cast<int>(vars.size()));
            return it->second;
        };
        cr.x = var(r.x);
        if (!r.dom_pair) {
            cr.x0 = var(r.x0);
            if (r.parent == root_pred) {
                cr.parent_kind = CompiledRule::ParentKind::root;
            } else if (r.parent == dom_pred) {
                cr.parent_kind = CompiledRule::ParentKind::dom;
            } else {
                cr.parent_kind = CompiledRule::ParentKind::pattern;
                cr.parent = index_.at(r.parent);
                cr.body_preds.push_back(cr.parent);
            }
        }
        for (const auto& c : r.conds) {
            var(c.x);
            if (!c.y.empty())
                var(c.y);
        }
        for (const auto& ref : r.refs) {
            var(ref.var);
            cr.body_preds.push_back(index_.at(ref.pred));
        }
        cr.var_count = static_cast<int>(vars.size());

        // Greedy plan: tests as soon as their variables are bound, then one
        // generator from a bound variable to an unbound one.
        std::vector<bool> bound(cr.var_count, false);
        bound[cr.x] = true;
        if (cr.x0 >= 0)
            bound[cr.x0] = true;
        std::vector<bool> done_cond(r.conds.size(), false), done_ref(r.refs.size(), false);
        for (;;) {
            bool progress = false;
            for (std::size_t i = 0; i < r.conds.size(); ++i) {
                if (done_cond[i])
                    continue;
                const Condition& c = r.conds[i];
                int a = vars.at(c.x);
                int b = c.y.empty() ? -1 : vars.at(c.y);
                if (bound[a] && (b < 0 || bound[b])) {
                    cr.plan.push_back({Step::Op::check_cond, &c, 0, -1, -1, a, b});
                    done_cond[i] = progress = true;
                }
            }
            for (std::size_t i = 0; i < r.refs.size(); ++i) {
                int a = vars.at(r.refs[i].var);
                if (!done_ref[i] && bound[a]) {
                    cr.plan.push_back({Step::Op::check_ref, nullptr, index_.at(r.refs[i].pred), -1, -1, a, -1});
                    done_ref[i] = progress = true;
                }
            }
            if (progress)
                continue;
            bool generated = false;
            for (std::size_t i = 0; i < r.conds.size() && !generated; ++i) {
                if (done_cond[i] || r.conds[i].y.empty())
                    continue;
                const Condition& c = r.conds[i];
                int a = vars.at(c.x), b = vars.at(c.y);
                if (bound[a] != bound[b]) {
                    int from = bound[a] ? a : b, to = bound[a] ? b : a;
                    cr.plan.push_back({Step::Op::generate, &c, 0, from, to, a, b});
                    bound[to] = true;
                    done_cond[i] = generated = true;
                }
            }
            if (!generated)
                break;
        }
        return cr;
    }

    // Strongly connected components of the head → body dependency graph,
    // dependencies first.
    std::vector<std::vector<std::size_t>> strata() {
        const std::size_t n = names_.size();
        std::vector<std::set<std::size_t>> deps(n);
        for (const auto& cr : rules_)
            for (auto p : cr.body_preds)
                deps[cr.head].insert(p);
        std::vector<int> index(n, -1), low(n, 0);
        std::vector<bool> on_stack(n, false);
        std::vector<std::size_t> stack;
        std::vector<std::vector<std::size_t>> out;
        int counter = 0;
        std::function<void(std::size_t)> visit = [&](std::size_t v) {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            on_stack[v] = true;
            for (auto w : deps[v]) {
                if (index[w] < 0) {
                    visit(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> scc;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    scc.push_back(w);
                } while (w != v);
                out.push_back(std::move(scc));
            }
        };
        for (std::size_t v = 0; v < n; ++v)
            if (index[v] < 0)
                visit(v);

        for (const auto& scc : out) {
            bool recursive = scc.size() > 1 || deps[scc.front()].count(scc.front());
            if (!recursive)
                continue;
            for (const auto& cr : rules_)
                if (cr.rule->rule_range && std::find(scc.begin(), scc.end(), cr.head) != scc.end())
                    throw Error(ErrorKind::not_stratified,
                                "predicate '" + names_[cr.head] + "' has a rule range but is recursive");
        }
        return out;
    }

    void run_stratum(const std::vector<std::size_t>& scc) {
        std::set<std::size_t> members(scc.begin(), scc.end());
        std::vector<const CompiledRule*> rules;
        for (const auto& cr : rules_)
            if (members.count(cr.head))
                rules.push_back(&cr);

        std::vector<std::vector<NodeId>> last_delta(names_.size());
        bool first = true;
        for (;;) {
            for (auto p : scc)
                delta_[p].clear();
            for (const CompiledRule* cr : rules) {
                bool refs_changed = false;
                bool parent_in_scc = cr->parent_kind == CompiledRule::ParentKind::pattern && members.count(cr->parent);
                for (std::size_t i = parent_in_scc ? 1 : 0; i < cr->body_preds.size(); ++i)
                    if (members.count(cr->body_preds[i]) && !last_delta[cr->body_preds[i]].empty())
                        refs_changed = true;
                if (first || refs_changed) {
                    fire(*cr, nullptr);
                } else if (parent_in_scc && !last_delta[cr->parent].empty()) {
                    fire(*cr, &last_delta[cr->parent]);
                }
            }
            first = false;
            bool any = false;
            for (auto p : scc) {
                last_delta[p] = delta_[p];
                any = any || !delta_[p].empty();
            }
            if (!any)
                break;
        }
    }

    void derive(std::size_t pred, NodeId parent, NodeId node) {
        if (store_.insert(names_[pred], parent, node) && !unary_[pred][node]) {
            unary_[pred][node] = true;
            delta_[pred].push_back(node);
        }
    }

    // Evaluates a rule, for all parents or only for `parents`.
    void fire(const CompiledRule& cr, const std::vector<NodeId>* parents) {
        const Rule& r = *cr.rule;
        std::vector<NodeId> binding(cr.var_count, 0);
        if (r.dom_pair) {
            for (NodeId v = 0; v < t_.size(); ++v) {
                binding[cr.x] = v;
                if (satisfiable(cr, binding, 0))
                    derive(cr.head, any_parent, v);
            }
            return;
        }
        std::vector<NodeId> sources;
        if (parents) {
            sources = *parents;
        } else {
            switch (cr.parent_kind) {
            case CompiledRule::ParentKind::root:
                sources.push_back(doc::root_id);
                break;
            case CompiledRule::ParentKind::dom:
                // The synthetic document root is not a node of the document.
                for (NodeId v = 1; v < t_.size(); ++v)
                    sources.push_back(v);
                break;
            case CompiledRule::ParentKind::pattern:
                for (NodeId v = 0; v < t_.size(); ++v)
                    if (unary_[cr.parent][v])
                        sources.push_back(v);
                break;
            case CompiledRule::ParentKind::none:
                break;
            }
        }
        for (NodeId v0 : sources) {
            auto candidates = path::subelem_range(t_, v0, r.path, r.range);
            std::vector<NodeId> accepted;
            binding[cr.x0] = v0;
            for (NodeId v : candidates) {
                binding[cr.x] = v;
                if (satisfiable(cr, binding, 0))
                    accepted.push_back(v);
            }
            if (r.rule_range)
                accepted = path::select(accepted, *r.rule_range);
            for (NodeId v : accepted)
                derive(cr.head, v0, v);
        }
    }

    const std::vector<NodeId>& reach(const Condition& c, NodeId from) {
        auto key = std::make_pair(&c, from);
        auto it = reach_cache_.find(key);
        if (it == reach_cache_.end())
            it = reach_cache_.emplace(key, path::subelem_range(t_, from, c.path, c.range)).first;
        return it->second;
    }

    const std::string& txt(NodeId v) {
        if (!txt_cache_[v])
            txt_cache_[v] = t_.txt(v);
        return *txt_cache_[v];
    }

    bool holds(const Condition& c, NodeId a, NodeId b) {
        switch (c.kind) {
        case Condition::Kind::contains: {
            const auto& r = reach(c, a);
            return std::binary_search(r.begin(), r.end(), b);
        }
        case Condition::Kind::contains_s: return txt(a) == c.text;
        case Condition::Kind::firstchild: return t_.first_child(a) == b;
        case Condition::Kind::nextsibling: return t_.next_sibling(a) == b;
        case Condition::Kind::lastsibling: return t_.is_last_sibling(a);
        case Condition::Kind::label: return t_.label(a) == c.text;
        case Condition::Kind::root: return t_.is_root(a);
        }
        return false;
    }

    std::vector<NodeId> generate(const Condition& c, bool forward, NodeId from) {
        std::vector<NodeId> out;
        switch (c.kind) {
        case Condition::Kind::contains:
            if (forward) {
                out = reach(c, from);
            } else {
                for (std::optional<NodeId> a = from; a; a = t_.parent(*a)) {
                    const auto& r = reach(c, *a);
                    if (std::binary_search(r.begin(), r.end(), from))
                        out.push_back(*a);
                }
            }
            break;
        case Condition::Kind::firstchild:
            if (forward) {
                if (auto c2 = t_.first_child(from))
                    out.push_back(*c2);
            } else if (auto p = t_.parent(from); p && t_.first_child(*p) == from) {
                out.push_back(*p);
            }
            break;
        case Condition::Kind::nextsibling:
            if (forward) {
                if (auto s = t_.next_sibling(from))
                    out.push_back(*s);
            } else if (auto p = t_.parent(from)) {
                auto kids = t_.children(*p);
                auto it = std::find(kids.begin(), kids.end(), from);
                if (it != kids.begin())
                    out.push_back(*std::prev(it));
            }
            break;
        default:
            break;
        }
        return out;
    }

    bool satisfiable(const CompiledRule& cr, std::vector<NodeId>& binding, std::size_t at) {
        for (; at < cr.plan.size(); ++at) {
            const Step& s = cr.plan[at];
            switch (s.op) {
            case Step::Op::check_ref:
                if (!unary_[s.ref_pred][binding[s.a]])
                    return false;
                break;
            case Step::Op::check_cond:
                if (!holds(*s.cond, binding[s.a], s.b >= 0 ? binding[s.b] : 0))
                    return false;
                break;
            case Step::Op::generate: {
                bool forward = s.from == s.a;
                for (NodeId v : generate(*s.cond, forward, binding[s.from])) {
                    binding[s.to] = v;
                    if (satisfiable(cr, binding, at + 1))
                        return true;
                }
                return false;
            }
            }
        }
        return true;
    }

    const Program& prog_;
    const doc::DocTree& t_;
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
    std::vector<CompiledRule> rules_;
    std::vector<std::vector<bool>> unary_;
    std::vector<std::vector<NodeId>> delta_;
    std::vector<bool> is_condition_;
    AtomStore store_;
    std::map<std::pair<const Condition*, NodeId>, std::vector<NodeId>> reach_cache_;
    std::vector<std::optional<std::string>> txt_cache_;
};

} // namespace

AtomStore eval_fixpoint(const Program& program, const doc::DocTree& t) {
    validate(program);
    return Evaluator(program, t).run();
}

void check_program(const Program& program) {
    validate(program);
    const doc::DocTree empty = doc::DocTree::Builder().finish();
    Evaluator(program, empty).check_strata();
}

Program monadic_collapse(const Program& program, std::map<std::string, std::string>* companion_of) {
    if (program.has_rule_ranges())
        throw Error(ErrorKind::has_rule_ranges, "monadic collapse needs a program without rule ranges");
    std::set<std::string> taken;
    for (const auto& p : program.predicates())
        taken.insert(p);
    std::set<std::string> conditions = program.condition_predicates();
    std::map<std::string, std::string> primed;
    for (const auto& p : program.predicates()) {
        if (conditions.count(p))
            continue;
        std::string name = p + "'";
        while (taken.count(name))
            name += "'";
        taken.insert(name);
        primed.emplace(p, name);
    }
    Program out;
    for (const auto& r : program.rules) {
        Rule copy = r;
        if (!copy.dom_pair && primed.count(copy.parent))
            copy.parent = primed.at(copy.parent);
        for (auto& ref : copy.refs)
            if (primed.count(ref.pred))
                ref.pred = primed.at(ref.pred);
        out.rules.push_back(std::move(copy));
    }
    for (const auto& [p, name] : primed) {
        Rule companion;
        companion.head = name;
        companion.dom_pair = true;
        companion.parent = std::string(dom_pred);
        companion.refs.push_back({p, companion.x});
        out.rules.push_back(std::move(companion));
    }
    out.aux = program.aux;
    out.records = program.records;
    out.schema = program.schema;
    if (companion_of)
        *companion_of = primed;
    return out;
}

} // namespace wrap::elog
