#include "wrap/rpn.hpp"

namespace wrap::rpn {

namespace {

using elog::Condition;
using elog::Rule;
using elog::SetSchema;

class Translator {
public:
    explicit Translator(RangePlacement placement) : placement_(placement) {}

    Translation run(const Statement& stmt) {
        Translation tr;
        tr.schema = statement(stmt, 0, std::string(elog::root_pred));
        prog_.aux = aux_;
        prog_.schema = tr.schema;
        tr.program = std::move(prog_);
        tr.aux = std::move(aux_);
        return tr;
    }

private:
    // Returns the set position of stmt.chain[pos..] evaluated at the nodes of `ctx`.
    SetSchema statement(const Statement& s, std::size_t pos, const std::string& ctx) {
        if (pos == s.chain.size()) {
            SetSchema out;
            out.record = s.record;
            for (const auto& e : s.entries)
                out.entries.push_back(statement(e, 0, ctx));
            return out;
        }
        const Patom& p = s.chain[pos];
        std::string head = "p" + std::to_string(++next_p_);
        Rule r;
        r.head = head;
        r.parent = ctx;
        r.path = p.path;
        if (placement_ == RangePlacement::rule_level && !p.range.is_star())
            r.rule_range = p.range;
        else
            r.range = p.range;
        for (const auto& c : p.conds)
            r.refs.push_back({cond(c, 0), r.x});
        prog_.rules.push_back(std::move(r));

        SetSchema rest = statement(s, pos + 1, head);
        if (rest.pred) {
            aux_.insert(head);
            return rest;
        }
        // The set produced here is the first one with a position in the type.
        rest.pred = head;
        // Entries were anchored at this patom's nodes, which is what a
        // record element renders against; a txt tail renders the node itself.
        return rest;
    }

    std::string cond(const Cond& c, std::size_t pos) {
        std::string head = "c" + std::to_string(++next_c_);
        Rule r;
        r.head = head;
        r.dom_pair = true;
        r.parent = std::string(elog::dom_pred);
        if (pos == c.chain.size()) {
            Condition cs;
            cs.kind = Condition::Kind::contains_s;
            cs.x = r.x;
            cs.text = c.text;
            r.conds.push_back(std::move(cs));
            prog_.rules.push_back(std::move(r));
            return head;
        }
        const Patom& p = c.chain[pos];
        Condition step;
        step.kind = Condition::Kind::contains;
        step.x = r.x;
        step.y = "Y";
        step.path = p.path;
        step.range = p.range;
        r.conds.push_back(std::move(step));
        for (const auto& inner : p.conds)
            r.refs.push_back({cond(inner, 0), "Y"});
        r.refs.push_back({cond(c, pos + 1), "Y"});
        prog_.rules.push_back(std::move(r));
        return head;
    }

    RangePlacement placement_;
    elog::Program prog_;
    std::set<std::string> aux_;
    int next_p_ = 0;
    int next_c_ = 0;
};

} // namespace

Translation translate(const Statement& stmt, RangePlacement placement) { return Translator(placement).run(stmt); }

ComplexObject run_translation(const Translation& tr, const doc::DocTree& t) {
    auto store = elog::eval_fixpoint(tr.program, t);
    return elog::to_complex_object(elog::eliminate_aux(store, tr.aux, tr.program), tr.schema, t);
}

} // namespace wrap::rpn
