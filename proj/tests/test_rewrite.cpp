#include <doctest.h>

#include <random>
#include <set>

#include "support/support.hpp"
#include "weavent/duality.hpp"
#include "weavent/error.hpp"
#include "weavent/rewrite.hpp"

using namespace weavent;
using namespace weavent::testing;

namespace {

std::shared_ptr<const Rule> rule_named(const Grammar& g, const std::string& name)
{
    for (const auto& r : g.rules) {
        if (r->name == name) return r;
    }
    FAIL("no rule " << name);
    return nullptr;
}

DirectDerivation fire(const Grammar& g, const TypedGraph& at, const std::string& name)
{
    const auto rule = rule_named(g, name);
    const auto matches = find_matches(*rule, at);
    REQUIRE(matches.size() == 1);
    auto step = apply_rule(at, rule, matches.front());
    REQUIRE(step.has_value());
    return *step;
}

Derivation derive(const Grammar& g, const std::vector<std::string>& rules)
{
    Derivation d{g.start, {}};
    for (const auto& name : rules) d.steps.push_back(fire(g, d.target(), name));
    return d;
}

// A one-node, one-edge type graph with a rule that deletes a node.
Grammar deleting_grammar()
{
    TypedGraph t;
    t.add_node("N", "N");
    t.add_edge("E", "E", 0, 0);
    Grammar g;
    g.type_graph = self_typed(t);
    auto rule = std::make_shared<Rule>();
    rule->name = "drop";
    rule->lhs.add_node("n", "N");
    rule->l = GraphMorphism{{}, {}};
    rule->r = GraphMorphism{{}, {}};
    g.rules.push_back(rule);
    g.start.add_node("u", "N");
    g.start.add_node("v", "N");
    g.start.add_edge("uv", "E", 0, 1);
    return g;
}

}  // namespace

TEST_CASE("matches in the running grammar")
{
    const auto g = running_grammar();
    const auto gb = fire(g, g.start, "p_a").target;
    CHECK(gb.nodes.size() == 1);

    const auto at_b = find_matches(*rule_named(g, "p_b"), gb);
    REQUIRE(at_b.size() == 1);
    CHECK(at_b.front().node[0] == at_b.front().node[1]);
    CHECK_FALSE(is_injective(at_b.front(), gb));

    CHECK(find_matches(*rule_named(g, "p_c"), g.start).empty());
    CHECK(find_matches(*rule_named(g, "p_a"), TypedGraph{}).empty());
}

TEST_CASE("rule application")
{
    const auto g = running_grammar();
    const auto first = fire(g, g.start, "p_a");
    CHECK(first.target.nodes.size() == 1);
    CHECK(first.target.edges.size() == 3);
    CHECK(verify_pushouts(first));

    const auto second = fire(g, first.target, "p_b");
    CHECK(second.target.nodes.size() == 1);
    CHECK(second.target.edges.size() == 2);
    CHECK(verify_pushouts(second));

    const auto del = deleting_grammar();
    const auto matches = find_matches(*del.rules.front(), del.start);
    REQUIRE(matches.size() == 2);
    CHECK_FALSE(apply_rule(del.start, del.rules.front(), matches[0]).has_value());
    CHECK_FALSE(apply_rule(del.start, del.rules.front(), matches[1]).has_value());

    GraphMorphism broken{{0, 0}, {0}};
    CHECK_THROWS_AS(apply_rule(g.start, rule_named(g, "p_a"), broken), InputError);
}

TEST_CASE("fusion safety")
{
    const auto g = running_grammar();
    const auto first = fire(g, g.start, "p_a");
    CHECK(is_fusion_safe(first));
    CHECK_FALSE(is_fusion_safe(fire(g, first.target, "p_b")));
    CHECK(is_fusion_safe(fire(g, first.target, "p_c")));
}

TEST_CASE("sequential independence and interchange")
{
    const auto g = running_grammar();
    const auto ab = derive(g, {"p_a", "p_b"});
    const auto pair = sequential_independence(ab.steps[0], ab.steps[1]);
    REQUIRE(pair.has_value());
    const auto [early, late] = interchange(ab.steps[0], ab.steps[1], *pair);
    CHECK(early.rule->name == "p_b");
    CHECK(late.rule->name == "p_a");
    CHECK(graph_isomorphic(late.target, ab.target()));
    CHECK(sequential_independence(early, late).has_value());

    const Derivation swapped{g.start, {early, late}};
    const auto perm = equivalent_traces(ab, swapped);
    REQUIRE(perm.has_value());
    CHECK(*perm == std::vector<int>{1, 0});

    const auto again = sequential_independence(early, late);
    const auto [back1, back2] = interchange(early, late, *again);
    CHECK(equivalent_traces(ab, Derivation{g.start, {back1, back2}}) == std::vector<int>{0, 1});

    const auto ac = derive(g, {"p_a", "p_c"});
    CHECK_FALSE(sequential_independence(ac.steps[0], ac.steps[1]).has_value());
    IndependencePair bogus{identity_morphism(ac.steps[0].rule->rhs), identity_morphism(ac.steps[1].rule->lhs)};
    CHECK_THROWS_AS(interchange(ac.steps[0], ac.steps[1], bogus), InputError);
}

TEST_CASE("independent steps on disjoint matches swap plainly")
{
    TypedGraph t;
    t.add_node("N", "N");
    Grammar g;
    g.type_graph = self_typed(t);
    auto rule = std::make_shared<Rule>();
    rule->name = "drop";
    rule->lhs.add_node("n", "N");
    rule->l = GraphMorphism{{}, {}};
    rule->r = GraphMorphism{{}, {}};
    g.rules.push_back(rule);
    g.start.add_node("u", "N");
    g.start.add_node("v", "N");

    const auto m = find_matches(*rule, g.start);
    REQUIRE(m.size() == 2);
    const auto d1 = *apply_rule(g.start, rule, m[0]);
    const auto m2 = find_matches(*rule, d1.target);
    REQUIRE(m2.size() == 1);
    const auto d2 = *apply_rule(d1.target, rule, m2[0]);
    const auto pair = sequential_independence(d1, d2);
    REQUIRE(pair.has_value());
    const auto [x, y] = interchange(d1, d2, *pair);
    CHECK(x.source.nodes.size() == 2);
    CHECK(y.target.nodes.empty());
    CHECK(equivalent_traces(Derivation{g.start, {d1, d2}}, Derivation{g.start, {x, y}}) == std::vector<int>{1, 0});
}

TEST_CASE("trace equivalence")
{
    const auto g = running_grammar();
    const auto ab = derive(g, {"p_a", "p_b"});
    const auto ba = derive(g, {"p_b", "p_a"});
    CHECK(equivalent_traces(ab, ba) == std::vector<int>{1, 0});
    CHECK(equivalent_traces(ab, ab) == std::vector<int>{0, 1});
    CHECK_FALSE(equivalent_traces(derive(g, {"p_a", "p_c"}), derive(g, {"p_b", "p_c"})).has_value());
    CHECK_FALSE(equivalent_traces(ab, derive(g, {"p_a"})).has_value());
}

TEST_CASE("trace domains of the running grammar")
{
    const auto g = running_grammar();
    const auto full = trace_domain(g, 3, false);
    CHECK(full.size() == 7);
    const auto alg = algebraicity(full);
    CHECK(alg.weak_prime_algebraic);
    CHECK_FALSE(alg.prime_algebraic);
    CHECK(poset_isomorphic(full, dom_of_es(fixture_es("e_run"))));

    const auto safe = trace_domain(g, 3, true);
    CHECK(safe.size() == 5);
    CHECK(algebraicity(safe).prime_algebraic);
    CHECK(poset_isomorphic(safe, dom_of_es(fixture_es("e_run_conflict"))));

    CHECK(trace_domain(g, 0, false).size() == 1);
    CHECK(trace_domain(deleting_grammar(), 4, false).size() == 1);
    CHECK_THROWS_AS(trace_space(g, 3, false, 3), CeilingError);
}

TEST_CASE("pushouts, interchange and lengths across trace spaces")
{
    std::vector<std::pair<Grammar, std::size_t>> grammars{{running_grammar(), 3}};
    grammars.emplace_back(grammar_from_es(fixture_es("e1")), 5);
    for (const auto& [g, depth] : grammars) {
        for (bool fusion_safe : {false, true}) {
            const auto space = trace_space(g, depth, fusion_safe);
            const auto& d = space.domain;
            CHECK(algebraicity(d).weak_prime_algebraic);
            if (fusion_safe) CHECK(algebraicity(d).prime_algebraic);

            for (std::size_t x = 0; x < space.representatives.size(); ++x) {
                const auto& rep = space.representatives[x];
                CHECK(static_cast<int>(rep.size()) == d.height(static_cast<int>(x)));
                for (const auto& step : rep.steps) {
                    CHECK(verify_pushouts(step));
                    if (fusion_safe) CHECK(is_fusion_safe(step));
                }
                for (std::size_t k = 0; k + 1 < rep.size(); ++k) {
                    const auto pair = sequential_independence(rep.steps[k], rep.steps[k + 1]);
                    if (!pair) continue;
                    const auto [p, q] = interchange(rep.steps[k], rep.steps[k + 1], *pair);
                    CHECK(graph_isomorphic(q.target, rep.steps[k + 1].target));
                    if (is_fusion_safe(rep.steps[k]) && is_fusion_safe(rep.steps[k + 1])) {
                        CHECK(is_fusion_safe(p));
                        CHECK(is_fusion_safe(q));
                    }
                }
            }

            // The join of two consistent classes needs one step per event they cover jointly.
            std::vector<int> class_of(d.size(), -1);
            const auto classes = interchange_classes(d);
            for (std::size_t c = 0; c < classes.size(); ++c) {
                for (int i : classes[c]) class_of[i] = static_cast<int>(c);
            }
            for (int x = 0; x < static_cast<int>(d.size()); ++x) {
                for (int y = 0; y < static_cast<int>(d.size()); ++y) {
                    const auto j = d.join(x, y);
                    if (!j) continue;
                    std::set<int> events;
                    for (int i : decompose(d, x)) events.insert(class_of[i]);
                    for (int i : decompose(d, y)) events.insert(class_of[i]);
                    CHECK(space.representatives[static_cast<std::size_t>(*j)].size() == events.size());
                }
            }
        }
    }
}

TEST_CASE("grammar synthesis from connected structures")
{
    const auto run = grammar_from_es(fixture_es("e_run"));
    CHECK(run.rules.size() == 3);
    CHECK(run.start.nodes.size() == 7);

    const auto e1 = grammar_from_es(fixture_es("e1"));
    CHECK(e1.rules.size() == 5);
    CHECK(e1.start.nodes.size() == 13);

    const auto single = grammar_from_es(make_es({"e"}, {}, {{{}, "e"}}));
    CHECK(single.rules.size() == 1);
    CHECK(single.start.nodes.size() == 2);

    CHECK_THROWS_AS(grammar_from_es(fixture_es("e_run_conflict")), InputError);

    for (const char* name : {"e_run", "e1"}) {
        const auto es = fixture_es(name);
        const auto d = trace_domain(grammar_from_es(es), es.size(), false);
        CHECK(es_isomorphic(ev_of_domain(d), es));
    }
}

TEST_CASE("synthesised grammars recover random connected structures")
{
    std::mt19937 rng(31);
    int done = 0;
    while (done < 20) {
        const auto es = random_live_es(rng, 4);
        if (!classify(es).connected) continue;
        ++done;
        const auto g = grammar_from_es(es);
        const auto space = trace_space(g, es.size(), false);
        CHECK(es_isomorphic(ev_of_domain(space.domain), es));
        // Each rule fires at most once along any derivation.
        for (const auto& rep : space.representatives) {
            std::set<std::string> fired;
            for (const auto& step : rep.steps) CHECK(fired.insert(step.rule->name).second);
        }
    }
}
