#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weavent/domain.hpp"
#include "weavent/es.hpp"
#include "weavent/graph.hpp"

namespace weavent {

// A span L <-l- K -r-> R with l injective and not surjective. The right leg
// may identify items, which is how a rule fuses parts of the state.
struct Rule {
    std::string name;
    TypedGraph lhs;
    TypedGraph interface;
    TypedGraph rhs;
    GraphMorphism l;
    GraphMorphism r;
};

// Throws InputError if the legs are not morphisms, l is not injective, or the
// rule deletes nothing.
void check_rule(const Rule& rule, const TypedGraph& type_graph);

struct Grammar {
    TypedGraph type_graph;  // self-typed
    TypedGraph start;
    std::vector<std::shared_ptr<const Rule>> rules;
};

void check_grammar(const Grammar& g);

// One double-pushout step G <- D -> H. Morphism names follow their roles:
// match_l: L -> G, match_k: K -> D, match_r: R -> H, into_source: D -> G,
// into_target: D -> H.
struct DirectDerivation {
    std::shared_ptr<const Rule> rule;
    TypedGraph source;
    TypedGraph context;
    TypedGraph target;
    GraphMorphism match_l;
    GraphMorphism match_k;
    GraphMorphism match_r;
    GraphMorphism into_source;
    GraphMorphism into_target;
};

struct Derivation {
    TypedGraph start;
    std::vector<DirectDerivation> steps;

    const TypedGraph& target() const { return steps.empty() ? start : steps.back().target; }
    std::size_t size() const { return steps.size(); }
    std::string rule_sequence() const;  // "p;q;r", or "ε" when empty
};

std::vector<GraphMorphism> find_matches(const Rule& rule, const TypedGraph& g);

// Empty when the gluing condition fails. Throws InputError if `match` is not a
// typed morphism from the left-hand side.
std::optional<DirectDerivation> apply_rule(const TypedGraph& g, const std::shared_ptr<const Rule>& rule,
                                           const GraphMorphism& match);

// Both squares of the step are pushouts.
bool verify_pushouts(const DirectDerivation& d);

bool is_fusion_safe(const DirectDerivation& d);

// i1: R1 -> D2 and i2: L2 -> D1 witnessing that d2 does not depend on d1.
struct IndependencePair {
    GraphMorphism produced_kept;   // i1
    GraphMorphism consumed_early;  // i2
};

std::optional<IndependencePair> sequential_independence(const DirectDerivation& d1, const DirectDerivation& d2);

// Applies d2's rule first and d1's rule second. Throws InputError if the pair
// does not witness independence of (d1, d2).
std::pair<DirectDerivation, DirectDerivation> interchange(const DirectDerivation& d1, const DirectDerivation& d2,
                                                          const IndependencePair& pair);

// Left-consistent permutation between two derivations from the same start
// graph: perm[i] is the position in b of step i of a.
std::optional<std::vector<int>> equivalent_traces(const Derivation& a, const Derivation& b);

struct TraceSpace {
    FiniteDomain domain;
    std::vector<Derivation> representatives;  // indexed like domain elements
};

inline constexpr std::size_t kDefaultClassCeiling = 10000;

// Classes of derivations of length <= depth ordered by prefix. Throws
// CeilingError when the number of classes exceeds `ceiling`.
TraceSpace trace_space(const Grammar& g, std::size_t depth, bool fusion_safe,
                       std::size_t ceiling = kDefaultClassCeiling);
FiniteDomain trace_domain(const Grammar& g, std::size_t depth, bool fusion_safe,
                          std::size_t ceiling = kDefaultClassCeiling);

// One rule per event whose firing deletes the event's token and its conflict
// tokens and fuses the nodes that track pending enablings. Throws InputError
// unless the structure is binary and connected.
Grammar grammar_from_es(const EventStructure& es);

}  // namespace weavent
