#pragma once

#include <random>
#include <string>
#include <vector>

#include "weavent/async.hpp"
#include "weavent/domain.hpp"
#include "weavent/duality.hpp"
#include "weavent/es.hpp"
#include "weavent/rewrite.hpp"

namespace weavent::testing {

std::string fixture_path(const std::string& name);
EventStructure fixture_es(const std::string& name);       // fixtures/<name>.es.json
FiniteDomain fixture_domain(const std::string& name);     // fixtures/<name>.domain.json
FiniteDomain fixture_bdomain(const std::string& name);    // fixtures/<name>.bdomain.json
Grammar running_grammar();

FiniteDomain chain(int length);  // ⊥ ≺ x1 ≺ ... ≺ x_length

// Random binary structure with at most `max_events` events. Dead events are
// dropped, conflict is saturated and enabling is regenerated from steps
// between configurations, so the result is live and has no enabling that
// can never fire.
EventStructure random_live_es(std::mt19937& rng, int max_events, double conflict_probability = 0.25);

// Interchangeability straight from its quantifier definition over
// downward-closed sets of irreducibles.
bool interchangeable_by_definition(const FiniteDomain& d, int i, int j);

// Condition quantifying over elements above both predecessors.
bool interchangeable_by_upper_bounds(const FiniteDomain& d, int i, int j);

// Weak primes by their definition over every consistent subset of D, using
// the quantifier form of interchangeability.
std::vector<int> weak_primes_by_definition(const FiniteDomain& d);

// Elements differing from the join of everything strictly below them.
std::vector<int> irreducible_list(const FiniteDomain& d);

// Configurations of a structure by brute force over all event subsets.
std::vector<EventSet> configurations_by_subsets(const EventStructure& es);

}  // namespace weavent::testing
