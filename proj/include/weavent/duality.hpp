#pragma once

#include <optional>
#include <vector>

#include "weavent/domain.hpp"
#include "weavent/es.hpp"

namespace weavent {

// Configurations ordered by inclusion. Binary structures give coherent
// domains, consistency-predicate structures give bounded-complete ones.
// Throws InputError unless the structure is live.
FiniteDomain dom_of_es(const EventStructure& es);

// Events are interchange classes named "class{n}:{least member}".
// Throws InputError naming an irreducible that is not a weak prime.
EventStructure ev_of_domain(const FiniteDomain& d);

EventStructure connect_es(const EventStructure& es);

// Bijections as index vectors: result[x] is the image of x.
std::optional<std::vector<int>> es_isomorphic(const EventStructure& a, const EventStructure& b);
std::optional<std::vector<int>> poset_isomorphic(const FiniteDomain& a, const FiniteDomain& b);

// A prime event structure together with an equivalence on its events;
// cls[e] is the class index of event e.
struct Epes {
    EventStructure base;
    std::vector<int> cls;
};

// Throws InputError naming the first violated requirement.
void check_epes(const Epes& p);

// The unique minimal enabling of e in a prime structure.
EventSet causes(const EventStructure& prime, int e);

bool is_saturated(const Epes& p, EventSet x);
bool epes_connected(const Epes& p);

std::optional<std::vector<int>> epes_isomorphic(const Epes& a, const Epes& b);

FiniteDomain epes_dom(const Epes& p);
Epes epes_ev(const FiniteDomain& d);
EventStructure fuse(const Epes& p);
Epes unfold(const EventStructure& es);

// Object part of unfold is canonical; on morphisms the image of each
// unfolded source event is only determined up to equivalence. For every
// event of unfold(src) this lists the admissible events of unfold(dst)
// (empty when the underlying event is mapped to nothing).
std::vector<std::vector<int>> unfold_morphism_choices(const EventMap& f, const EventStructure& src,
                                                      const EventStructure& dst);

// Morphism of the underlying prime structures that also preserves and
// reflects equivalence on pairs whose images are both defined.
MorphismVerdict validate_epes_morphism(const EventMap& f, const Epes& src, const Epes& dst);

}  // namespace weavent
