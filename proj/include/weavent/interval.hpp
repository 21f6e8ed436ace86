#pragma once

#include <string>
#include <utility>
#include <vector>

#include "weavent/domain.hpp"
#include "weavent/es.hpp"

namespace weavent {

// Cover pairs of a domain grouped by the equivalence generated by
//   [c,c'] <= [d,d']  iff  c = c' ⊓ d  and  c' ⊔ d = d'.
struct IntervalPartition {
    std::vector<std::pair<int, int>> intervals;  // (lower, upper)
    std::vector<int> class_of;                   // per interval
    std::vector<std::vector<int>> classes;       // interval indices, ordered by first member
};

IntervalPartition interval_classes(const FiniteDomain& d);

bool interval_leq(const FiniteDomain& d, std::pair<int, int> a, std::pair<int, int> b);

struct AxiomReport {
    bool finitary = true;      // F
    bool cover_join = true;    // C
    bool rigid = true;         // R
    bool consistency = true;   // V
    bool intervals_ordered = true;  // I
    std::vector<std::string> diagnostics;

    bool event_axioms() const { return finitary && cover_join && rigid && consistency; }
};

AxiomReport check_axioms(const FiniteDomain& d);

// Events are interval classes named "interval{n}:[lower,upper]" after their
// first member. Throws InputError naming the first failing axiom.
EventStructure ev_wd(const FiniteDomain& d);

// Correspondence between interval classes and interchange classes (indices
// as returned by interval_classes and interchange_classes). An interval
// [d,d'] maps to the class of the minimal irreducibles in ir(d') \ ir(d);
// the non-minimal ones can belong to other classes.
struct IntervalIrreducibleMap {
    std::vector<int> to_irreducible_class;
    std::vector<int> to_interval_class;
    bool well_defined = false;  // every member of an interval class agrees
    bool mutually_inverse = false;
};

// Throws InputError unless d is a weak prime domain.
IntervalIrreducibleMap zeta(const FiniteDomain& d);

}  // namespace weavent
