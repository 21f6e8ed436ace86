#pragma once

#include <boost/dynamic_bitset.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace weavent {

enum class DomainKind { coherent, bounded_complete };

// A finite partial order standing for the compact elements of a domain.
// Elements are indexed 0..n-1. The constructor accepts any generating set of
// strict order pairs (covers or the full relation), rejects cycles and keeps
// the Hasse diagram plus the reflexive-transitive closure. Joins and meets of
// pairs are tabulated once.
class FiniteDomain {
public:
    FiniteDomain() = default;
    FiniteDomain(std::vector<std::string> elements, const std::vector<std::pair<int, int>>& below,
                 DomainKind kind = DomainKind::coherent);

    std::size_t size() const { return names_.size(); }
    DomainKind kind() const { return kind_; }
    const std::string& name(int x) const { return names_.at(static_cast<std::size_t>(x)); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<int> find(std::string_view name) const;
    int index_of(std::string_view name) const;

    bool leq(int a, int b) const { return up_[a].test(b); }
    bool covered_by(int a, int b) const;  // a ≺ b
    const std::vector<int>& lower_covers(int x) const { return lower_[x]; }
    const std::vector<int>& upper_covers(int x) const { return upper_[x]; }
    std::vector<std::pair<int, int>> cover_pairs() const;
    const boost::dynamic_bitset<>& up_set(int x) const { return up_[x]; }
    const boost::dynamic_bitset<>& down_set(int x) const { return down_[x]; }

    std::optional<int> bottom() const { return bottom_; }
    bool consistent(int a, int b) const;
    bool consistent(const std::vector<int>& xs) const;
    std::optional<int> join(int a, int b) const;
    std::optional<int> join(const std::vector<int>& xs) const;  // empty set joins to bottom
    std::optional<int> meet(int a, int b) const;
    std::optional<int> meet(const std::vector<int>& xs) const;  // xs nonempty

    std::vector<int> maximal_elements() const;
    int height(int x) const { return height_[x]; }

private:
    std::optional<int> least_of(const boost::dynamic_bitset<>& candidates) const;
    std::optional<int> greatest_of(const boost::dynamic_bitset<>& candidates) const;

    std::vector<std::string> names_;
    DomainKind kind_ = DomainKind::coherent;
    std::vector<boost::dynamic_bitset<>> up_;
    std::vector<boost::dynamic_bitset<>> down_;
    std::vector<std::vector<int>> lower_;
    std::vector<std::vector<int>> upper_;
    std::vector<int> height_;
    std::vector<int> join_;  // -1 when absent
    std::vector<int> meet_;
    std::optional<int> bottom_;
};

struct DomainVerdict {
    bool ok = true;
    std::string reason;
    std::vector<int> witness;
};

DomainVerdict validate_domain(const FiniteDomain& d);

struct IrreducibleInfo {
    int element = 0;
    int predecessor = 0;
    int class_id = 0;
};

std::vector<int> irreducible_elements(const FiniteDomain& d);
bool is_irreducible(const FiniteDomain& d, int x);
int predecessor(const FiniteDomain& d, int i);  // throws unless i is irreducible
std::vector<IrreducibleInfo> irreducibles(const FiniteDomain& d);

std::vector<int> primes(const FiniteDomain& d);

bool interchangeable(const FiniteDomain& d, int i, int j);

// Classes of the reflexive-transitive closure of interchangeability, each
// sorted by element name, classes ordered by their least member name.
std::vector<std::vector<int>> interchange_classes(const FiniteDomain& d);

std::vector<int> weak_primes(const FiniteDomain& d);

struct Algebraicity {
    bool irreducible_algebraic = false;
    bool prime_algebraic = false;
    bool weak_prime_algebraic = false;
};

Algebraicity algebraicity(const FiniteDomain& d);

std::vector<int> decompose(const FiniteDomain& d, int x);          // ir(x)
std::vector<int> diff(const FiniteDomain& d, int upper, int lower);  // ir(upper) \ ir(lower)

// Total element map from one domain to another.
using PosetMap = std::vector<int>;

struct DomainMorphismVerdict {
    bool ok = true;
    std::string condition;
    std::vector<int> witness;  // source elements
};

DomainMorphismVerdict validate_domain_morphism(const PosetMap& f, const FiniteDomain& src,
                                               const FiniteDomain& dst, bool strict = false);

}  // namespace weavent
