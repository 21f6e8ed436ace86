#include "weavent/domain.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "weavent/error.hpp"

namespace weavent {

using Bits = boost::dynamic_bitset<>;

FiniteDomain::FiniteDomain(std::vector<std::string> elements,
                           const std::vector<std::pair<int, int>>& below, DomainKind kind)
    : names_(std::move(elements)), kind_(kind)
{
    const int n = static_cast<int>(names_.size());
    {
        std::set<std::string> seen;
        for (const auto& name : names_) {
            if (name.empty()) throw InputError("element names must be nonempty");
            if (!seen.insert(name).second) throw InputError("duplicate element '" + name + "'");
        }
    }
    std::vector<std::vector<int>> succ(n);
    std::vector<int> indegree(n, 0);
    for (auto [a, b] : below) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw InputError("order pair refers to an unknown element");
        if (a == b) throw InputError("order pair relates '" + names_[a] + "' to itself");
        succ[a].push_back(b);
        ++indegree[b];
    }

    // Kahn's algorithm doubles as cycle detection.
    std::vector<int> order;
    std::vector<int> ready;
    for (int x = 0; x < n; ++x) {
        if (indegree[x] == 0) ready.push_back(x);
    }
    while (!ready.empty()) {
        int x = ready.back();
        ready.pop_back();
        order.push_back(x);
        for (int y : succ[x]) {
            if (--indegree[y] == 0) ready.push_back(y);
        }
    }
    if (static_cast<int>(order.size()) != n) {
        for (int x = 0; x < n; ++x) {
            if (indegree[x] > 0) throw InputError("order is cyclic through '" + names_[x] + "'");
        }
    }

    up_.assign(n, Bits(n));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        up_[*it].set(*it);
        for (int y : succ[*it]) up_[*it] |= up_[y];
    }
    down_.assign(n, Bits(n));
    for (int a = 0; a < n; ++a) {
        for (auto b = up_[a].find_first(); b != Bits::npos; b = up_[a].find_next(b)) down_[b].set(a);
    }

    lower_.assign(n, {});
    upper_.assign(n, {});
    for (int a = 0; a < n; ++a) {
        for (auto b = up_[a].find_first(); b != Bits::npos; b = up_[a].find_next(b)) {
            if (static_cast<int>(b) != a && (up_[a] & down_[b]).count() == 2) {
                upper_[a].push_back(static_cast<int>(b));
                lower_[b].push_back(a);
            }
        }
    }

    height_.assign(n, 0);
    for (int x : order) {
        for (int y : upper_[x]) height_[y] = std::max(height_[y], height_[x] + 1);
    }

    for (int x = 0; x < n; ++x) {
        if (static_cast<int>(up_[x].count()) == n) bottom_ = x;
    }

    join_.assign(static_cast<std::size_t>(n) * n, -1);
    meet_.assign(static_cast<std::size_t>(n) * n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            auto j = least_of(up_[a] & up_[b]);
            auto m = greatest_of(down_[a] & down_[b]);
            join_[a * n + b] = join_[b * n + a] = j.value_or(-1);
            meet_[a * n + b] = meet_[b * n + a] = m.value_or(-1);
        }
    }
}

std::optional<int> FiniteDomain::least_of(const Bits& candidates) const
{
    for (auto c = candidates.find_first(); c != Bits::npos; c = candidates.find_next(c)) {
        if (candidates.is_subset_of(up_[c])) return static_cast<int>(c);
    }
    return std::nullopt;
}

std::optional<int> FiniteDomain::greatest_of(const Bits& candidates) const
{
    for (auto c = candidates.find_first(); c != Bits::npos; c = candidates.find_next(c)) {
        if (candidates.is_subset_of(down_[c])) return static_cast<int>(c);
    }
    return std::nullopt;
}

std::optional<int> FiniteDomain::find(std::string_view name) const
{
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return static_cast<int>(i);
    }
    return std::nullopt;
}

int FiniteDomain::index_of(std::string_view name) const
{
    if (auto i = find(name)) return *i;
    throw InputError("unknown element '" + std::string(name) + "'");
}

bool FiniteDomain::covered_by(int a, int b) const
{
    return std::find(upper_[a].begin(), upper_[a].end(), b) != upper_[a].end();
}

std::vector<std::pair<int, int>> FiniteDomain::cover_pairs() const
{
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < static_cast<int>(size()); ++a) {
        for (int b : upper_[a]) out.emplace_back(a, b);
    }
    return out;
}

bool FiniteDomain::consistent(int a, int b) const { return (up_[a] & up_[b]).any(); }

bool FiniteDomain::consistent(const std::vector<int>& xs) const
{
    Bits ub(size());
    ub.set();
    for (int x : xs) ub &= up_[x];
    return ub.any();
}

std::optional<int> FiniteDomain::join(int a, int b) const
{
    int j = join_[static_cast<std::size_t>(a) * size() + b];
    return j < 0 ? std::nullopt : std::optional<int>(j);
}

std::optional<int> FiniteDomain::join(const std::vector<int>& xs) const
{
    Bits ub(size());
    ub.set();
    for (int x : xs) ub &= up_[x];
    return least_of(ub);
}

std::optional<int> FiniteDomain::meet(int a, int b) const
{
    int m = meet_[static_cast<std::size_t>(a) * size() + b];
    return m < 0 ? std::nullopt : std::optional<int>(m);
}

std::optional<int> FiniteDomain::meet(const std::vector<int>& xs) const
{
    if (xs.empty()) throw InputError("meet of the empty set is not defined here");
    Bits lb(size());
    lb.set();
    for (int x : xs) lb &= down_[x];
    return greatest_of(lb);
}

std::vector<int> FiniteDomain::maximal_elements() const
{
    std::vector<int> out;
    for (int x = 0; x < static_cast<int>(size()); ++x) {
        if (upper_[x].empty()) out.push_back(x);
    }
    return out;
}

DomainVerdict validate_domain(const FiniteDomain& d)
{
    const int n = static_cast<int>(d.size());
    if (!d.bottom()) return {false, "no least element", {}};
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (d.consistent(a, b) && !d.join(a, b)) {
                return {false, "consistent pair without least upper bound", {a, b}};
            }
        }
    }
    if (d.kind() == DomainKind::coherent) {
        // With binary joins in place, coherence reduces to: pairwise consistent
        // triples are consistent (the join of two then stays consistent with the third).
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (!d.consistent(a, b)) continue;
                for (int c = b + 1; c < n; ++c) {
                    if (d.consistent(a, c) && d.consistent(b, c) && !d.consistent({a, b, c})) {
                        return {false, "pairwise consistent set without least upper bound", {a, b, c}};
                    }
                }
            }
        }
    }
    return {};
}

bool is_irreducible(const FiniteDomain& d, int x)
{
    return d.lower_covers(x).size() == 1;
}

std::vector<int> irreducible_elements(const FiniteDomain& d)
{
    std::vector<int> out;
    for (int x = 0; x < static_cast<int>(d.size()); ++x) {
        if (is_irreducible(d, x)) out.push_back(x);
    }
    return out;
}

int predecessor(const FiniteDomain& d, int i)
{
    if (!is_irreducible(d, i)) throw InputError("'" + d.name(i) + "' is not irreducible");
    return d.lower_covers(i).front();
}

std::vector<IrreducibleInfo> irreducibles(const FiniteDomain& d)
{
    const auto classes = interchange_classes(d);
    std::vector<IrreducibleInfo> out;
    for (int i : irreducible_elements(d)) {
        IrreducibleInfo info{i, predecessor(d, i), 0};
        for (std::size_t c = 0; c < classes.size(); ++c) {
            if (std::find(classes[c].begin(), classes[c].end(), i) != classes[c].end()) {
                info.class_id = static_cast<int>(c);
            }
        }
        out.push_back(info);
    }
    return out;
}

std::vector<int> primes(const FiniteDomain& d)
{
    const int n = static_cast<int>(d.size());
    std::vector<int> out;
    for (int p = 0; p < n; ++p) {
        if (d.bottom() == p) continue;
        bool prime = true;
        for (int a = 0; a < n && prime; ++a) {
            for (int b = a + 1; b < n; ++b) {
                auto j = d.join(a, b);
                if (j && d.leq(p, *j) && !d.leq(p, a) && !d.leq(p, b)) {
                    prime = false;
                    break;
                }
            }
        }
        if (prime) out.push_back(p);
    }
    return out;
}

bool interchangeable(const FiniteDomain& d, int i, int j)
{
    const int pi = predecessor(d, i);
    const int pj = predecessor(d, j);
    if (!d.consistent(i, j)) return false;
    auto left = d.join(i, pj);
    auto right = d.join(pi, j);
    auto base = d.join(pi, pj);
    return left && right && base && *left == *right && *left != *base;
}

std::vector<std::vector<int>> interchange_classes(const FiniteDomain& d)
{
    const auto irr = irreducible_elements(d);
    std::vector<std::size_t> parent(irr.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t a = 0; a < irr.size(); ++a) {
        for (std::size_t b = a + 1; b < irr.size(); ++b) {
            if (interchangeable(d, irr[a], irr[b])) parent[root(a)] = root(b);
        }
    }
    std::vector<std::vector<int>> classes;
    std::vector<int> slot(irr.size(), -1);
    for (std::size_t a = 0; a < irr.size(); ++a) {
        auto r = root(a);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(classes.size());
            classes.emplace_back();
        }
        classes[slot[r]].push_back(irr[a]);
    }
    auto by_name = [&d](int x, int y) { return d.name(x) < d.name(y); };
    for (auto& c : classes) std::sort(c.begin(), c.end(), by_name);
    std::sort(classes.begin(), classes.end(),
              [&](const auto& x, const auto& y) { return by_name(x.front(), y.front()); });
    return classes;
}

std::vector<int> weak_primes(const FiniteDomain& d)
{
    const int n = static_cast<int>(d.size());
    const auto irr = irreducible_elements(d);
    std::vector<int> out;
    for (int i : irr) {
        // Elements above some irreducible interchangeable with i.
        Bits covered(n);
        for (int j : irr) {
            if (interchangeable(d, i, j)) covered |= d.up_set(j);
        }
        // Close the remaining elements under joins of consistent pairs: these are
        // exactly the joins of consistent subsets avoiding `covered`.
        Bits reach = ~covered;
        std::vector<int> work;
        for (auto x = reach.find_first(); x != Bits::npos; x = reach.find_next(x)) work.push_back(static_cast<int>(x));
        bool weak_prime = true;
        while (!work.empty() && weak_prime) {
            int x = work.back();
            work.pop_back();
            if (d.leq(i, x)) {
                weak_prime = false;
                break;
            }
            for (auto y = reach.find_first(); y != Bits::npos; y = reach.find_next(y)) {
                auto j = d.join(x, static_cast<int>(y));
                if (j && !reach.test(*j)) {
                    reach.set(*j);
                    work.push_back(*j);
                }
            }
        }
        if (weak_prime) out.push_back(i);
    }
    return out;
}

Algebraicity algebraicity(const FiniteDomain& d)
{
    Algebraicity out;
    out.irreducible_algebraic = true;
    for (int x = 0; x < static_cast<int>(d.size()); ++x) {
        if (d.join(decompose(d, x)) != x) out.irreducible_algebraic = false;
    }
    const auto irr = irreducible_elements(d);
    out.prime_algebraic = primes(d) == irr;
    out.weak_prime_algebraic = weak_primes(d) == irr;
    return out;
}

std::vector<int> decompose(const FiniteDomain& d, int x)
{
    std::vector<int> out;
    for (int i : irreducible_elements(d)) {
        if (d.leq(i, x)) out.push_back(i);
    }
    return out;
}

std::vector<int> diff(const FiniteDomain& d, int upper, int lower)
{
    if (!d.leq(lower, upper)) {
        throw InputError("'" + d.name(lower) + "' is not below '" + d.name(upper) + "'");
    }
    std::vector<int> out;
    for (int i : decompose(d, upper)) {
        if (!d.leq(i, lower)) out.push_back(i);
    }
    return out;
}

DomainMorphismVerdict validate_domain_morphism(const PosetMap& f, const FiniteDomain& src,
                                               const FiniteDomain& dst, bool strict)
{
    const int n = static_cast<int>(src.size());
    if (static_cast<int>(f.size()) != n) throw InputError("element map must be total on the source");
    for (int y : f) {
        if (y < 0 || y >= static_cast<int>(dst.size())) throw InputError("element map targets an unknown element");
    }

    for (auto [a, b] : src.cover_pairs()) {
        bool kept = dst.covered_by(f[a], f[b]);
        if (!kept && (strict || f[a] != f[b])) return {false, "cover preservation", {a, b}};
    }

    if (src.bottom() && dst.bottom() && f[*src.bottom()] != *dst.bottom()) {
        return {false, "join preservation", {*src.bottom()}};
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            auto j = src.join(a, b);
            if (!j) continue;
            if (dst.join(f[a], f[b]) != f[*j]) return {false, "join preservation", {a, b}};
        }
    }

    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b || !src.consistent(a, b)) continue;
            auto m = src.meet(a, b);
            if (!m || !(src.covered_by(*m, a) || *m == a)) continue;
            if (dst.meet(f[a], f[b]) != f[*m]) return {false, "meet preservation at a cover", {a, b}};
        }
    }

    if (algebraicity(src).prime_algebraic && algebraicity(dst).prime_algebraic) {
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (!src.consistent(a, b)) continue;
                auto m = src.meet(a, b);
                std::optional<int> image = m ? std::optional<int>(f[*m]) : std::nullopt;
                if (dst.meet(f[a], f[b]) != image) {
                    return {false, "meet preservation (prime domains)", {a, b}};
                }
            }
        }
    }
    return {};
}

}  // namespace weavent
