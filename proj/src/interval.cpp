#include "weavent/interval.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "weavent/error.hpp"

namespace weavent {

namespace {

std::string show(const FiniteDomain& d, std::pair<int, int> iv)
{
    return "[" + d.name(iv.first) + "," + d.name(iv.second) + "]";
}

int find_root(std::vector<int>& parent, int x)
{
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

}  // namespace

bool interval_leq(const FiniteDomain& d, std::pair<int, int> a, std::pair<int, int> b)
{
    auto m = d.meet(a.second, b.first);
    auto j = d.join(a.second, b.first);
    return m && j && *m == a.first && *j == b.second;
}

IntervalPartition interval_classes(const FiniteDomain& d)
{
    IntervalPartition out;
    out.intervals = d.cover_pairs();
    const int n = static_cast<int>(out.intervals.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a != b && interval_leq(d, out.intervals[a], out.intervals[b])) {
                parent[find_root(parent, a)] = find_root(parent, b);
            }
        }
    }
    std::map<int, int> slot;
    out.class_of.resize(n);
    for (int a = 0; a < n; ++a) {
        auto [it, fresh] = slot.emplace(find_root(parent, a), static_cast<int>(out.classes.size()));
        if (fresh) out.classes.emplace_back();
        out.classes[it->second].push_back(a);
        out.class_of[a] = it->second;
    }
    return out;
}

AxiomReport check_axioms(const FiniteDomain& d)
{
    AxiomReport r;
    const int n = static_cast<int>(d.size());

    for (int x = 0; x < n && r.cover_join; ++x) {
        const auto& up = d.upper_covers(x);
        for (std::size_t a = 0; a < up.size() && r.cover_join; ++a) {
            for (std::size_t b = a + 1; b < up.size(); ++b) {
                if (!d.consistent(up[a], up[b])) continue;
                auto j = d.join(up[a], up[b]);
                if (!j || !d.covered_by(up[a], *j) || !d.covered_by(up[b], *j)) {
                    r.cover_join = false;
                    r.diagnostics.push_back("C fails at " + d.name(x) + " with covers " + d.name(up[a]) + ", " +
                                            d.name(up[b]));
                    break;
                }
            }
        }
    }

    const auto parts = interval_classes(d);
    const auto& iv = parts.intervals;
    const int m = static_cast<int>(iv.size());
    for (int a = 0; a < m && r.rigid; ++a) {
        for (int b = a + 1; b < m; ++b) {
            if (iv[a].first == iv[b].first && parts.class_of[a] == parts.class_of[b]) {
                r.rigid = false;
                r.diagnostics.push_back("R fails: " + show(d, iv[a]) + " ~ " + show(d, iv[b]));
                break;
            }
        }
    }

    // V: equivalent pairs of intervals with shared lower ends transfer consistency.
    for (int a = 0; a < m && r.consistency; ++a) {
        for (int b = 0; b < m && r.consistency; ++b) {
            if (iv[a].first != iv[b].first || !d.consistent(iv[a].second, iv[b].second)) continue;
            for (int c = 0; c < m && r.consistency; ++c) {
                if (parts.class_of[c] != parts.class_of[a]) continue;
                for (int e = 0; e < m; ++e) {
                    if (parts.class_of[e] != parts.class_of[b] || iv[e].first != iv[c].first) continue;
                    if (!d.consistent(iv[c].second, iv[e].second)) {
                        r.consistency = false;
                        r.diagnostics.push_back("V fails: " + show(d, iv[a]) + "," + show(d, iv[b]) + " vs " +
                                                show(d, iv[c]) + "," + show(d, iv[e]));
                        break;
                    }
                }
            }
        }
    }

    for (int a = 0; a < m && r.intervals_ordered; ++a) {
        for (int b = 0; b < m; ++b) {
            if (parts.class_of[a] != parts.class_of[b]) continue;
            if (d.leq(iv[a].first, iv[b].first) && !d.leq(iv[a].second, iv[b].second)) {
                r.intervals_ordered = false;
                r.diagnostics.push_back("I fails: " + show(d, iv[a]) + " ~ " + show(d, iv[b]));
                break;
            }
        }
    }
    return r;
}

EventStructure ev_wd(const FiniteDomain& d)
{
    const auto axioms = check_axioms(d);
    if (!axioms.cover_join) throw InputError("axiom C fails: " + axioms.diagnostics.front());
    if (!axioms.rigid) throw InputError("axiom R fails");
    if (!axioms.consistency) throw InputError("axiom V fails");

    const auto parts = interval_classes(d);
    const int k = static_cast<int>(parts.classes.size());
    if (k > static_cast<int>(kMaxEvents)) throw InputError("too many interval classes for one structure");
    const int n = static_cast<int>(d.size());

    // Events that have happened by element x: classes with an upper end below x.
    std::vector<EventSet> happened(n, 0);
    for (int x = 0; x < n; ++x) {
        for (std::size_t a = 0; a < parts.intervals.size(); ++a) {
            if (d.leq(parts.intervals[a].second, x)) happened[x] |= bit(parts.class_of[a]);
        }
    }

    std::vector<std::string> names;
    std::vector<EnablingGen> gens;
    for (int c = 0; c < k; ++c) {
        names.push_back("interval" + std::to_string(c) + ":" + show(d, parts.intervals[parts.classes[c].front()]));
        for (int a : parts.classes[c]) gens.push_back({happened[parts.intervals[a].first], c});
    }

    if (d.kind() == DomainKind::bounded_complete) {
        std::vector<EventSet> maximal;
        for (int x : d.maximal_elements()) maximal.push_back(happened[x]);
        return EventStructure::with_consistency(std::move(names), std::move(maximal), std::move(gens));
    }
    std::vector<std::pair<int, int>> conflict;
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            bool clash = true;
            for (int x : parts.classes[a]) {
                for (int y : parts.classes[b]) {
                    if (d.consistent(parts.intervals[x].second, parts.intervals[y].second)) clash = false;
                }
            }
            if (clash) conflict.emplace_back(a, b);
        }
    }
    return EventStructure::with_conflict(std::move(names), conflict, std::move(gens));
}

IntervalIrreducibleMap zeta(const FiniteDomain& d)
{
    if (!validate_domain(d).ok || !algebraicity(d).weak_prime_algebraic) {
        throw InputError("interval correspondence needs a weak prime domain");
    }
    const auto parts = interval_classes(d);
    const auto irr_classes = interchange_classes(d);
    std::vector<int> irr_class(d.size(), -1);
    for (std::size_t c = 0; c < irr_classes.size(); ++c) {
        for (int i : irr_classes[c]) irr_class[i] = static_cast<int>(c);
    }

    IntervalIrreducibleMap out;
    out.well_defined = true;
    out.to_irreducible_class.assign(parts.classes.size(), -1);
    for (std::size_t c = 0; c < parts.classes.size(); ++c) {
        for (int a : parts.classes[c]) {
            const auto gained = diff(d, parts.intervals[a].second, parts.intervals[a].first);
            for (int i : gained) {
                // Only minimal gained irreducibles name the step; others may sit above them.
                bool minimal = std::none_of(gained.begin(), gained.end(), [&](int j) { return j != i && d.leq(j, i); });
                if (!minimal) continue;
                int& slot = out.to_irreducible_class[c];
                if (slot == -1) slot = irr_class[i];
                if (slot != irr_class[i]) out.well_defined = false;
            }
        }
        if (out.to_irreducible_class[c] == -1) out.well_defined = false;
    }

    out.to_interval_class.assign(irr_classes.size(), -1);
    for (std::size_t c = 0; c < irr_classes.size(); ++c) {
        const int i = irr_classes[c].front();
        const std::pair<int, int> iv{predecessor(d, i), i};
        auto it = std::find(parts.intervals.begin(), parts.intervals.end(), iv);
        out.to_interval_class[c] = parts.class_of[static_cast<std::size_t>(it - parts.intervals.begin())];
    }

    out.mutually_inverse = out.well_defined && out.to_interval_class.size() == out.to_irreducible_class.size();
    for (std::size_t c = 0; out.mutually_inverse && c < out.to_irreducible_class.size(); ++c) {
        if (out.to_interval_class[out.to_irreducible_class[c]] != static_cast<int>(c)) out.mutually_inverse = false;
    }
    for (std::size_t c = 0; out.mutually_inverse && c < out.to_interval_class.size(); ++c) {
        if (out.to_irreducible_class[out.to_interval_class[c]] != static_cast<int>(c)) out.mutually_inverse = false;
    }
    return out;
}

}  // namespace weavent
