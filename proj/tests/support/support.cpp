#include "support.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "weavent/io.hpp"

namespace weavent::testing {

std::string fixture_path(const std::string& name) { return std::string(WEAVENT_FIXTURE_DIR) + "/" + name; }

EventStructure fixture_es(const std::string& name) { return es_from_json(load_json(fixture_path(name + ".es.json"))); }

FiniteDomain fixture_domain(const std::string& name)
{
    return domain_from_json(load_json(fixture_path(name + ".domain.json")));
}

FiniteDomain fixture_bdomain(const std::string& name)
{
    return domain_from_json(load_json(fixture_path(name + ".bdomain.json")));
}

Grammar running_grammar() { return grammar_from_json(load_json(fixture_path("running.grammar.json"))); }

FiniteDomain chain(int length)
{
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> covers;
    for (int k = 0; k <= length; ++k) {
        names.push_back("x" + std::to_string(k));
        if (k > 0) covers.emplace_back(k - 1, k);
    }
    return FiniteDomain(names, covers);
}

namespace {

EventStructure restrict_to(const EventStructure& es, EventSet keep)
{
    std::vector<int> index(es.size(), -1);
    std::vector<std::string> names;
    for (int e : members(keep)) {
        index[e] = static_cast<int>(names.size());
        names.push_back(es.name(e));
    }
    auto remap = [&](EventSet s) {
        EventSet out = 0;
        for (int e : members(s)) out |= bit(index[e]);
        return out;
    };
    std::vector<EnablingGen> gens;
    for (const auto& g : es.generators()) {
        if (contains(keep, g.event) && subset(g.needs, keep)) gens.push_back({remap(g.needs), index[g.event]});
    }
    std::vector<std::pair<int, int>> conflict;
    for (const auto& [a, b] : es.conflict_pairs()) {
        if (contains(keep, a) && contains(keep, b)) conflict.emplace_back(index[a], index[b]);
    }
    return EventStructure::with_conflict(names, conflict, gens);
}

// Least upper bound by exhaustive search, without the tabulated joins.
std::optional<int> lub(const FiniteDomain& d, const std::vector<int>& xs)
{
    const int n = static_cast<int>(d.size());
    std::vector<int> bounds;
    for (int u = 0; u < n; ++u) {
        if (std::all_of(xs.begin(), xs.end(), [&](int x) { return d.leq(x, u); })) bounds.push_back(u);
    }
    for (int u : bounds) {
        if (std::all_of(bounds.begin(), bounds.end(), [&](int v) { return d.leq(u, v); })) return u;
    }
    return std::nullopt;
}

bool has_upper_bound(const FiniteDomain& d, const std::vector<int>& xs)
{
    const int n = static_cast<int>(d.size());
    for (int u = 0; u < n; ++u) {
        if (std::all_of(xs.begin(), xs.end(), [&](int x) { return d.leq(x, u); })) return true;
    }
    return false;
}

int predecessor_by_search(const FiniteDomain& d, int i)
{
    std::vector<int> below;
    for (int x = 0; x < static_cast<int>(d.size()); ++x) {
        if (x != i && d.leq(x, i)) below.push_back(x);
    }
    for (int x : below) {
        if (std::all_of(below.begin(), below.end(), [&](int y) { return d.leq(y, x); })) return x;
    }
    return -1;
}

std::vector<int> pick(const std::vector<int>& items, unsigned mask)
{
    std::vector<int> out;
    for (std::size_t k = 0; k < items.size(); ++k) {
        if ((mask >> k) & 1U) out.push_back(items[k]);
    }
    return out;
}

bool downward_closed_in(const FiniteDomain& d, const std::vector<int>& xs, const std::vector<int>& universe)
{
    for (int x : xs) {
        for (int y : universe) {
            if (d.leq(y, x) && std::find(xs.begin(), xs.end(), y) == xs.end()) return false;
        }
    }
    return true;
}

}  // namespace

EventStructure random_live_es(std::mt19937& rng, int max_events, double conflict_probability)
{
    std::uniform_int_distribution<int> size(1, max_events);
    std::bernoulli_distribution coin(conflict_probability);
    std::bernoulli_distribution needs(0.3);
    std::uniform_int_distribution<int> gen_count(1, 2);

    const int n = size(rng);
    std::vector<std::string> names;
    for (int e = 0; e < n; ++e) names.push_back(std::string(1, static_cast<char>('a' + e)));
    std::vector<std::pair<int, int>> conflict;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (coin(rng)) conflict.emplace_back(a, b);
        }
    }
    std::vector<EnablingGen> gens;
    for (int e = 0; e < n; ++e) {
        const int k = gen_count(rng);
        for (int g = 0; g < k; ++g) {
            EventSet s = 0;
            for (int f = 0; f < n; ++f) {
                if (f != e && needs(rng)) s |= bit(f);
            }
            gens.push_back({s, e});
        }
    }
    EventStructure es = EventStructure::with_conflict(names, conflict, gens);
    for (;;) {
        EventSet occurring = 0;
        for (EventSet c : configurations(es)) occurring |= c;
        if (occurring == es.all()) break;
        es = restrict_to(es, occurring);
    }
    es = saturate(es);

    // Rebuild enabling from configuration steps so that every generator can fire.
    const auto confs = configurations(es);
    const std::set<EventSet> is_conf(confs.begin(), confs.end());
    std::vector<EnablingGen> usable;
    for (EventSet c : confs) {
        for (int e = 0; e < static_cast<int>(es.size()); ++e) {
            if (!contains(c, e) && is_conf.count(c | bit(e))) usable.push_back({c, e});
        }
    }
    return EventStructure::with_conflict(es.names(), es.conflict_pairs(), usable);
}

std::vector<int> irreducible_list(const FiniteDomain& d)
{
    std::vector<int> out;
    for (int x = 0; x < static_cast<int>(d.size()); ++x) {
        std::vector<int> below;
        for (int y = 0; y < static_cast<int>(d.size()); ++y) {
            if (y != x && d.leq(y, x)) below.push_back(y);
        }
        if (below.empty()) continue;  // the least element is the empty join
        if (lub(d, below) != x) out.push_back(x);
    }
    return out;
}

bool interchangeable_by_definition(const FiniteDomain& d, int i, int j)
{
    const auto ir = irreducible_list(d);
    bool effective = false;
    for (unsigned mask = 0; mask < (1U << ir.size()); ++mask) {
        auto with_i = pick(ir, mask);
        auto with_j = with_i;
        const auto base = with_i;
        if (std::find(with_i.begin(), with_i.end(), i) == with_i.end()) with_i.push_back(i);
        if (std::find(with_j.begin(), with_j.end(), j) == with_j.end()) with_j.push_back(j);
        if (!downward_closed_in(d, with_i, ir) || !downward_closed_in(d, with_j, ir)) continue;
        if (!has_upper_bound(d, with_i) || !has_upper_bound(d, with_j)) continue;
        const auto top_i = lub(d, with_i);
        if (top_i != lub(d, with_j)) return false;
        if (lub(d, base) != top_i) effective = true;
    }
    return effective;
}

bool interchangeable_by_upper_bounds(const FiniteDomain& d, int i, int j)
{
    if (!has_upper_bound(d, {i, j})) return false;
    const int pi = predecessor_by_search(d, i);
    const int pj = predecessor_by_search(d, j);
    bool effective = false;
    for (int x = 0; x < static_cast<int>(d.size()); ++x) {
        if (!d.leq(pi, x) || !d.leq(pj, x)) continue;
        const auto xi = has_upper_bound(d, {x, i}) ? lub(d, {x, i}) : std::nullopt;
        const auto xj = has_upper_bound(d, {x, j}) ? lub(d, {x, j}) : std::nullopt;
        if (xi != xj) return false;
        if (xi && *xi != x) effective = true;
    }
    return effective;
}

std::vector<int> weak_primes_by_definition(const FiniteDomain& d)
{
    const auto ir = irreducible_list(d);
    const int n = static_cast<int>(d.size());
    std::vector<int> out;
    for (int i : ir) {
        std::vector<int> partners;
        for (int j : ir) {
            if (interchangeable_by_definition(d, i, j)) partners.push_back(j);
        }
        bool weak_prime = true;
        for (unsigned mask = 0; weak_prime && mask < (1U << n); ++mask) {
            std::vector<int> all(n);
            for (int x = 0; x < n; ++x) all[x] = x;
            const auto xs = pick(all, mask);
            if (!has_upper_bound(d, xs)) continue;
            const auto top = lub(d, xs);
            if (!top || !d.leq(i, *top)) continue;
            bool covered = false;
            for (int j : partners) {
                for (int x : xs) covered = covered || d.leq(j, x);
            }
            weak_prime = covered;
        }
        if (weak_prime) out.push_back(i);
    }
    return out;
}

std::vector<EventSet> configurations_by_subsets(const EventStructure& es)
{
    const int n = static_cast<int>(es.size());
    std::vector<bool> is_conf(std::size_t{1} << n, false);
    std::vector<EventSet> out;
    for (EventSet x = 0; x < (EventSet{1} << n); ++x) {
        if (!es.consistent(x)) continue;
        bool ok = x == 0;
        for (int e : members(x)) {
            const EventSet rest = x & ~bit(e);
            if (is_conf[rest] && es.enables(rest, e)) ok = true;
        }
        if (ok) {
            is_conf[x] = true;
            out.push_back(x);
        }
    }
    return out;
}

}  // namespace weavent::testing
