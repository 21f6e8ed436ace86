#include "weavent/duality.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

#include "weavent/error.hpp"

namespace weavent {

namespace {

void require_weak_prime(const FiniteDomain& d)
{
    auto v = validate_domain(d);
    if (!v.ok) throw InputError("not a domain: " + v.reason);
    const auto weak = weak_primes(d);
    for (int i : irreducible_elements(d)) {
        if (!std::binary_search(weak.begin(), weak.end(), i)) {
            throw InputError("irreducible '" + d.name(i) + "' is not a weak prime");
        }
    }
}

EventSet image_of(const std::vector<int>& f, EventSet s)
{
    EventSet out = 0;
    for (int e : members(s)) {
        if (f[e] >= 0) out |= bit(f[e]);
    }
    return out;
}

std::vector<EventSet> all_causes(const EventStructure& es)
{
    const auto confs = configurations(es);
    std::vector<EventSet> out(es.size(), 0);
    for (int e = 0; e < static_cast<int>(es.size()); ++e) {
        std::vector<EventSet> mins;
        for (EventSet c : confs) {
            if (!es.enables(c, e)) continue;
            if (std::none_of(mins.begin(), mins.end(), [c](EventSet m) { return subset(m, c); })) {
                mins.push_back(c);
            }
        }
        // configurations come ordered by size, so the first enabling one is
        // minimal; a second incomparable one breaks primality.
        if (mins.size() != 1) throw InputError("event '" + es.name(e) + "' has no unique cause set");
        out[e] = mins.front();
    }
    return out;
}

bool saturated_with(const std::vector<int>& cls, const std::vector<EventSet>& cause, EventSet x)
{
    const int n = static_cast<int>(cls.size());
    for (int e : members(x)) {
        for (int o = 0; o < n; ++o) {
            if (cls[o] == cls[e] && !contains(x, o) && subset(cause[o], x)) return false;
        }
    }
    return true;
}

std::vector<int> compact_classes(const std::vector<int>& raw)
{
    std::map<int, int> slot;
    std::vector<int> out;
    for (int c : raw) {
        auto [it, fresh] = slot.emplace(c, static_cast<int>(slot.size()));
        out.push_back(it->second);
    }
    return out;
}

// Backtracking search for a structure-preserving bijection between two event
// structures, optionally also matching two event equivalences.
class EsIsoSearch {
public:
    EsIsoSearch(const EventStructure& a, const EventStructure& b, const std::vector<int>* ca,
                const std::vector<int>* cb)
        : a_(a), b_(b), ca_(ca), cb_(cb)
    {
        const auto confs_a = configurations(a);
        const auto confs_b = configurations(b);
        for (int e = 0; e < static_cast<int>(a.size()); ++e) mins_a_.push_back(enablings(a, confs_a, e));
        for (int e = 0; e < static_cast<int>(b.size()); ++e) mins_b_.push_back(enablings(b, confs_b, e));
        maxcon_b_ = maximal_consistent_sets(b);
        maxcon_a_ = maximal_consistent_sets(a);
    }

    std::optional<std::vector<int>> run()
    {
        if (a_.size() != b_.size()) return std::nullopt;
        if (maxcon_a_.size() != maxcon_b_.size()) return std::nullopt;
        f_.assign(a_.size(), -1);
        used_.assign(b_.size(), false);
        if (extend(0)) return f_;
        return std::nullopt;
    }

private:
    static std::vector<EventSet> enablings(const EventStructure& es, const std::vector<EventSet>& confs, int e)
    {
        std::vector<EventSet> en;
        for (EventSet c : confs) {
            if (es.enables(c, e)) en.push_back(c);
        }
        std::vector<EventSet> out;
        for (EventSet c : en) {
            if (std::none_of(en.begin(), en.end(), [c](EventSet o) { return o != c && subset(o, c); })) {
                out.push_back(c);
            }
        }
        return out;
    }

    static int conflict_degree(const EventStructure& es, int e)
    {
        int k = 0;
        for (int o = 0; o < static_cast<int>(es.size()); ++o) k += (o != e && es.in_conflict(e, o));
        return k;
    }

    bool compatible(int x, int y) const
    {
        if (mins_a_[x].size() != mins_b_[y].size()) return false;
        if (conflict_degree(a_, x) != conflict_degree(b_, y)) return false;
        for (int z = 0; z < x; ++z) {
            if (a_.in_conflict(x, z) != b_.in_conflict(y, f_[z])) return false;
            if (ca_ && ((*ca_)[x] == (*ca_)[z]) != ((*cb_)[y] == (*cb_)[f_[z]])) return false;
        }
        return true;
    }

    bool complete() const
    {
        std::vector<EventSet> imaged;
        for (EventSet m : maxcon_a_) imaged.push_back(image_of(f_, m));
        std::sort(imaged.begin(), imaged.end());
        if (imaged != maxcon_b_) return false;
        for (int e = 0; e < static_cast<int>(a_.size()); ++e) {
            std::vector<EventSet> mapped;
            for (EventSet c : mins_a_[e]) mapped.push_back(image_of(f_, c));
            std::sort(mapped.begin(), mapped.end());
            auto target = mins_b_[f_[e]];
            std::sort(target.begin(), target.end());
            if (mapped != target) return false;
        }
        return true;
    }

    bool extend(int x)
    {
        if (x == static_cast<int>(a_.size())) return complete();
        for (int y = 0; y < static_cast<int>(b_.size()); ++y) {
            if (used_[y]) continue;
            f_[x] = y;
            if (!compatible(x, y)) continue;
            used_[y] = true;
            if (extend(x + 1)) return true;
            used_[y] = false;
        }
        f_[x] = -1;
        return false;
    }

    const EventStructure& a_;
    const EventStructure& b_;
    const std::vector<int>* ca_;
    const std::vector<int>* cb_;
    std::vector<std::vector<EventSet>> mins_a_, mins_b_;
    std::vector<EventSet> maxcon_a_, maxcon_b_;
    std::vector<int> f_;
    std::vector<bool> used_;
};

struct UnfoldedEvent {
    EventSet history;
    int event;
};

std::vector<UnfoldedEvent> unfolded_events(const EventStructure& es)
{
    std::vector<UnfoldedEvent> out;
    for (int e = 0; e < static_cast<int>(es.size()); ++e) {
        for (EventSet c : minimal_enablings(es, e)) {
            if (es.consistent(c | bit(e))) out.push_back({c, e});
        }
    }
    if (out.size() > kMaxEvents) throw InputError("unfolding exceeds the supported number of events");
    return out;
}

}  // namespace

FiniteDomain dom_of_es(const EventStructure& es)
{
    const auto cls = classify(es);
    if (!cls.live) throw InputError("structure is not live: " + cls.diagnostics.front());
    const auto confs = configurations(es);
    std::map<EventSet, int> index;
    std::vector<std::string> names;
    for (EventSet c : confs) {
        index.emplace(c, static_cast<int>(names.size()));
        names.push_back(es.format(c));
    }
    std::vector<std::pair<int, int>> covers;
    for (EventSet c : confs) {
        for (int e = 0; e < static_cast<int>(es.size()); ++e) {
            if (contains(c, e)) continue;
            auto it = index.find(c | bit(e));
            if (it != index.end()) covers.emplace_back(index.at(c), it->second);
        }
    }
    const auto kind = es.kind() == ConflictKind::binary ? DomainKind::coherent : DomainKind::bounded_complete;
    return FiniteDomain(std::move(names), covers, kind);
}

EventStructure ev_of_domain(const FiniteDomain& d)
{
    require_weak_prime(d);
    const auto classes = interchange_classes(d);
    if (classes.size() > kMaxEvents) throw InputError("too many interchange classes for one structure");

    std::vector<int> class_of(d.size(), -1);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        for (int i : classes[k]) class_of[i] = static_cast<int>(k);
        names.push_back("class" + std::to_string(k) + ":" + d.name(classes[k].front()));
    }
    auto classes_below = [&](int x, int skip) {
        EventSet m = 0;
        for (int i : decompose(d, x)) {
            if (i != skip) m |= bit(class_of[i]);
        }
        return m;
    };

    std::vector<EnablingGen> gens;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        for (int i : classes[k]) gens.push_back({classes_below(i, i), static_cast<int>(k)});
    }

    const int n = static_cast<int>(d.size());
    if (d.kind() == DomainKind::bounded_complete) {
        std::vector<EventSet> maximal;
        for (int m : d.maximal_elements()) maximal.push_back(classes_below(m, -1));
        return EventStructure::with_consistency(std::move(names), std::move(maximal), std::move(gens));
    }
    std::vector<EventSet> together(n);
    for (int x = 0; x < n; ++x) together[x] = classes_below(x, -1);
    std::vector<std::pair<int, int>> conflict;
    for (int a = 0; a < static_cast<int>(classes.size()); ++a) {
        for (int b = a + 1; b < static_cast<int>(classes.size()); ++b) {
            const EventSet pair = bit(a) | bit(b);
            if (std::none_of(together.begin(), together.end(), [pair](EventSet s) { return subset(pair, s); })) {
                conflict.emplace_back(a, b);
            }
        }
    }
    return EventStructure::with_conflict(std::move(names), conflict, std::move(gens));
}

EventStructure connect_es(const EventStructure& es) { return ev_of_domain(dom_of_es(es)); }

std::optional<std::vector<int>> es_isomorphic(const EventStructure& a, const EventStructure& b)
{
    return EsIsoSearch(a, b, nullptr, nullptr).run();
}

std::optional<std::vector<int>> poset_isomorphic(const FiniteDomain& a, const FiniteDomain& b)
{
    const int n = static_cast<int>(a.size());
    if (b.size() != a.size()) return std::nullopt;
    auto signature = [](const FiniteDomain& d, int x) {
        return std::array<std::size_t, 5>{static_cast<std::size_t>(d.height(x)), d.lower_covers(x).size(),
                                          d.upper_covers(x).size(), d.up_set(x).count(),
                                          d.down_set(x).count()};
    };
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a.height(x) < a.height(y); });

    std::vector<int> f(n, -1);
    std::vector<bool> used(n, false);
    auto fits = [&](std::size_t pos, int y) {
        const int x = order[pos];
        if (signature(a, x) != signature(b, y)) return false;
        for (std::size_t k = 0; k < pos; ++k) {
            const int z = order[k];
            if (a.leq(x, z) != b.leq(y, f[z]) || a.leq(z, x) != b.leq(f[z], y)) return false;
        }
        return true;
    };
    auto extend = [&](auto&& self, std::size_t pos) -> bool {
        if (pos == order.size()) return true;
        for (int y = 0; y < n; ++y) {
            if (used[y] || !fits(pos, y)) continue;
            f[order[pos]] = y;
            used[y] = true;
            if (self(self, pos + 1)) return true;
            used[y] = false;
        }
        return false;
    };
    if (extend(extend, 0)) return f;
    return std::nullopt;
}

EventSet causes(const EventStructure& prime, int e)
{
    auto mins = minimal_enablings(prime, e);
    if (mins.size() != 1) throw InputError("event '" + prime.name(e) + "' has no unique cause set");
    return mins.front();
}

void check_epes(const Epes& p)
{
    const int n = static_cast<int>(p.base.size());
    if (static_cast<int>(p.cls.size()) != n) throw InputError("equivalence must assign a class to every event");
    if (!classify(p.base).prime) throw InputError("base structure is not prime");
    const auto cause = all_causes(p.base);
    for (int e = 0; e < n; ++e) {
        if (!saturated_with(p.cls, cause, cause[e] | bit(e))) {
            throw InputError("causes of '" + p.base.name(e) + "' together with it are not saturated");
        }
        for (int c : members(cause[e])) {
            if (p.cls[c] == p.cls[e]) {
                throw InputError("causally ordered events '" + p.base.name(c) + "' and '" + p.base.name(e) +
                                 "' are equivalent");
            }
        }
    }
}

bool is_saturated(const Epes& p, EventSet x) { return saturated_with(p.cls, all_causes(p.base), x); }

bool epes_connected(const Epes& p)
{
    const int n = static_cast<int>(p.base.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (p.cls[a] == p.cls[b] && !p.base.in_conflict(a, b)) parent[root(a)] = root(b);
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (p.cls[a] == p.cls[b] && root(a) != root(b)) return false;
        }
    }
    return true;
}

std::optional<std::vector<int>> epes_isomorphic(const Epes& a, const Epes& b)
{
    return EsIsoSearch(a.base, b.base, &a.cls, &b.cls).run();
}

FiniteDomain epes_dom(const Epes& p)
{
    check_epes(p);
    const auto cause = all_causes(p.base);
    std::vector<EventSet> confs;
    for (EventSet c : configurations(p.base)) {
        if (saturated_with(p.cls, cause, c)) confs.push_back(c);
    }
    std::vector<std::string> names;
    for (EventSet c : confs) names.push_back(p.base.format(c));
    std::vector<std::pair<int, int>> below;
    for (std::size_t x = 0; x < confs.size(); ++x) {
        for (std::size_t y = 0; y < confs.size(); ++y) {
            if (x != y && subset(confs[x], confs[y])) below.emplace_back(static_cast<int>(x), static_cast<int>(y));
        }
    }
    return FiniteDomain(std::move(names), below, DomainKind::coherent);
}

Epes epes_ev(const FiniteDomain& d)
{
    require_weak_prime(d);
    const auto irr = irreducible_elements(d);
    if (irr.size() > kMaxEvents) throw InputError("too many irreducibles for one structure");
    std::vector<int> slot(d.size(), -1);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < irr.size(); ++k) {
        slot[irr[k]] = static_cast<int>(k);
        names.push_back(d.name(irr[k]));
    }
    auto below_mask = [&](int x) {
        EventSet m = 0;
        for (int i : decompose(d, x)) m |= bit(slot[i]);
        return m;
    };

    std::vector<EnablingGen> gens;
    for (std::size_t k = 0; k < irr.size(); ++k) {
        gens.push_back({below_mask(irr[k]) & ~bit(static_cast<int>(k)), static_cast<int>(k)});
    }

    Epes out;
    if (d.kind() == DomainKind::bounded_complete) {
        std::vector<EventSet> maximal;
        for (int m : d.maximal_elements()) maximal.push_back(below_mask(m));
        out.base = EventStructure::with_consistency(std::move(names), std::move(maximal), std::move(gens));
    } else {
        std::vector<std::pair<int, int>> conflict;
        for (std::size_t a = 0; a < irr.size(); ++a) {
            for (std::size_t b = a + 1; b < irr.size(); ++b) {
                if (!d.consistent(irr[a], irr[b])) conflict.emplace_back(static_cast<int>(a), static_cast<int>(b));
            }
        }
        out.base = EventStructure::with_conflict(std::move(names), conflict, std::move(gens));
    }

    out.cls.assign(irr.size(), -1);
    const auto classes = interchange_classes(d);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for (int i : classes[c]) out.cls[slot[i]] = static_cast<int>(c);
    }
    return out;
}

EventStructure fuse(const Epes& p)
{
    if (p.base.kind() != ConflictKind::binary) throw InputError("fusion needs a binary-conflict base");
    const int n = static_cast<int>(p.base.size());
    if (static_cast<int>(p.cls.size()) != n) throw InputError("equivalence must assign a class to every event");

    // Classes are numbered in order of their least member name.
    std::map<int, std::string> least;
    for (int e = 0; e < n; ++e) {
        auto it = least.find(p.cls[e]);
        if (it == least.end() || p.base.name(e) < it->second) least[p.cls[e]] = p.base.name(e);
    }
    std::vector<std::pair<std::string, int>> ordered;
    for (const auto& [c, name] : least) ordered.emplace_back(name, c);
    std::sort(ordered.begin(), ordered.end());
    std::map<int, int> renumber;
    std::vector<std::string> names;
    for (const auto& [name, c] : ordered) {
        renumber[c] = static_cast<int>(names.size());
        names.push_back(name);
    }
    std::vector<int> quotient(n);
    for (int e = 0; e < n; ++e) quotient[e] = renumber.at(p.cls[e]);

    std::vector<EnablingGen> gens;
    for (const auto& g : p.base.generators()) gens.push_back({image_of(quotient, g.needs), quotient[g.event]});

    const int k = static_cast<int>(names.size());
    std::vector<std::pair<int, int>> conflict;
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            bool all_conflict = true;
            for (int x = 0; x < n && all_conflict; ++x) {
                if (quotient[x] != a) continue;
                for (int y = 0; y < n; ++y) {
                    if (quotient[y] == b && !p.base.in_conflict(x, y)) {
                        all_conflict = false;
                        break;
                    }
                }
            }
            if (all_conflict) conflict.emplace_back(a, b);
        }
    }
    return EventStructure::with_conflict(std::move(names), conflict, std::move(gens));
}

Epes unfold(const EventStructure& es)
{
    const auto events = unfolded_events(es);
    const int n = static_cast<int>(events.size());
    std::vector<std::string> names;
    std::vector<EnablingGen> gens;
    std::vector<int> raw_cls;
    for (int x = 0; x < n; ++x) {
        const auto& [history, e] = events[x];
        names.push_back(es.name(e) + "@" + es.format(history));
        EventSet needs = 0;
        for (int y = 0; y < n; ++y) {
            if (y != x && subset(events[y].history | bit(events[y].event), history)) needs |= bit(y);
        }
        gens.push_back({needs, x});
        raw_cls.push_back(e);
    }
    std::vector<std::pair<int, int>> conflict;
    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
            const EventSet joint = events[x].history | events[y].history | bit(events[x].event) | bit(events[y].event);
            if (!es.consistent(joint)) conflict.emplace_back(x, y);
        }
    }
    return {EventStructure::with_conflict(std::move(names), conflict, std::move(gens)), compact_classes(raw_cls)};
}

std::vector<std::vector<int>> unfold_morphism_choices(const EventMap& f, const EventStructure& src,
                                                      const EventStructure& dst)
{
    if (f.size() != src.size()) throw InputError("event map must list every source event");
    const auto from = unfolded_events(src);
    const auto to = unfolded_events(dst);
    std::vector<std::vector<int>> out(from.size());
    for (std::size_t x = 0; x < from.size(); ++x) {
        const int target = f[from[x].event];
        if (target < 0) continue;
        const EventSet reach = image_of(f, from[x].history);
        for (std::size_t y = 0; y < to.size(); ++y) {
            if (to[y].event == target && subset(to[y].history, reach)) out[x].push_back(static_cast<int>(y));
        }
    }
    return out;
}

MorphismVerdict validate_epes_morphism(const EventMap& f, const Epes& src, const Epes& dst)
{
    auto verdict = validate_es_morphism(f, src.base, dst.base);
    if (!verdict.ok) return verdict;
    const int n = static_cast<int>(src.base.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (f[a] < 0 || f[b] < 0) continue;
            if ((src.cls[a] == src.cls[b]) != (dst.cls[f[a]] == dst.cls[f[b]])) {
                return {false, "equivalence preservation and reflection",
                        src.base.name(a) + "," + src.base.name(b)};
            }
        }
    }
    return {};
}

}  // namespace weavent
