#include "weavent/es.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>

#include "weavent/error.hpp"

namespace weavent {

int cardinality(EventSet s) { return std::popcount(s); }

std::vector<int> members(EventSet s)
{
    std::vector<int> out;
    while (s != 0) {
        out.push_back(std::countr_zero(s));
        s &= s - 1;
    }
    return out;
}

namespace {

void check_names(const std::vector<std::string>& names)
{
    if (names.size() > kMaxEvents) {
        throw InputError("at most " + std::to_string(kMaxEvents) + " events are supported");
    }
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) throw InputError("event names must be nonempty");
        if (!seen.insert(n).second) throw InputError("duplicate event name '" + n + "'");
    }
}

}  // namespace

EventSet EventStructure::all() const
{
    return size() == kMaxEvents ? ~EventSet{0} : (EventSet{1} << size()) - 1;
}

EventStructure EventStructure::with_conflict(std::vector<std::string> names,
                                             const std::vector<std::pair<int, int>>& conflict,
                                             std::vector<EnablingGen> gens)
{
    check_names(names);
    EventStructure es;
    es.names_ = std::move(names);
    es.kind_ = ConflictKind::binary;
    es.conflict_.assign(es.size(), 0);
    const int n = static_cast<int>(es.size());
    for (auto [a, b] : conflict) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw InputError("conflict refers to an unknown event");
        if (a == b) throw InputError("conflict must be irreflexive: '" + es.names_[a] + "'");
        es.conflict_[a] |= bit(b);
        es.conflict_[b] |= bit(a);
    }
    es.gens_ = std::move(gens);
    es.canonicalize_generators();
    return es;
}

EventStructure EventStructure::with_consistency(std::vector<std::string> names,
                                                std::vector<EventSet> maximal_consistent,
                                                std::vector<EnablingGen> gens)
{
    check_names(names);
    EventStructure es;
    es.names_ = std::move(names);
    es.kind_ = ConflictKind::consistency;
    const EventSet everything = es.all();
    for (EventSet m : maximal_consistent) {
        if (!subset(m, everything)) throw InputError("consistent set refers to an unknown event");
    }
    // Keep only the maximal members; the family is read as its downward closure.
    std::sort(maximal_consistent.begin(), maximal_consistent.end());
    maximal_consistent.erase(std::unique(maximal_consistent.begin(), maximal_consistent.end()),
                             maximal_consistent.end());
    for (EventSet m : maximal_consistent) {
        bool dominated = std::any_of(maximal_consistent.begin(), maximal_consistent.end(),
                                     [m](EventSet o) { return o != m && subset(m, o); });
        if (!dominated) es.maximal_.push_back(m);
    }
    for (int e = 0; e < static_cast<int>(es.size()); ++e) {
        if (!es.consistent(bit(e))) {
            throw InputError("singleton {" + es.names_[e] + "} must be consistent");
        }
    }
    es.gens_ = std::move(gens);
    es.canonicalize_generators();
    return es;
}

void EventStructure::canonicalize_generators()
{
    const EventSet everything = all();
    for (const auto& g : gens_) {
        if (g.event < 0 || g.event >= static_cast<int>(size()) || !subset(g.needs, everything)) {
            throw InputError("enabling refers to an unknown event");
        }
    }
    std::sort(gens_.begin(), gens_.end(), [](const EnablingGen& a, const EnablingGen& b) {
        if (a.event != b.event) return a.event < b.event;
        if (cardinality(a.needs) != cardinality(b.needs)) return cardinality(a.needs) < cardinality(b.needs);
        return a.needs < b.needs;
    });
    std::vector<EnablingGen> kept;
    for (const auto& g : gens_) {
        bool redundant = std::any_of(kept.begin(), kept.end(), [&](const EnablingGen& k) {
            return k.event == g.event && subset(k.needs, g.needs);
        });
        if (!redundant) kept.push_back(g);
    }
    gens_ = std::move(kept);
}

std::optional<int> EventStructure::find(std::string_view name) const
{
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return static_cast<int>(i);
    }
    return std::nullopt;
}

int EventStructure::index_of(std::string_view name) const
{
    if (auto i = find(name)) return *i;
    throw InputError("unknown event '" + std::string(name) + "'");
}

EventSet EventStructure::set_of(const std::vector<std::string>& names) const
{
    EventSet s = 0;
    for (const auto& n : names) s |= bit(index_of(n));
    return s;
}

std::string EventStructure::format(EventSet s) const
{
    std::string out = "{";
    bool first = true;
    for (int e : members(s)) {
        if (!first) out += ",";
        out += names_.at(static_cast<std::size_t>(e));
        first = false;
    }
    return out + "}";
}

bool EventStructure::in_conflict(int a, int b) const
{
    if (kind_ == ConflictKind::binary) return contains(conflict_[a], b);
    return !consistent(bit(a) | bit(b));
}

bool EventStructure::consistent(EventSet s) const
{
    if (kind_ == ConflictKind::binary) {
        for (int e : members(s)) {
            if ((conflict_[e] & s) != 0) return false;
        }
        return true;
    }
    return std::any_of(maximal_.begin(), maximal_.end(), [s](EventSet m) { return subset(s, m); });
}

bool EventStructure::enables(EventSet s, int e) const
{
    return std::any_of(gens_.begin(), gens_.end(),
                       [&](const EnablingGen& g) { return g.event == e && subset(g.needs, s); });
}

std::vector<std::pair<int, int>> EventStructure::conflict_pairs() const
{
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < static_cast<int>(size()); ++a) {
        for (int b = a + 1; b < static_cast<int>(size()); ++b) {
            if (in_conflict(a, b)) out.emplace_back(a, b);
        }
    }
    return out;
}

EventStructure make_es(const std::vector<std::string>& names,
                       const std::vector<std::pair<std::string, std::string>>& conflict,
                       const std::vector<std::pair<std::vector<std::string>, std::string>>& enabling)
{
    auto lookup = [&](const std::string& n) {
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) throw InputError("unknown event '" + n + "'");
        return static_cast<int>(it - names.begin());
    };
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [a, b] : conflict) pairs.emplace_back(lookup(a), lookup(b));
    std::vector<EnablingGen> gens;
    for (const auto& [needs, e] : enabling) {
        EnablingGen g;
        g.event = lookup(e);
        for (const auto& n : needs) g.needs |= bit(lookup(n));
        gens.push_back(g);
    }
    return EventStructure::with_conflict(names, pairs, std::move(gens));
}

bool is_secured(const EventStructure& es, EventSet x)
{
    if (!subset(x, es.all())) throw InputError("set refers to an unknown event");
    EventSet reached = 0;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int e : members(x & ~reached)) {
            if (es.enables(reached, e)) {
                reached |= bit(e);
                grew = true;
            }
        }
    }
    return reached == x;
}

namespace {

void bron_kerbosch(const EventStructure& es, EventSet r, EventSet p, EventSet x,
                   std::vector<EventSet>& out)
{
    if (p == 0 && x == 0) {
        out.push_back(r);
        return;
    }
    for (int v : members(p)) {
        const EventSet compatible = es.all() & ~es.conflict_rows()[v] & ~bit(v);
        bron_kerbosch(es, r | bit(v), p & compatible, x & compatible, out);
        p &= ~bit(v);
        x |= bit(v);
    }
}

}  // namespace

std::vector<EventSet> maximal_consistent_sets(const EventStructure& es)
{
    std::vector<EventSet> out;
    if (es.kind() == ConflictKind::consistency) {
        out = es.maximal_consistent();
    } else {
        bron_kerbosch(es, 0, es.all(), 0, out);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<EventSet> configurations(const EventStructure& es)
{
    // Every configuration has a securing sequence, so all of them are reached
    // by adding one enabled, consistent event at a time from the empty set.
    std::set<EventSet> seen{0};
    std::deque<EventSet> todo{0};
    while (!todo.empty()) {
        EventSet c = todo.front();
        todo.pop_front();
        for (int e = 0; e < static_cast<int>(es.size()); ++e) {
            if (contains(c, e)) continue;
            EventSet next = c | bit(e);
            if (!es.enables(c, e) || !es.consistent(next)) continue;
            if (seen.insert(next).second) todo.push_back(next);
        }
    }
    std::vector<EventSet> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [](EventSet a, EventSet b) {
        if (cardinality(a) != cardinality(b)) return cardinality(a) < cardinality(b);
        return a < b;
    });
    return out;
}

namespace {

std::vector<EventSet> minimal_enablings_in(const EventStructure& es,
                                           const std::vector<EventSet>& confs, int e)
{
    std::vector<EventSet> enabling;
    for (EventSet c : confs) {
        if (es.enables(c, e)) enabling.push_back(c);
    }
    std::vector<EventSet> out;
    for (EventSet c : enabling) {
        bool minimal = std::none_of(enabling.begin(), enabling.end(),
                                    [c](EventSet o) { return o != c && subset(o, c); });
        if (minimal) out.push_back(c);
    }
    return out;
}

bool chain_connected(const EventStructure& es, const std::vector<EventSet>& mins, int e)
{
    if (mins.size() <= 1) return true;
    std::vector<bool> reached(mins.size(), false);
    std::vector<std::size_t> stack{0};
    reached[0] = true;
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < mins.size(); ++j) {
            if (!reached[j] && es.consistent(mins[i] | mins[j] | bit(e))) {
                reached[j] = true;
                stack.push_back(j);
            }
        }
    }
    return std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
}

}  // namespace

std::vector<EventSet> minimal_enablings(const EventStructure& es, int e)
{
    if (e < 0 || e >= static_cast<int>(es.size())) throw InputError("unknown event index");
    return minimal_enablings_in(es, configurations(es), e);
}

Classification classify(const EventStructure& es)
{
    Classification out;
    const auto confs = configurations(es);
    const int n = static_cast<int>(es.size());

    EventSet occurring = 0;
    for (EventSet c : confs) occurring |= c;
    out.live = true;
    for (int e = 0; e < n; ++e) {
        if (!contains(occurring, e)) {
            out.live = false;
            out.diagnostics.push_back("event " + es.name(e) + " occurs in no configuration");
        }
    }
    if (es.kind() == ConflictKind::binary) {
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                const EventSet pair = bit(a) | bit(b);
                bool together = std::any_of(confs.begin(), confs.end(),
                                            [pair](EventSet c) { return subset(pair, c); });
                if (!together && !es.in_conflict(a, b)) {
                    out.live = false;
                    out.diagnostics.push_back("conflict not saturated: " + es.name(a) + " and " +
                                              es.name(b) + " never co-occur");
                }
            }
        }
    } else {
        for (EventSet m : es.maximal_consistent()) {
            bool covered = std::any_of(confs.begin(), confs.end(),
                                       [m](EventSet c) { return subset(m, c); });
            if (!covered) {
                out.live = false;
                out.diagnostics.push_back("consistent set " + es.format(m) +
                                          " is contained in no configuration");
            }
        }
    }

    out.stable = true;
    out.prime = true;
    out.connected = true;
    for (int e = 0; e < n; ++e) {
        const auto mins = minimal_enablings_in(es, confs, e);
        if (mins.size() > 1) out.prime = false;
        for (std::size_t i = 0; i < mins.size() && out.stable; ++i) {
            for (std::size_t j = i + 1; j < mins.size(); ++j) {
                if (es.consistent(mins[i] | mins[j] | bit(e))) {
                    out.stable = false;
                    out.diagnostics.push_back("event " + es.name(e) + " has consistent minimal enablings " +
                                              es.format(mins[i]) + " and " + es.format(mins[j]));
                    break;
                }
            }
        }
        if (!chain_connected(es, mins, e)) {
            out.connected = false;
            out.diagnostics.push_back("minimal enablings of " + es.name(e) + " are not connected");
        }
    }
    return out;
}

EventStructure saturate(const EventStructure& es)
{
    const auto confs = configurations(es);
    EventSet occurring = 0;
    for (EventSet c : confs) occurring |= c;
    for (int e = 0; e < static_cast<int>(es.size()); ++e) {
        if (!contains(occurring, e)) {
            throw LivenessError(es.name(e), "event " + es.name(e) + " occurs in no configuration");
        }
    }
    if (es.kind() == ConflictKind::consistency) {
        return EventStructure::with_consistency(es.names(), confs, es.generators());
    }
    std::vector<std::pair<int, int>> pairs;
    const int n = static_cast<int>(es.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const EventSet pair = bit(a) | bit(b);
            bool together = std::any_of(confs.begin(), confs.end(),
                                        [pair](EventSet c) { return subset(pair, c); });
            if (!together) pairs.emplace_back(a, b);
        }
    }
    return EventStructure::with_conflict(es.names(), pairs, es.generators());
}

namespace {

EventSet image(const EventMap& f, EventSet s)
{
    EventSet out = 0;
    for (int e : members(s)) {
        if (f[e] >= 0) out |= bit(f[e]);
    }
    return out;
}

}  // namespace

MorphismVerdict validate_es_morphism(const EventMap& f, const EventStructure& src,
                                     const EventStructure& dst)
{
    if (f.size() != src.size()) throw InputError("event map must list every source event");
    for (int t : f) {
        if (t < -1 || t >= static_cast<int>(dst.size())) throw InputError("event map targets an unknown event");
    }
    const int n = static_cast<int>(src.size());
    const bool binary = src.kind() == ConflictKind::binary && dst.kind() == ConflictKind::binary;

    if (binary) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (f[a] < 0 || f[b] < 0 || a == b) continue;
                if (dst.in_conflict(f[a], f[b]) && !src.in_conflict(a, b)) {
                    return {false, "conflict reflection",
                            src.name(a) + "," + src.name(b)};
                }
                if (f[a] == f[b] && !src.in_conflict(a, b)) {
                    return {false, "injectivity up to conflict", src.name(a) + "," + src.name(b)};
                }
            }
        }
    } else {
        std::vector<EventSet> maximal = src.kind() == ConflictKind::consistency
                                            ? src.maximal_consistent()
                                            : std::vector<EventSet>{};
        if (src.kind() == ConflictKind::binary) {
            // For a live binary structure every conflict-free set sits inside a
            // configuration; pairs are added so that non-live inputs are still probed.
            maximal = configurations(src);
            for (int a = 0; a < n; ++a) {
                for (int b = a; b < n; ++b) {
                    if (src.consistent(bit(a) | bit(b))) maximal.push_back(bit(a) | bit(b));
                }
            }
        }
        for (EventSet m : maximal) {
            if (!dst.consistent(image(f, m))) {
                return {false, "consistency preservation", src.format(m)};
            }
        }
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (f[a] >= 0 && f[a] == f[b] && src.consistent(bit(a) | bit(b))) {
                    return {false, "injectivity on consistent pairs", src.name(a) + "," + src.name(b)};
                }
            }
        }
    }

    for (EventSet c : configurations(src)) {
        for (int e = 0; e < n; ++e) {
            if (f[e] < 0 || !src.enables(c, e)) continue;
            if (!dst.enables(image(f, c), f[e])) {
                return {false, "enabling preservation", src.format(c) + " |- " + src.name(e)};
            }
        }
    }
    return {};
}

}  // namespace weavent
