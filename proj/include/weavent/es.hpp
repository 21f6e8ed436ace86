#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace weavent {

// Events are indexed 0..n-1 inside one structure; sets of events are bit masks.
using EventSet = std::uint64_t;
inline constexpr std::size_t kMaxEvents = 64;

inline EventSet bit(int e) { return EventSet{1} << e; }
inline bool contains(EventSet s, int e) { return (s >> e) & 1U; }
inline bool subset(EventSet a, EventSet b) { return (a & ~b) == 0; }
int cardinality(EventSet s);
std::vector<int> members(EventSet s);

enum class ConflictKind { binary, consistency };

// One generator (needs, event) of the enabling relation: X |- event iff some
// generator of event has needs contained in X.
struct EnablingGen {
    EventSet needs = 0;
    int event = 0;
    bool operator==(const EnablingGen&) const = default;
    auto operator<=>(const EnablingGen&) const = default;
};

class EventStructure {
public:
    EventStructure() = default;

    // Binary-conflict variant. `conflict` lists unordered pairs of indices.
    static EventStructure with_conflict(std::vector<std::string> names,
                                        const std::vector<std::pair<int, int>>& conflict,
                                        std::vector<EnablingGen> gens);

    // Consistency-predicate variant, Con given by its maximal members.
    static EventStructure with_consistency(std::vector<std::string> names,
                                           std::vector<EventSet> maximal_consistent,
                                           std::vector<EnablingGen> gens);

    std::size_t size() const { return names_.size(); }
    EventSet all() const;
    ConflictKind kind() const { return kind_; }

    const std::string& name(int e) const { return names_.at(static_cast<std::size_t>(e)); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<int> find(std::string_view name) const;
    int index_of(std::string_view name) const;  // throws InputError
    EventSet set_of(const std::vector<std::string>& names) const;
    std::string format(EventSet s) const;

    bool in_conflict(int a, int b) const;
    bool consistent(EventSet s) const;
    bool enables(EventSet s, int e) const;

    const std::vector<EnablingGen>& generators() const { return gens_; }
    // Binary variant: conflict partners of each event.
    const std::vector<EventSet>& conflict_rows() const { return conflict_; }
    // Consistency variant: maximal consistent sets.
    const std::vector<EventSet>& maximal_consistent() const { return maximal_; }
    std::vector<std::pair<int, int>> conflict_pairs() const;

private:
    void index_names();
    void canonicalize_generators();

    std::vector<std::string> names_;
    ConflictKind kind_ = ConflictKind::binary;
    std::vector<EventSet> conflict_;
    std::vector<EventSet> maximal_;
    std::vector<EnablingGen> gens_;
};

// Name-based convenience constructor for the binary variant.
EventStructure make_es(const std::vector<std::string>& names,
                       const std::vector<std::pair<std::string, std::string>>& conflict,
                       const std::vector<std::pair<std::vector<std::string>, std::string>>& enabling);

bool is_secured(const EventStructure& es, EventSet x);

// Inclusion-maximal consistent sets, sorted by mask. For the binary variant
// these are the maximal conflict-free sets.
std::vector<EventSet> maximal_consistent_sets(const EventStructure& es);

// Consistent secured subsets, ordered by size and then by mask.
std::vector<EventSet> configurations(const EventStructure& es);

// Inclusion-minimal configurations enabling e.
std::vector<EventSet> minimal_enablings(const EventStructure& es, int e);

struct Classification {
    bool live = false;
    bool stable = false;
    bool prime = false;
    bool connected = false;
    std::vector<std::string> diagnostics;
};

Classification classify(const EventStructure& es);

EventStructure saturate(const EventStructure& es);

// Partial event map: image[e] is the target index or -1 when undefined.
using EventMap = std::vector<int>;

struct MorphismVerdict {
    bool ok = true;
    std::string condition;
    std::string witness;
};

MorphismVerdict validate_es_morphism(const EventMap& f, const EventStructure& src,
                                     const EventStructure& dst);

}  // namespace weavent
