#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "support/support.hpp"
#include "weavent/error.hpp"
#include "weavent/es.hpp"

using namespace weavent;
using namespace weavent::testing;

namespace {

std::set<std::string> formatted(const EventStructure& es, const std::vector<EventSet>& sets)
{
    std::set<std::string> out;
    for (EventSet s : sets) out.insert(es.format(s));
    return out;
}

}  // namespace

TEST_CASE("securing fixpoint on the running structure")
{
    const auto es = fixture_es("e_run");
    CHECK(is_secured(es, es.set_of({"a", "c"})));
    CHECK_FALSE(is_secured(es, es.set_of({"c"})));
    CHECK(is_secured(es, 0));
    CHECK_THROWS_AS(es.set_of({"zz"}), InputError);
}

TEST_CASE("configurations of the fixtures")
{
    const auto run = fixture_es("e_run");
    CHECK(formatted(run, configurations(run)) ==
          std::set<std::string>{"{}", "{a}", "{b}", "{a,b}", "{a,c}", "{b,c}", "{a,b,c}"});
    CHECK(configurations(fixture_es("e_ccs")).size() == 6);
    CHECK(configurations(make_es({}, {}, {})) == std::vector<EventSet>{0});
}

TEST_CASE("minimal enablings")
{
    const auto run = fixture_es("e_run");
    CHECK(formatted(run, minimal_enablings(run, run.index_of("c"))) == std::set<std::string>{"{a}", "{b}"});
    CHECK(minimal_enablings(run, run.index_of("a")) == std::vector<EventSet>{0});

    const auto split = fixture_es("e_run_conflict");
    CHECK(formatted(split, minimal_enablings(split, split.index_of("c"))) == std::set<std::string>{"{a}", "{b}"});
}

TEST_CASE("classification of the fixtures")
{
    auto run = classify(fixture_es("e_run"));
    CHECK(run.live);
    CHECK_FALSE(run.stable);
    CHECK_FALSE(run.prime);
    CHECK(run.connected);

    auto ccs = classify(fixture_es("e_ccs"));
    CHECK((ccs.live && ccs.stable && ccs.prime && ccs.connected));

    auto conflicting = classify(fixture_es("e_run_conflict"));
    CHECK(conflicting.live);
    CHECK(conflicting.stable);
    CHECK_FALSE(conflicting.prime);
    CHECK_FALSE(conflicting.connected);
}

TEST_CASE("saturation")
{
    const auto run = fixture_es("e_run");
    CHECK(saturate(run).conflict_pairs() == run.conflict_pairs());

    // b is only reachable through x, which excludes a, so a and b never meet.
    const auto hidden = make_es({"a", "x", "b"}, {{"a", "x"}}, {{{}, "a"}, {{}, "x"}, {{"x"}, "b"}});
    const auto sat = saturate(hidden);
    CHECK(sat.in_conflict(sat.index_of("a"), sat.index_of("b")));
    CHECK(configurations(sat) == configurations(hidden));

    // Removing a#b from the conflicting fixture makes {a,b} a configuration,
    // so nothing is restored.
    const auto relaxed = make_es({"a", "b", "c"}, {}, {{{}, "a"}, {{}, "b"}, {{"a"}, "c"}, {{"b"}, "c"}});
    CHECK(saturate(relaxed).conflict_pairs().empty());

    const auto dead = make_es({"a", "d"}, {}, {{{}, "a"}, {{"d"}, "d"}});
    try {
        (void)saturate(dead);
        FAIL("expected a liveness error");
    } catch (const LivenessError& err) {
        CHECK(err.event() == "d");
    }
}

TEST_CASE("saturation adds exactly the pairs that never co-occur")
{
    std::mt19937 rng(11);
    for (int round = 0; round < 60; ++round) {
        const auto es = random_live_es(rng, 5, 0.4);
        const auto confs = configurations(es);
        const auto sat = saturate(es);
        for (int a = 0; a < static_cast<int>(es.size()); ++a) {
            for (int b = a + 1; b < static_cast<int>(es.size()); ++b) {
                const bool together = std::any_of(confs.begin(), confs.end(),
                                                  [&](EventSet c) { return contains(c, a) && contains(c, b); });
                CHECK(sat.in_conflict(a, b) == !together);
            }
        }
    }
}

TEST_CASE("morphism examples")
{
    const auto run = fixture_es("e_run");
    EventMap identity{0, 1, 2};
    CHECK(validate_es_morphism(identity, run, run).ok);

    const auto target = make_es({"c'"}, {}, {{{}, "c'"}});
    CHECK(validate_es_morphism({-1, -1, 0}, run, target).ok);

    const auto two = make_es({"x", "y"}, {}, {{{}, "x"}, {{"x"}, "y"}});
    const auto collapse = validate_es_morphism({0, 0, 1}, run, two);
    CHECK_FALSE(collapse.ok);
    CHECK(collapse.condition.find("injectivity") != std::string::npos);
}

TEST_CASE("configurations agree with the subset oracle and satisfy their invariants")
{
    std::mt19937 rng(21);
    for (int round = 0; round < 150; ++round) {
        const auto es = random_live_es(rng, 6, 0.3);
        const auto confs = configurations(es);
        auto oracle = configurations_by_subsets(es);
        auto sorted = confs;
        std::sort(sorted.begin(), sorted.end());
        std::sort(oracle.begin(), oracle.end());
        REQUIRE(sorted == oracle);
        for (EventSet c : confs) {
            CHECK(is_secured(es, c));
            CHECK(es.consistent(c));
        }

        const auto kind = classify(es);
        CHECK(kind.prime == (kind.stable && kind.connected));

        for (int e = 0; e < static_cast<int>(es.size()); ++e) {
            const auto mins = minimal_enablings(es, e);
            for (std::size_t i = 0; i < mins.size(); ++i) {
                for (std::size_t j = 0; j < mins.size(); ++j) {
                    if (i != j) CHECK_FALSE(subset(mins[i], mins[j]));
                }
            }
            if (!kind.stable) continue;
            for (EventSet c : confs) {
                if (!contains(c, e)) continue;
                const auto inside = std::count_if(mins.begin(), mins.end(), [&](EventSet m) { return subset(m, c); });
                CHECK(inside == 1);
            }
        }
    }
}

TEST_CASE("consistency-predicate variant")
{
    // Three events, any two compatible but not all three.
    const auto es = EventStructure::with_consistency({"a", "b", "c"}, {0b011, 0b101, 0b110},
                                                     {{0, 0}, {0, 1}, {0, 2}});
    CHECK(es.kind() == ConflictKind::consistency);
    CHECK(configurations(es).size() == 7);
    CHECK_FALSE(es.consistent(0b111));
    CHECK(classify(es).live);
}
