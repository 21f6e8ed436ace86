#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "support/support.hpp"
#include "weavent/duality.hpp"
#include "weavent/error.hpp"

using namespace weavent;
using namespace weavent::testing;

namespace {

std::set<std::string> names_of(const FiniteDomain& d, const std::vector<int>& xs)
{
    std::set<std::string> out;
    for (int x : xs) out.insert(d.name(x));
    return out;
}

std::vector<FiniteDomain> weak_prime_fixtures()
{
    std::vector<FiniteDomain> out;
    for (const char* name : {"e_run", "e_ccs", "e_run_conflict", "e_split", "e1"}) out.push_back(dom_of_es(fixture_es(name)));
    out.push_back(chain(3));
    return out;
}

std::vector<FiniteDomain> random_domains(unsigned seed, int count)
{
    std::mt19937 rng(seed);
    std::vector<FiniteDomain> out;
    while (static_cast<int>(out.size()) < count) {
        auto d = dom_of_es(random_live_es(rng, 5));
        if (d.size() <= 12) out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

TEST_CASE("validate_domain")
{
    CHECK(validate_domain(dom_of_es(fixture_es("e_run"))).ok);
    CHECK(validate_domain(fixture_domain("m3")).ok);

    // Two atoms below two incomparable maxima: the atoms have no join.
    const FiniteDomain bowtie({"bot", "p", "q", "s", "t"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}});
    const auto verdict = validate_domain(bowtie);
    CHECK_FALSE(verdict.ok);
    CHECK(names_of(bowtie, verdict.witness) == std::set<std::string>{"p", "q"});

    CHECK_THROWS_AS(FiniteDomain({"x", "y"}, {{0, 1}, {1, 0}}), InputError);
}

TEST_CASE("irreducibles, primes and weak primes on the fixtures")
{
    const auto run = dom_of_es(fixture_es("e_run"));
    CHECK(names_of(run, irreducible_elements(run)) == std::set<std::string>{"{a}", "{b}", "{a,c}", "{b,c}"});
    CHECK(names_of(run, primes(run)) == std::set<std::string>{"{a}", "{b}"});
    CHECK(weak_primes(run).size() == 4);

    const auto ccs = dom_of_es(fixture_es("e_ccs"));
    CHECK(primes(ccs).size() == 3);
    CHECK(weak_primes(ccs).size() == 3);

    const auto m3 = fixture_domain("m3");
    CHECK(names_of(m3, irreducible_elements(m3)) == std::set<std::string>{"x", "y", "z"});
    CHECK(primes(m3).empty());
    CHECK(weak_primes(m3).empty());

    const auto c2 = chain(2);
    CHECK(names_of(c2, irreducible_elements(c2)) == std::set<std::string>{"x1", "x2"});

    for (const auto& info : irreducibles(run)) CHECK(run.covered_by(info.predecessor, info.element));
}

TEST_CASE("algebraicity records")
{
    auto run = algebraicity(dom_of_es(fixture_es("e_run")));
    CHECK(run.irreducible_algebraic);
    CHECK_FALSE(run.prime_algebraic);
    CHECK(run.weak_prime_algebraic);

    auto ccs = algebraicity(dom_of_es(fixture_es("e_ccs")));
    CHECK((ccs.irreducible_algebraic && ccs.prime_algebraic && ccs.weak_prime_algebraic));

    auto m3 = algebraicity(fixture_domain("m3"));
    CHECK(m3.irreducible_algebraic);
    CHECK_FALSE(m3.prime_algebraic);
    CHECK_FALSE(m3.weak_prime_algebraic);
}

TEST_CASE("interchangeability examples")
{
    const auto run = dom_of_es(fixture_es("e_run"));
    CHECK(interchangeable(run, run.index_of("{a,c}"), run.index_of("{b,c}")));
    CHECK_FALSE(interchangeable(run, run.index_of("{a}"), run.index_of("{b}")));
    CHECK_THROWS_AS(interchangeable(run, run.index_of("{a,b}"), run.index_of("{a}")), InputError);

    const auto classes = interchange_classes(run);
    std::set<std::set<std::string>> named;
    for (const auto& c : classes) named.insert(names_of(run, c));
    CHECK(named == std::set<std::set<std::string>>{{"{a}"}, {"{b}"}, {"{a,c}", "{b,c}"}});

    const auto zigzag = fixture_domain("interchange_chain");
    const int i = zigzag.index_of("i"), i1 = zigzag.index_of("i'"), i2 = zigzag.index_of("i''");
    CHECK(interchangeable(zigzag, i, i1));
    CHECK(interchangeable(zigzag, i1, i2));
    CHECK_FALSE(interchangeable(zigzag, i, i2));
    bool one_class = false;
    for (const auto& c : interchange_classes(zigzag)) {
        one_class = one_class || names_of(zigzag, c) == std::set<std::string>{"i", "i'", "i''"};
    }
    CHECK(one_class);

    for (const auto& c : interchange_classes(dom_of_es(fixture_es("e_ccs")))) CHECK(c.size() == 1);
}

TEST_CASE("decompose and diff")
{
    const auto run = dom_of_es(fixture_es("e_run"));
    const int top = run.index_of("{a,b,c}"), ab = run.index_of("{a,b}");
    CHECK(names_of(run, decompose(run, top)) == std::set<std::string>{"{a}", "{b}", "{a,c}", "{b,c}"});
    CHECK(names_of(run, decompose(run, ab)) == std::set<std::string>{"{a}", "{b}"});
    CHECK(decompose(run, *run.bottom()).empty());

    CHECK(names_of(run, diff(run, top, ab)) == std::set<std::string>{"{a,c}", "{b,c}"});
    CHECK(diff(run, ab, ab).empty());
    CHECK(names_of(run, diff(run, run.index_of("{a,c}"), run.index_of("{a}"))) == std::set<std::string>{"{a,c}"});
    CHECK_THROWS_AS(diff(run, run.index_of("{a}"), run.index_of("{b}")), InputError);

    // A cover whose difference holds two comparable irreducibles.
    const auto across = diff(run, top, run.index_of("{a,c}"));
    CHECK(names_of(run, across) == std::set<std::string>{"{b}", "{b,c}"});
    CHECK(run.leq(run.index_of("{b}"), run.index_of("{b,c}")));
}

TEST_CASE("domain morphisms")
{
    const auto run_es = fixture_es("e_run");
    const auto run = dom_of_es(run_es);
    PosetMap identity(run.size());
    for (int x = 0; x < static_cast<int>(run.size()); ++x) identity[x] = x;
    CHECK(validate_domain_morphism(identity, run, run).ok);

    // Forget a and b: configurations map to whether they contain c.
    const auto single = dom_of_es(make_es({"c'"}, {}, {{{}, "c'"}}));
    PosetMap forget(run.size());
    for (int x = 0; x < static_cast<int>(run.size()); ++x) {
        forget[x] = single.index_of(run.name(x).find('c') != std::string::npos ? "{c'}" : "{}");
    }
    CHECK(validate_domain_morphism(forget, run, single).ok);
    const int ac = run.index_of("{a,c}"), bc = run.index_of("{b,c}");
    CHECK(forget[*run.meet(ac, bc)] != *single.meet(forget[ac], forget[bc]));
    CHECK_FALSE(validate_domain_morphism(forget, run, single, true).ok);

    const auto two = chain(1);
    const FiniteDomain apart({"bot", "l", "r"}, {{0, 1}, {0, 2}});
    const auto bad = validate_domain_morphism({1, 2}, two, apart);
    CHECK_FALSE(bad.ok);
}

TEST_CASE("interchangeability characterisations agree")
{
    auto domains = weak_prime_fixtures();
    for (auto& d : random_domains(5, 100)) domains.push_back(std::move(d));
    domains.push_back(fixture_domain("interchange_chain"));
    domains.push_back(fixture_domain("m3"));
    for (const auto& d : domains) {
        const auto ir = irreducible_elements(d);
        const auto listed = irreducible_list(d);
        REQUIRE(std::set<int>(ir.begin(), ir.end()) == std::set<int>(listed.begin(), listed.end()));
        for (int i : ir) {
            for (int j : ir) {
                const bool fast = interchangeable(d, i, j);
                CHECK(fast == interchangeable_by_definition(d, i, j));
                CHECK(fast == interchangeable_by_upper_bounds(d, i, j));
                if (!fast) continue;
                CHECK(d.consistent(i, j));
                if (d.leq(i, j)) CHECK(i == j);
                for (int k : ir) {
                    if (interchangeable(d, i, k) && d.leq(j, k)) CHECK(j == k);
                }
            }
        }
        // The full quantifier ranges over every subset of D.
        if (d.size() <= 12) {
            const auto fast = weak_primes(d);
            const auto slow = weak_primes_by_definition(d);
            CHECK(std::set<int>(fast.begin(), fast.end()) == std::set<int>(slow.begin(), slow.end()));
        }
        const auto alg = algebraicity(d);
        CHECK(alg.irreducible_algebraic);
        CHECK(alg.prime_algebraic == (primes(d).size() == ir.size()));
    }
}

TEST_CASE("interchangeability is transitive on consistent triples of weak prime domains")
{
    auto domains = weak_prime_fixtures();
    for (auto& d : random_domains(6, 60)) domains.push_back(std::move(d));
    for (const auto& d : domains) {
        const auto ir = irreducible_elements(d);
        for (int i : ir) {
            for (int j : ir) {
                for (int k : ir) {
                    if (!interchangeable(d, i, j) || !interchangeable(d, j, k) || i == k) continue;
                    if (d.consistent(std::vector<int>{i, j, k})) CHECK(interchangeable(d, i, k));
                }
            }
        }
    }

    // Without consistency the chain fixture breaks transitivity.
    const auto b = fixture_bdomain("interchange_chain");
    const int i1 = b.index_of("i1"), i2 = b.index_of("i2"), i3 = b.index_of("i3");
    CHECK(interchangeable(b, i1, i2));
    CHECK(interchangeable(b, i2, i3));
    CHECK_FALSE(interchangeable(b, i1, i3));
    CHECK_FALSE(b.consistent(std::vector<int>{i1, i2, i3}));
}

TEST_CASE("chains through irreducible decompositions")
{
    auto domains = weak_prime_fixtures();
    for (auto& d : random_domains(8, 40)) domains.push_back(std::move(d));
    for (const auto& d : domains) {
        std::vector<int> class_of(d.size(), -1);
        const auto classes = interchange_classes(d);
        for (std::size_t c = 0; c < classes.size(); ++c) {
            for (int i : classes[c]) class_of[i] = static_cast<int>(c);
        }
        auto classes_in = [&](const std::vector<int>& xs) {
            std::set<int> out;
            for (int x : xs) out.insert(class_of[x]);
            return out;
        };

        for (int x = 0; x < static_cast<int>(d.size()); ++x) {
            auto ir = decompose(d, x);
            // Height order is one linearisation compatible with the order.
            std::sort(ir.begin(), ir.end(), [&](int a, int b) { return d.height(a) < d.height(b); });
            int acc = *d.bottom();
            for (int i : ir) {
                const auto next = d.join(acc, i);
                REQUIRE(next.has_value());
                CHECK((*next == acc || d.covered_by(acc, *next)));
                acc = *next;
            }
            CHECK(acc == x);

            // Walk one maximal chain from bottom to x and pick one irreducible per step.
            std::vector<int> picked;
            int cur = *d.bottom();
            while (cur != x) {
                int step = -1;
                for (int up : d.upper_covers(cur)) {
                    if (d.leq(up, x)) {
                        step = up;
                        break;
                    }
                }
                REQUIRE(step >= 0);
                const auto gained = diff(d, step, cur);
                REQUIRE_FALSE(gained.empty());
                picked.push_back(*std::min_element(gained.begin(), gained.end(),
                                                   [&](int a, int b) { return d.height(a) < d.height(b); }));
                cur = step;
            }
            CHECK(classes_in(picked) == classes_in(decompose(d, x)));
        }
    }
}
