#include <doctest.h>

#include <algorithm>
#include <string>

#include "support/support.hpp"
#include "weavent/dot.hpp"
#include "weavent/error.hpp"
#include "weavent/io.hpp"

using namespace weavent;
using namespace weavent::testing;

namespace {

std::size_t count(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
    return n;
}

// Node statements are the indented quoted lines without an arrow.
std::size_t node_lines(const std::string& dot)
{
    std::size_t n = 0;
    std::size_t start = 0;
    while (start < dot.size()) {
        auto end = dot.find('\n', start);
        if (end == std::string::npos) end = dot.size();
        const auto line = dot.substr(start, end - start);
        if (line.rfind("  \"", 0) == 0 && line.find("->") == std::string::npos) ++n;
        start = end + 1;
    }
    return n;
}

}  // namespace

TEST_CASE("structure documents round trip")
{
    const auto run = fixture_es("e_run");
    CHECK(es_isomorphic(es_from_json(es_to_json(run)), run));
    const auto e1 = fixture_es("e1");
    CHECK(es_to_json(es_from_json(es_to_json(e1))) == es_to_json(e1));

    const auto variant = EventStructure::with_consistency({"a", "b"}, {0b01, 0b10}, {{0, 0}, {0, 1}});
    const auto reread = es_from_json(es_to_json(variant));
    CHECK(reread.kind() == ConflictKind::consistency);
    CHECK_FALSE(reread.consistent(0b11));
}

TEST_CASE("domain, grammar, async and equivalence documents round trip")
{
    const auto b = fixture_bdomain("interchange_chain");
    const auto b2 = domain_from_json(domain_to_json(b));
    CHECK(b2.kind() == DomainKind::bounded_complete);
    CHECK(poset_isomorphic(b, b2));

    const auto g = running_grammar();
    CHECK(grammar_to_json(grammar_from_json(grammar_to_json(g))) == grammar_to_json(g));

    const auto a = hasse_as_async(dom_of_es(fixture_es("e_run")));
    CHECK(async_to_json(async_from_json(async_to_json(a))) == async_to_json(a));

    const auto p = unfold(fixture_es("e_run"));
    CHECK(epes_isomorphic(epes_from_json(epes_to_json(p)), p));
}

TEST_CASE("readers reject malformed documents")
{
    CHECK_THROWS_AS(es_from_json(Json::parse(R"({"events":["a"],"enabling":[],"extra":1})")), InputError);
    CHECK_THROWS_AS(es_from_json(Json::parse(R"({"events":["a","a"],"enabling":[]})")), InputError);
    CHECK_THROWS_AS(es_from_json(Json::parse(R"({"events":["a"],"enabling":[{"needs":["z"],"event":"a"}]})")),
                    InputError);
    CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"elements":["x","y"],"covers":[["x","y"],["y","x"]]})")),
                    InputError);
    CHECK_THROWS_AS(domain_from_json(Json::parse(
                        R"({"elements":["b","p","q","s","t"],"covers":[["b","p"],["b","q"],["p","s"],["q","s"],["p","t"],["q","t"]]})")),
                    InputError);
    CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"nodes":[{"id":"n"}],"edges":[{"id":"e","src":"n","tgt":"m"}]})")),
                    InputError);
    CHECK_THROWS_AS(load_json(fixture_path("does_not_exist.json")), InputError);

    const auto run = fixture_es("e_run");
    const auto single = make_es({"c'"}, {}, {{{}, "c'"}});
    const auto f = event_map_from_json(Json::parse(R"({"map":{"c":"c'","a":null}})"), run, single);
    CHECK(f == EventMap{-1, -1, 0});
    CHECK_THROWS_AS(event_map_from_json(Json::parse(R"({"map":{"c":"nope"}})"), run, single), InputError);
}

TEST_CASE("DOT output")
{
    const auto run = dom_of_es(fixture_es("e_run"));
    const auto dot = poset_to_dot(run);
    CHECK(count(dot, "->") == 9);
    CHECK(node_lines(dot) == 7);
    CHECK(dot == poset_to_dot(dom_of_es(fixture_es("e_run"))));

    CHECK(node_lines(poset_to_dot(dom_of_es(make_es({}, {}, {})))) == 1);

    const auto start = graph_to_dot(running_grammar().start);
    CHECK(node_lines(start) == 2);
    CHECK(count(start, "->") == 4);

    const auto async = async_to_dot(hasse_as_async(run));
    CHECK(count(async, "doublecircle") == 1);
    CHECK(count(async, "dashed") > 0);
}
