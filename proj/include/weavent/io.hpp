#pragma once

#include <filesystem>
#include <json.hpp>

#include "weavent/async.hpp"
#include "weavent/domain.hpp"
#include "weavent/duality.hpp"
#include "weavent/es.hpp"
#include "weavent/graph.hpp"
#include "weavent/rewrite.hpp"

namespace weavent {

using Json = nlohmann::ordered_json;

// Readers reject unknown keys, dangling names and anything the matching
// module-level check refuses, always by throwing InputError.
Json load_json(const std::filesystem::path& path);

EventStructure es_from_json(const Json& j);
Json es_to_json(const EventStructure& es);

FiniteDomain domain_from_json(const Json& j);
Json domain_to_json(const FiniteDomain& d);

TypedGraph graph_from_json(const Json& j);
Json graph_to_json(const TypedGraph& g);

Grammar grammar_from_json(const Json& j);
Json grammar_to_json(const Grammar& g);

AsyncGraph async_from_json(const Json& j);
Json async_to_json(const AsyncGraph& a);

// {"es": {...}, "classes": [["a","b"], ...]}; unlisted events form singleton classes.
Epes epes_from_json(const Json& j);
Json epes_to_json(const Epes& p);

// {"map": {"source name": "target name" | null}}; names missing from the
// map are treated as undefined for event maps and rejected for poset maps.
EventMap event_map_from_json(const Json& j, const EventStructure& src, const EventStructure& dst);
PosetMap poset_map_from_json(const Json& j, const FiniteDomain& src, const FiniteDomain& dst);

}  // namespace weavent
