#pragma once

#include <string>

#include "weavent/async.hpp"
#include "weavent/domain.hpp"
#include "weavent/graph.hpp"

namespace weavent {

// Graphviz text with nodes and edges emitted in sorted order, so equal
// inputs give byte-identical output.
std::string poset_to_dot(const FiniteDomain& d);
std::string graph_to_dot(const TypedGraph& g);
std::string async_to_dot(const AsyncGraph& a);

}  // namespace weavent
