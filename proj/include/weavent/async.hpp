#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "weavent/domain.hpp"

namespace weavent {

// A transition graph with an origin and a set of declared commuting squares.
// A square relates two length-2 paths, each given as a pair of edge ids.
struct AsyncGraph {
    struct Edge {
        std::string id;
        std::string src;
        std::string tgt;
    };
    using Path2 = std::array<std::string, 2>;

    std::vector<std::string> nodes;
    std::vector<Edge> edges;
    std::string origin;
    std::vector<std::pair<Path2, Path2>> squares;
};

// Throws InputError when the graph is not simple, not acyclic, has nodes
// unreachable from the origin, or a square whose paths are broken or not
// coinitial and cofinal.
void check_async_graph(const AsyncGraph& a);

struct AsyncVerdict {
    bool axiom1 = true;
    bool axiom2 = true;
    bool cube_forward = true;
    bool cube_backward = true;  // stability
    bool coherence = true;
    bool all_cofinal_equivalent = true;
    bool ok = true;  // every required axiom, with stability only when not weak
    std::vector<std::string> diagnostics;

    bool prime() const { return ok && all_cofinal_equivalent; }
};

AsyncVerdict validate_async_graph(const AsyncGraph& a, bool weak);

// Origin paths of length <= the longest path, grouped by the contextual
// closure of the square equivalence. Throws CeilingError past `path_limit`.
struct PathClasses {
    std::vector<std::vector<int>> paths;  // edge indices
    std::vector<int> class_of;
    std::size_t class_count = 0;
};

inline constexpr std::size_t kDefaultPathLimit = 200000;

PathClasses origin_path_classes(const AsyncGraph& a, std::size_t path_limit = kDefaultPathLimit);

// Path classes ordered by prefix. Elements take the name of their endpoint,
// with "/k" appended when several classes share one. Throws InputError unless
// the graph validates as weak with all cofinal origin paths equivalent.
FiniteDomain async_domain(const AsyncGraph& a);

// Hasse diagram of d with edge ids "x->y", origin at the bottom and every
// pair of distinct coinitial and cofinal length-2 paths declared commuting.
AsyncGraph hasse_as_async(const FiniteDomain& d);

}  // namespace weavent
