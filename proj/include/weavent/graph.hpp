#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace weavent {

// A directed multigraph whose items carry type names. Types refer to node
// and edge ids of a type graph; a type graph types itself by identity.
struct TypedGraph {
    struct Node {
        std::string id;
        std::string type;
        bool operator==(const Node&) const = default;
    };
    struct Edge {
        std::string id;
        std::string type;
        int src = 0;
        int tgt = 0;
        bool operator==(const Edge&) const = default;
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;

    bool operator==(const TypedGraph&) const = default;

    int add_node(std::string id, std::string type);
    int add_edge(std::string id, std::string type, int src, int tgt);
    std::optional<int> find_node(std::string_view id) const;
    std::optional<int> find_edge(std::string_view id) const;
    int node_index(std::string_view id) const;  // throws InputError
    int edge_index(std::string_view id) const;
};

// Builds a type graph's self-typing: every item is typed by its own id.
TypedGraph self_typed(TypedGraph t);

// Throws InputError unless ids are unique, endpoints exist and the typing
// is a graph morphism into `type_graph`.
void check_typed(const TypedGraph& g, const TypedGraph& type_graph);

struct GraphMorphism {
    std::vector<int> node;
    std::vector<int> edge;
    bool operator==(const GraphMorphism&) const = default;
};

bool is_morphism(const GraphMorphism& f, const TypedGraph& from, const TypedGraph& to);
bool is_injective(const GraphMorphism& f, const TypedGraph& to);
bool is_surjective(const GraphMorphism& f, const TypedGraph& to);
GraphMorphism compose(const GraphMorphism& second, const GraphMorphism& first);  // second ∘ first
GraphMorphism identity_morphism(const TypedGraph& g);

// All typed morphisms from -> to, in lexicographic order of node then edge
// images. `injective` restricts the search to monomorphisms.
std::vector<GraphMorphism> find_morphisms(const TypedGraph& from, const TypedGraph& to, bool injective = false,
                                          std::size_t limit = 0);

std::optional<GraphMorphism> graph_isomorphic(const TypedGraph& a, const TypedGraph& b);

// Checks that the square  span_a: K -> A,  span_b: K -> B,  into_a: A -> P,
// into_b: B -> P  commutes and that P is the quotient of A + B by the
// equivalence generated by the span, with no extra identifications.
bool is_pushout(const TypedGraph& k, const TypedGraph& a, const TypedGraph& b, const TypedGraph& p,
                const GraphMorphism& span_a, const GraphMorphism& span_b, const GraphMorphism& into_a,
                const GraphMorphism& into_b);

// Cheap isomorphism invariant: equal graphs up to renaming hash equal.
std::string graph_signature(const TypedGraph& g);

}  // namespace weavent
