#include "weavent/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "weavent/error.hpp"

namespace weavent {

int TypedGraph::add_node(std::string id, std::string type)
{
    nodes.push_back({std::move(id), std::move(type)});
    return static_cast<int>(nodes.size()) - 1;
}

int TypedGraph::add_edge(std::string id, std::string type, int src, int tgt)
{
    edges.push_back({std::move(id), std::move(type), src, tgt});
    return static_cast<int>(edges.size()) - 1;
}

std::optional<int> TypedGraph::find_node(std::string_view id) const
{
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id) return static_cast<int>(i);
    }
    return std::nullopt;
}

std::optional<int> TypedGraph::find_edge(std::string_view id) const
{
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].id == id) return static_cast<int>(i);
    }
    return std::nullopt;
}

int TypedGraph::node_index(std::string_view id) const
{
    if (auto i = find_node(id)) return *i;
    throw InputError("unknown node '" + std::string(id) + "'");
}

int TypedGraph::edge_index(std::string_view id) const
{
    if (auto i = find_edge(id)) return *i;
    throw InputError("unknown edge '" + std::string(id) + "'");
}

TypedGraph self_typed(TypedGraph t)
{
    for (auto& n : t.nodes) n.type = n.id;
    for (auto& e : t.edges) e.type = e.id;
    return t;
}

void check_typed(const TypedGraph& g, const TypedGraph& type_graph)
{
    std::set<std::string> ids;
    for (const auto& n : g.nodes) {
        if (n.id.empty()) throw InputError("node ids must be nonempty");
        if (!ids.insert(n.id).second) throw InputError("duplicate node id '" + n.id + "'");
        if (!type_graph.find_node(n.type)) throw InputError("node '" + n.id + "' has unknown type '" + n.type + "'");
    }
    ids.clear();
    for (const auto& e : g.edges) {
        if (e.id.empty()) throw InputError("edge ids must be nonempty");
        if (!ids.insert(e.id).second) throw InputError("duplicate edge id '" + e.id + "'");
        if (e.src < 0 || e.tgt < 0 || e.src >= static_cast<int>(g.nodes.size()) ||
            e.tgt >= static_cast<int>(g.nodes.size())) {
            throw InputError("edge '" + e.id + "' has a missing endpoint");
        }
        auto t = type_graph.find_edge(e.type);
        if (!t) throw InputError("edge '" + e.id + "' has unknown type '" + e.type + "'");
        const auto& te = type_graph.edges[*t];
        if (type_graph.nodes[te.src].id != g.nodes[e.src].type || type_graph.nodes[te.tgt].id != g.nodes[e.tgt].type) {
            throw InputError("typing of edge '" + e.id + "' does not commute with its endpoints");
        }
    }
}

bool is_morphism(const GraphMorphism& f, const TypedGraph& from, const TypedGraph& to)
{
    if (f.node.size() != from.nodes.size() || f.edge.size() != from.edges.size()) return false;
    for (std::size_t i = 0; i < f.node.size(); ++i) {
        const int y = f.node[i];
        if (y < 0 || y >= static_cast<int>(to.nodes.size()) || to.nodes[y].type != from.nodes[i].type) return false;
    }
    for (std::size_t i = 0; i < f.edge.size(); ++i) {
        const int y = f.edge[i];
        if (y < 0 || y >= static_cast<int>(to.edges.size())) return false;
        const auto& a = from.edges[i];
        const auto& b = to.edges[y];
        if (a.type != b.type || f.node[a.src] != b.src || f.node[a.tgt] != b.tgt) return false;
    }
    return true;
}

namespace {

bool injective_vec(const std::vector<int>& v, std::size_t range)
{
    std::vector<bool> hit(range, false);
    for (int y : v) {
        if (hit[y]) return false;
        hit[y] = true;
    }
    return true;
}

bool surjective_vec(const std::vector<int>& v, std::size_t range)
{
    std::vector<bool> hit(range, false);
    for (int y : v) hit[y] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

}  // namespace

bool is_injective(const GraphMorphism& f, const TypedGraph& to)
{
    return injective_vec(f.node, to.nodes.size()) && injective_vec(f.edge, to.edges.size());
}

bool is_surjective(const GraphMorphism& f, const TypedGraph& to)
{
    return surjective_vec(f.node, to.nodes.size()) && surjective_vec(f.edge, to.edges.size());
}

GraphMorphism compose(const GraphMorphism& second, const GraphMorphism& first)
{
    GraphMorphism out;
    for (int x : first.node) out.node.push_back(second.node.at(x));
    for (int x : first.edge) out.edge.push_back(second.edge.at(x));
    return out;
}

GraphMorphism identity_morphism(const TypedGraph& g)
{
    GraphMorphism out;
    out.node.resize(g.nodes.size());
    out.edge.resize(g.edges.size());
    std::iota(out.node.begin(), out.node.end(), 0);
    std::iota(out.edge.begin(), out.edge.end(), 0);
    return out;
}

namespace {

class MorphismSearch {
public:
    MorphismSearch(const TypedGraph& from, const TypedGraph& to, bool injective, std::size_t limit)
        : from_(from), to_(to), injective_(injective), limit_(limit)
    {
        f_.node.assign(from.nodes.size(), -1);
        f_.edge.assign(from.edges.size(), -1);
        node_used_.assign(to.nodes.size(), false);
        edge_used_.assign(to.edges.size(), false);
    }

    std::vector<GraphMorphism> run()
    {
        nodes(0);
        return std::move(out_);
    }

private:
    bool full() const { return limit_ != 0 && out_.size() >= limit_; }

    void nodes(std::size_t i)
    {
        if (full()) return;
        if (i == from_.nodes.size()) {
            edges(0);
            return;
        }
        for (std::size_t y = 0; y < to_.nodes.size(); ++y) {
            if (to_.nodes[y].type != from_.nodes[i].type || (injective_ && node_used_[y])) continue;
            if (!endpoints_possible(i, static_cast<int>(y))) continue;
            f_.node[i] = static_cast<int>(y);
            node_used_[y] = true;
            nodes(i + 1);
            node_used_[y] = false;
            if (full()) return;
        }
        f_.node[i] = -1;
    }

    // Every edge of `from` between already-placed nodes needs a candidate.
    bool endpoints_possible(std::size_t i, int y)
    {
        f_.node[i] = y;
        for (const auto& e : from_.edges) {
            const int s = f_.node[e.src];
            const int t = f_.node[e.tgt];
            if (s < 0 || t < 0) continue;
            if (e.src != static_cast<int>(i) && e.tgt != static_cast<int>(i)) continue;
            bool any = std::any_of(to_.edges.begin(), to_.edges.end(), [&](const TypedGraph::Edge& g) {
                return g.type == e.type && g.src == s && g.tgt == t;
            });
            if (!any) {
                f_.node[i] = -1;
                return false;
            }
        }
        return true;
    }

    void edges(std::size_t i)
    {
        if (full()) return;
        if (i == from_.edges.size()) {
            out_.push_back(f_);
            return;
        }
        const auto& e = from_.edges[i];
        for (std::size_t y = 0; y < to_.edges.size(); ++y) {
            const auto& g = to_.edges[y];
            if (g.type != e.type || g.src != f_.node[e.src] || g.tgt != f_.node[e.tgt]) continue;
            if (injective_ && edge_used_[y]) continue;
            f_.edge[i] = static_cast<int>(y);
            edge_used_[y] = true;
            edges(i + 1);
            edge_used_[y] = false;
            if (full()) return;
        }
        f_.edge[i] = -1;
    }

    const TypedGraph& from_;
    const TypedGraph& to_;
    bool injective_;
    std::size_t limit_;
    GraphMorphism f_;
    std::vector<bool> node_used_;
    std::vector<bool> edge_used_;
    std::vector<GraphMorphism> out_;
};

}  // namespace

std::vector<GraphMorphism> find_morphisms(const TypedGraph& from, const TypedGraph& to, bool injective,
                                          std::size_t limit)
{
    return MorphismSearch(from, to, injective, limit).run();
}

std::optional<GraphMorphism> graph_isomorphic(const TypedGraph& a, const TypedGraph& b)
{
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return std::nullopt;
    if (graph_signature(a) != graph_signature(b)) return std::nullopt;
    // A bijective graph morphism is an isomorphism.
    for (auto& f : find_morphisms(a, b, true)) {
        if (is_surjective(f, b)) return f;
    }
    return std::nullopt;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int root(int x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[root(a)] = root(b); }
};

bool quotient_matches(std::size_t count_a, std::size_t count_b, std::size_t count_p,
                      const std::vector<int>& span_a, const std::vector<int>& span_b,
                      const std::vector<int>& into_a, const std::vector<int>& into_b)
{
    UnionFind uf(count_a + count_b);
    for (std::size_t k = 0; k < span_a.size(); ++k) {
        uf.unite(span_a[k], static_cast<int>(count_a) + span_b[k]);
    }
    std::map<int, int> image_of_class;
    std::vector<bool> hit(count_p, false);
    auto target = [&](std::size_t x) {
        return x < count_a ? into_a[x] : into_b[x - count_a];
    };
    for (std::size_t x = 0; x < count_a + count_b; ++x) {
        const int c = uf.root(static_cast<int>(x));
        const int y = target(x);
        auto [it, fresh] = image_of_class.emplace(c, y);
        if (!fresh && it->second != y) return false;
        hit[y] = true;
    }
    std::set<int> targets;
    for (const auto& [c, y] : image_of_class) {
        if (!targets.insert(y).second) return false;
    }
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

}  // namespace

bool is_pushout(const TypedGraph& k, const TypedGraph& a, const TypedGraph& b, const TypedGraph& p,
                const GraphMorphism& span_a, const GraphMorphism& span_b, const GraphMorphism& into_a,
                const GraphMorphism& into_b)
{
    if (!is_morphism(span_a, k, a) || !is_morphism(span_b, k, b) || !is_morphism(into_a, a, p) ||
        !is_morphism(into_b, b, p)) {
        return false;
    }
    if (compose(into_a, span_a) != compose(into_b, span_b)) return false;
    return quotient_matches(a.nodes.size(), b.nodes.size(), p.nodes.size(), span_a.node, span_b.node,
                            into_a.node, into_b.node) &&
           quotient_matches(a.edges.size(), b.edges.size(), p.edges.size(), span_a.edge, span_b.edge,
                            into_a.edge, into_b.edge);
}

std::string graph_signature(const TypedGraph& g)
{
    std::vector<std::string> node_keys(g.nodes.size());
    std::vector<std::vector<std::string>> incident(g.nodes.size());
    for (const auto& e : g.edges) {
        if (e.src == e.tgt) {
            incident[e.src].push_back("o" + e.type);
        } else {
            incident[e.src].push_back(">" + e.type + ":" + g.nodes[e.tgt].type);
            incident[e.tgt].push_back("<" + e.type + ":" + g.nodes[e.src].type);
        }
    }
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        std::sort(incident[i].begin(), incident[i].end());
        std::string key = g.nodes[i].type + "[";
        for (const auto& s : incident[i]) key += s + ";";
        node_keys[i] = key + "]";
    }
    std::sort(node_keys.begin(), node_keys.end());
    std::string out;
    for (const auto& k : node_keys) out += k + "|";
    return out;
}

}  // namespace weavent
