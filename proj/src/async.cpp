#include "weavent/async.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <initializer_list>
#include <set>

#include "weavent/error.hpp"

namespace weavent {

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

// Index-based view of an async graph with the square equivalence on
// length-2 paths already closed.
class Indexed {
public:
    explicit Indexed(const AsyncGraph& a) : a_(a)
    {
        check_async_graph(a);
        for (std::size_t i = 0; i < a.nodes.size(); ++i) node_[a.nodes[i]] = static_cast<int>(i);
        out_.resize(a.nodes.size());
        for (std::size_t e = 0; e < a.edges.size(); ++e) {
            const int s = node_.at(a.edges[e].src);
            const int t = node_.at(a.edges[e].tgt);
            src_.push_back(s);
            tgt_.push_back(t);
            out_[s].push_back(static_cast<int>(e));
            between_[{s, t}] = static_cast<int>(e);
            edge_[a.edges[e].id] = static_cast<int>(e);
        }
        for (std::size_t e = 0; e < a.edges.size(); ++e) {
            for (int f : out_[tgt_[e]]) {
                path_index_[{static_cast<int>(e), f}] = static_cast<int>(paths_.size());
                paths_.push_back({static_cast<int>(e), f});
            }
        }
        UnionFind uf(paths_.size());
        for (const auto& [p, q] : a.squares) uf.unite(path_of(p), path_of(q));
        class_.resize(paths_.size());
        members_.resize(paths_.size());
        for (std::size_t i = 0; i < paths_.size(); ++i) {
            class_[i] = uf.root(static_cast<int>(i));
            members_[class_[i]].push_back(static_cast<int>(i));
        }
    }

    std::size_t node_count() const { return a_.nodes.size(); }
    std::size_t edge_count() const { return src_.size(); }
    int node(const std::string& id) const { return node_.at(id); }
    int src(int e) const { return src_[e]; }
    int tgt(int e) const { return tgt_[e]; }
    const std::vector<int>& out(int n) const { return out_[n]; }
    std::optional<int> edge(int s, int t) const
    {
        auto it = between_.find({s, t});
        if (it == between_.end()) return std::nullopt;
        return it->second;
    }

    bool eq(int e1, int e2, int f1, int f2) const
    {
        return class_[path(e1, e2)] == class_[path(f1, f2)];
    }
    // Equivalent and distinct.
    bool commutes(int e1, int e2, int f1, int f2) const { return (e1 != f1 || e2 != f2) && eq(e1, e2, f1, f2); }

    // Length-2 paths equivalent to e1;e2 other than itself.
    std::vector<std::array<int, 2>> partners(int e1, int e2) const
    {
        std::vector<std::array<int, 2>> out;
        const int self = path(e1, e2);
        for (int q : members_[class_[self]]) {
            if (q != self) out.push_back(paths_[q]);
        }
        return out;
    }

    const std::string& edge_id(int e) const { return a_.edges[e].id; }
    const std::string& node_id(int n) const { return a_.nodes[n]; }

private:
    int path(int e1, int e2) const { return path_index_.at({e1, e2}); }
    int path_of(const AsyncGraph::Path2& p) const { return path(edge_.at(p[0]), edge_.at(p[1])); }

    const AsyncGraph& a_;
    std::map<std::string, int> node_;
    std::map<std::string, int> edge_;
    std::vector<int> src_;
    std::vector<int> tgt_;
    std::vector<std::vector<int>> out_;
    std::map<std::pair<int, int>, int> between_;
    std::vector<std::array<int, 2>> paths_;
    std::map<std::pair<int, int>, int> path_index_;
    std::vector<int> class_;
    std::vector<std::vector<int>> members_;
};

std::string show_path(const Indexed& g, std::initializer_list<int> edges)
{
    std::string out;
    for (int e : edges) out += (out.empty() ? "" : ";") + g.edge_id(e);
    return out;
}

void check_axiom1(const Indexed& g, AsyncVerdict& v)
{
    for (std::size_t u1 = 0; u1 < g.edge_count(); ++u1) {
        for (int u2 : g.out(g.tgt(static_cast<int>(u1)))) {
            for (const auto& [v1, v2] : g.partners(static_cast<int>(u1), u2)) {
                if (u2 != v2 && static_cast<int>(u1) == v1) {
                    v.axiom1 = false;
                    v.diagnostics.push_back("axiom 1 fails at " + show_path(g, {static_cast<int>(u1), u2}));
                    return;
                }
            }
        }
    }
}

void check_axiom2(const Indexed& g, AsyncVerdict& v)
{
    for (std::size_t ui = 0; ui < g.edge_count(); ++ui) {
        const int u = static_cast<int>(ui);
        for (int u1 : g.out(g.tgt(u))) {
            for (const auto& [v1, v2] : g.partners(u, u1)) {
                for (int u1b : g.out(g.tgt(u))) {
                    for (const auto& [v1b, v2b] : g.partners(u, u1b)) {
                        if ((u1 == u1b) != (v1 == v1b)) {
                            v.axiom2 = false;
                            v.diagnostics.push_back("axiom 2 fails at " + show_path(g, {u, u1}) + " and " +
                                                    show_path(g, {u, u1b}));
                            return;
                        }
                    }
                }
            }
        }
    }
}

// Forward cube: a bottom vertex C below both upper middle vertices forces a
// top vertex above both lower middle vertices.
void check_cube_forward(const Indexed& g, AsyncVerdict& v)
{
    for (std::size_t ci = 0; ci < g.edge_count(); ++ci) {
        const int c = static_cast<int>(ci);
        for (int l : g.out(g.tgt(c))) {
            for (int r : g.out(g.tgt(c))) {
                if (l == r) continue;
                for (const auto& [u1, u2] : g.partners(c, l)) {
                    for (const auto& [v1, v2] : g.partners(c, r)) {
                        if (u1 == v1) continue;
                        for (int u3 : g.out(g.tgt(l))) {
                            for (int v3 : g.out(g.tgt(r))) {
                                if (g.tgt(u3) != g.tgt(v3) || !g.commutes(l, u3, r, v3)) continue;
                                bool found = false;
                                for (int lp : g.out(g.tgt(u1))) {
                                    if (lp == u2) continue;
                                    for (int rp : g.out(g.tgt(v1))) {
                                        if (rp == v2 || g.tgt(lp) != g.tgt(rp)) continue;
                                        auto cp = g.edge(g.tgt(lp), g.tgt(u3));
                                        if (cp && g.eq(u1, lp, v1, rp) && g.eq(u2, u3, lp, *cp) &&
                                            g.eq(v2, v3, rp, *cp)) {
                                            found = true;
                                        }
                                    }
                                }
                                if (!found) {
                                    v.cube_forward = false;
                                    v.diagnostics.push_back("cube (forward) fails below " + g.node_id(g.tgt(u3)) +
                                                            " through " + g.node_id(g.tgt(c)));
                                    return;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

void check_cube_backward(const Indexed& g, AsyncVerdict& v)
{
    for (std::size_t u1i = 0; u1i < g.edge_count(); ++u1i) {
        const int u1 = static_cast<int>(u1i);
        for (int lp : g.out(g.tgt(u1))) {
            for (const auto& [v1, rp] : g.partners(u1, lp)) {
                for (int u2 : g.out(g.tgt(u1))) {
                    if (u2 == lp) continue;
                    for (int v2 : g.out(g.tgt(v1))) {
                        if (v2 == rp) continue;
                        for (int cp : g.out(g.tgt(lp))) {
                            auto u3 = g.edge(g.tgt(u2), g.tgt(cp));
                            auto v3 = g.edge(g.tgt(v2), g.tgt(cp));
                            if (!u3 || !v3 || !g.eq(u2, *u3, lp, cp) || !g.eq(v2, *v3, rp, cp)) continue;
                            bool found = false;
                            for (int c : g.out(g.src(u1))) {
                                if (c == u1 || c == v1) continue;
                                auto l = g.edge(g.tgt(c), g.tgt(u2));
                                auto r = g.edge(g.tgt(c), g.tgt(v2));
                                if (l && r && g.eq(u1, u2, c, *l) && g.eq(v1, v2, c, *r) &&
                                    g.eq(*l, *u3, *r, *v3)) {
                                    found = true;
                                }
                            }
                            if (!found) {
                                v.cube_backward = false;
                                v.diagnostics.push_back("cube (stability) fails above " + g.node_id(g.src(u1)) +
                                                        " below " + g.node_id(g.tgt(cp)));
                                return;
                            }
                        }
                    }
                }
            }
        }
    }
}

void check_coherence(const Indexed& g, AsyncVerdict& v)
{
    for (std::size_t ci = 0; ci < g.edge_count(); ++ci) {
        const int c = static_cast<int>(ci);
        for (int l : g.out(g.tgt(c))) {
            for (int r : g.out(g.tgt(c))) {
                if (l == r) continue;
                for (const auto& [u1, u2] : g.partners(c, l)) {
                    for (const auto& [v1, v2] : g.partners(c, r)) {
                        if (u1 == v1) continue;
                        for (int a : g.out(g.tgt(u1))) {
                            if (a == u2) continue;
                            for (const auto& [v1b, ab] : g.partners(u1, a)) {
                                if (v1b != v1 || ab == v2) continue;
                                bool found = false;
                                for (int q : g.out(g.tgt(a))) {
                                    auto p = g.edge(g.tgt(u2), g.tgt(q));
                                    auto pp = g.edge(g.tgt(v2), g.tgt(q));
                                    if (p && pp && g.eq(u2, *p, a, q) && g.eq(v2, *pp, ab, q)) found = true;
                                }
                                if (!found) {
                                    v.coherence = false;
                                    v.diagnostics.push_back("coherence fails above " + g.node_id(g.src(c)) +
                                                            " at " + g.node_id(g.tgt(a)));
                                    return;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

}  // namespace

void check_async_graph(const AsyncGraph& a)
{
    std::map<std::string, int> node;
    for (const auto& n : a.nodes) {
        if (n.empty()) throw InputError("node ids must be nonempty");
        if (!node.emplace(n, static_cast<int>(node.size())).second) throw InputError("duplicate node '" + n + "'");
    }
    if (!node.count(a.origin)) throw InputError("origin '" + a.origin + "' is not a node");
    std::map<std::string, const AsyncGraph::Edge*> edge;
    std::set<std::pair<std::string, std::string>> ends;
    std::vector<std::vector<int>> succ(a.nodes.size());
    std::vector<int> indegree(a.nodes.size(), 0);
    for (const auto& e : a.edges) {
        if (!edge.emplace(e.id, &e).second) throw InputError("duplicate edge '" + e.id + "'");
        if (!node.count(e.src) || !node.count(e.tgt)) throw InputError("edge '" + e.id + "' has a missing endpoint");
        if (e.src == e.tgt) throw InputError("edge '" + e.id + "' is a loop");
        if (!ends.insert({e.src, e.tgt}).second) throw InputError("parallel edges into '" + e.tgt + "'");
        succ[node[e.src]].push_back(node[e.tgt]);
        ++indegree[node[e.tgt]];
    }

    std::deque<int> ready;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        const int x = ready.front();
        ready.pop_front();
        ++seen;
        for (int y : succ[x]) {
            if (--indegree[y] == 0) ready.push_back(y);
        }
    }
    if (seen != a.nodes.size()) throw InputError("the graph has a cycle");

    std::vector<bool> reached(a.nodes.size(), false);
    std::vector<int> stack{node[a.origin]};
    reached[node[a.origin]] = true;
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int y : succ[x]) {
            if (!reached[y]) {
                reached[y] = true;
                stack.push_back(y);
            }
        }
    }
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        if (!reached[i]) throw InputError("node '" + a.nodes[i] + "' is unreachable from the origin");
    }

    auto path_ends = [&](const AsyncGraph::Path2& p) {
        auto first = edge.find(p[0]);
        auto second = edge.find(p[1]);
        if (first == edge.end() || second == edge.end()) {
            throw InputError("square mentions unknown edge in " + p[0] + ";" + p[1]);
        }
        if (first->second->tgt != second->second->src) throw InputError("square path " + p[0] + ";" + p[1] + " is broken");
        return std::make_pair(first->second->src, second->second->tgt);
    };
    for (const auto& [p, q] : a.squares) {
        if (path_ends(p) != path_ends(q)) {
            throw InputError("square " + p[0] + ";" + p[1] + " ~ " + q[0] + ";" + q[1] + " is not coinitial and cofinal");
        }
    }
}

PathClasses origin_path_classes(const AsyncGraph& a, std::size_t path_limit)
{
    const Indexed g(a);
    PathClasses out;
    std::map<std::vector<int>, int> index;
    out.paths.push_back({});
    index[{}] = 0;
    for (std::size_t i = 0; i < out.paths.size(); ++i) {
        const int end = out.paths[i].empty() ? g.node(a.origin) : g.tgt(out.paths[i].back());
        for (int e : g.out(end)) {
            auto next = out.paths[i];
            next.push_back(e);
            index[next] = static_cast<int>(out.paths.size());
            out.paths.push_back(std::move(next));
            if (out.paths.size() > path_limit) {
                throw CeilingError("more than " + std::to_string(path_limit) + " origin paths");
            }
        }
    }

    UnionFind uf(out.paths.size());
    for (std::size_t i = 0; i < out.paths.size(); ++i) {
        const auto& w = out.paths[i];
        for (std::size_t k = 0; k + 1 < w.size(); ++k) {
            for (const auto& [x, y] : g.partners(w[k], w[k + 1])) {
                auto swapped = w;
                swapped[k] = x;
                swapped[k + 1] = y;
                uf.unite(static_cast<int>(i), index.at(swapped));
            }
        }
    }
    std::map<int, int> slot;
    for (std::size_t i = 0; i < out.paths.size(); ++i) {
        auto [it, fresh] = slot.emplace(uf.root(static_cast<int>(i)), static_cast<int>(slot.size()));
        out.class_of.push_back(it->second);
    }
    out.class_count = slot.size();
    return out;
}

AsyncVerdict validate_async_graph(const AsyncGraph& a, bool weak)
{
    const Indexed g(a);
    AsyncVerdict v;
    check_axiom1(g, v);
    check_axiom2(g, v);
    check_cube_forward(g, v);
    check_cube_backward(g, v);
    check_coherence(g, v);

    const auto classes = origin_path_classes(a);
    std::map<int, int> class_at;
    for (std::size_t i = 0; i < classes.paths.size(); ++i) {
        const auto& w = classes.paths[i];
        const int end = w.empty() ? g.node(a.origin) : g.tgt(w.back());
        auto [it, fresh] = class_at.emplace(end, classes.class_of[i]);
        if (!fresh && it->second != classes.class_of[i] && v.all_cofinal_equivalent) {
            v.all_cofinal_equivalent = false;
            v.diagnostics.push_back("inequivalent origin paths end at " + g.node_id(end));
        }
    }

    v.ok = v.axiom1 && v.axiom2 && v.cube_forward && v.coherence && (weak || v.cube_backward);
    return v;
}

FiniteDomain async_domain(const AsyncGraph& a)
{
    const auto verdict = validate_async_graph(a, true);
    if (!verdict.ok || !verdict.all_cofinal_equivalent) {
        throw InputError("path order needs a weak prime async graph" +
                         (verdict.diagnostics.empty() ? std::string() : ": " + verdict.diagnostics.front()));
    }
    const auto classes = origin_path_classes(a);
    std::map<std::string, int> edge;
    for (std::size_t e = 0; e < a.edges.size(); ++e) edge[a.edges[e].id] = static_cast<int>(e);

    std::vector<std::string> endpoint(classes.class_count);
    for (std::size_t i = 0; i < classes.paths.size(); ++i) {
        const auto& w = classes.paths[i];
        endpoint[classes.class_of[i]] = w.empty() ? a.origin : a.edges[w.back()].tgt;
    }
    std::map<std::string, int> sharing;
    for (const auto& n : endpoint) ++sharing[n];
    std::map<std::string, int> seen;
    std::vector<std::string> names;
    for (const auto& n : endpoint) {
        names.push_back(sharing[n] == 1 ? n : n + "/" + std::to_string(seen[n]++));
    }

    std::set<std::pair<int, int>> below;
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < classes.paths.size(); ++i) index[classes.paths[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < classes.paths.size(); ++i) {
        auto prefix = classes.paths[i];
        if (prefix.empty()) continue;
        prefix.pop_back();
        below.insert({classes.class_of[index.at(prefix)], classes.class_of[i]});
    }
    return FiniteDomain(std::move(names), {below.begin(), below.end()});
}

AsyncGraph hasse_as_async(const FiniteDomain& d)
{
    if (!d.bottom()) throw InputError("a domain needs a least element");
    AsyncGraph a;
    a.nodes = d.names();
    a.origin = d.name(*d.bottom());
    auto id = [&](int x, int y) { return d.name(x) + "->" + d.name(y); };
    for (const auto& [x, y] : d.cover_pairs()) a.edges.push_back({id(x, y), d.name(x), d.name(y)});

    const int n = static_cast<int>(d.size());
    for (int x = 0; x < n; ++x) {
        std::map<int, std::vector<AsyncGraph::Path2>> by_target;
        for (int y : d.upper_covers(x)) {
            for (int z : d.upper_covers(y)) by_target[z].push_back({id(x, y), id(y, z)});
        }
        for (const auto& [z, paths] : by_target) {
            for (std::size_t i = 0; i < paths.size(); ++i) {
                for (std::size_t j = i + 1; j < paths.size(); ++j) a.squares.push_back({paths[i], paths[j]});
            }
        }
    }
    return a;
}

}  // namespace weavent
