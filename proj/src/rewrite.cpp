#include "weavent/rewrite.hpp"

#include <algorithm>
#include <map>
#include <numeric>
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

std::vector<int> inverse_of_injection(const std::vector<int>& f, std::size_t range)
{
    std::vector<int> inv(range, -1);
    for (std::size_t x = 0; x < f.size(); ++x) inv[f[x]] = static_cast<int>(x);
    return inv;
}

}  // namespace

std::string Derivation::rule_sequence() const
{
    if (steps.empty()) return "ε";
    std::string out;
    for (const auto& s : steps) {
        if (!out.empty()) out += ";";
        out += s.rule->name;
    }
    return out;
}

void check_rule(const Rule& rule, const TypedGraph& type_graph)
{
    const std::string where = "rule '" + rule.name + "': ";
    try {
        check_typed(rule.lhs, type_graph);
        check_typed(rule.interface, type_graph);
        check_typed(rule.rhs, type_graph);
    } catch (const InputError& e) {
        throw InputError(where + e.what());
    }
    if (!is_morphism(rule.l, rule.interface, rule.lhs)) throw InputError(where + "left leg is not a morphism");
    if (!is_morphism(rule.r, rule.interface, rule.rhs)) throw InputError(where + "right leg is not a morphism");
    if (!is_injective(rule.l, rule.lhs)) throw InputError(where + "left leg must be injective");
    if (is_surjective(rule.l, rule.lhs)) throw InputError(where + "rule must delete something");
}

void check_grammar(const Grammar& g)
{
    check_typed(g.type_graph, g.type_graph);
    check_typed(g.start, g.type_graph);
    std::set<std::string> names;
    for (const auto& r : g.rules) {
        if (!names.insert(r->name).second) throw InputError("duplicate rule name '" + r->name + "'");
        check_rule(*r, g.type_graph);
    }
}

std::vector<GraphMorphism> find_matches(const Rule& rule, const TypedGraph& g)
{
    return find_morphisms(rule.lhs, g);
}

std::optional<DirectDerivation> apply_rule(const TypedGraph& g, const std::shared_ptr<const Rule>& rule,
                                           const GraphMorphism& match)
{
    const Rule& p = *rule;
    if (!is_morphism(match, p.lhs, g)) throw InputError("match of rule '" + p.name + "' is not a typed morphism");

    std::vector<bool> kept_node(p.lhs.nodes.size(), false);
    std::vector<bool> kept_edge(p.lhs.edges.size(), false);
    for (int x : p.l.node) kept_node[x] = true;
    for (int x : p.l.edge) kept_edge[x] = true;

    // Identification: a deleted item may not share its image with another item.
    for (std::size_t x = 0; x < kept_node.size(); ++x) {
        if (kept_node[x]) continue;
        for (std::size_t y = 0; y < kept_node.size(); ++y) {
            if (y != x && match.node[y] == match.node[x]) return std::nullopt;
        }
    }
    for (std::size_t x = 0; x < kept_edge.size(); ++x) {
        if (kept_edge[x]) continue;
        for (std::size_t y = 0; y < kept_edge.size(); ++y) {
            if (y != x && match.edge[y] == match.edge[x]) return std::nullopt;
        }
    }

    std::vector<bool> gone_node(g.nodes.size(), false);
    std::vector<bool> gone_edge(g.edges.size(), false);
    for (std::size_t x = 0; x < kept_node.size(); ++x) {
        if (!kept_node[x]) gone_node[match.node[x]] = true;
    }
    for (std::size_t x = 0; x < kept_edge.size(); ++x) {
        if (!kept_edge[x]) gone_edge[match.edge[x]] = true;
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (!gone_edge[e] && (gone_node[g.edges[e].src] || gone_node[g.edges[e].tgt])) return std::nullopt;
    }

    DirectDerivation d;
    d.rule = rule;
    d.source = g;
    d.match_l = match;

    std::vector<int> to_context(g.nodes.size(), -1);
    for (std::size_t x = 0; x < g.nodes.size(); ++x) {
        if (gone_node[x]) continue;
        to_context[x] = d.context.add_node(g.nodes[x].id, g.nodes[x].type);
        d.into_source.node.push_back(static_cast<int>(x));
    }
    std::vector<int> to_context_edge(g.edges.size(), -1);
    for (std::size_t x = 0; x < g.edges.size(); ++x) {
        if (gone_edge[x]) continue;
        const auto& e = g.edges[x];
        to_context_edge[x] = d.context.add_edge(e.id, e.type, to_context[e.src], to_context[e.tgt]);
        d.into_source.edge.push_back(static_cast<int>(x));
    }
    for (int k : p.l.node) d.match_k.node.push_back(to_context[match.node[k]]);
    for (int k : p.l.edge) d.match_k.edge.push_back(to_context_edge[match.edge[k]]);

    // Pushout of context <- K -> R as a quotient of the disjoint union.
    const TypedGraph& ctx = d.context;
    const int dn = static_cast<int>(ctx.nodes.size());
    const int de = static_cast<int>(ctx.edges.size());
    UnionFind nodes(ctx.nodes.size() + p.rhs.nodes.size());
    UnionFind edges(ctx.edges.size() + p.rhs.edges.size());
    for (std::size_t k = 0; k < p.interface.nodes.size(); ++k) nodes.unite(d.match_k.node[k], dn + p.r.node[k]);
    for (std::size_t k = 0; k < p.interface.edges.size(); ++k) edges.unite(d.match_k.edge[k], de + p.r.edge[k]);

    std::set<std::string> used_ids;
    auto fresh = [&](const std::string& base) {
        std::string id = p.name + "." + base;
        while (used_ids.count(id)) id += "'";
        used_ids.insert(id);
        return id;
    };

    // Classes containing context items come first, in context order, and
    // keep the least context id.
    std::vector<int> node_class(nodes.parent.size(), -1);
    std::vector<std::string> class_ids;
    std::vector<std::string> class_types;
    std::map<int, int> root_to_class;
    for (int x = 0; x < static_cast<int>(nodes.parent.size()); ++x) {
        const int root = nodes.root(x);
        auto [it, created] = root_to_class.emplace(root, static_cast<int>(class_ids.size()));
        if (created) {
            class_ids.emplace_back();
            class_types.push_back(x < dn ? ctx.nodes[x].type : p.rhs.nodes[x - dn].type);
        }
        node_class[x] = it->second;
        if (x < dn) {
            auto& id = class_ids[it->second];
            if (id.empty() || ctx.nodes[x].id < id) id = ctx.nodes[x].id;
        }
    }
    for (const auto& id : class_ids) {
        if (!id.empty()) used_ids.insert(id);
    }
    for (int x = dn; x < static_cast<int>(nodes.parent.size()); ++x) {
        auto& id = class_ids[node_class[x]];
        if (id.empty()) id = fresh(p.rhs.nodes[x - dn].id);
    }
    for (std::size_t c = 0; c < class_ids.size(); ++c) d.target.add_node(class_ids[c], class_types[c]);

    std::vector<int> edge_class(edges.parent.size(), -1);
    std::vector<int> edge_member;
    std::vector<std::string> edge_ids;
    root_to_class.clear();
    used_ids.clear();
    for (int x = 0; x < static_cast<int>(edges.parent.size()); ++x) {
        const int root = edges.root(x);
        auto [it, created] = root_to_class.emplace(root, static_cast<int>(edge_ids.size()));
        if (created) {
            edge_ids.emplace_back();
            edge_member.push_back(x);
        }
        edge_class[x] = it->second;
        if (x < de) {
            auto& id = edge_ids[it->second];
            if (id.empty() || ctx.edges[x].id < id) id = ctx.edges[x].id;
        }
    }
    for (const auto& id : edge_ids) {
        if (!id.empty()) used_ids.insert(id);
    }
    for (int x = de; x < static_cast<int>(edges.parent.size()); ++x) {
        auto& id = edge_ids[edge_class[x]];
        if (id.empty()) id = fresh(p.rhs.edges[x - de].id);
    }
    for (std::size_t c = 0; c < edge_ids.size(); ++c) {
        const int x = edge_member[c];
        const auto& e = x < de ? ctx.edges[x] : p.rhs.edges[x - de];
        const int offset = x < de ? 0 : dn;
        d.target.add_edge(edge_ids[c], e.type, node_class[offset + e.src], node_class[offset + e.tgt]);
    }

    for (int x = 0; x < dn; ++x) d.into_target.node.push_back(node_class[x]);
    for (int x = 0; x < de; ++x) d.into_target.edge.push_back(edge_class[x]);
    for (std::size_t x = 0; x < p.rhs.nodes.size(); ++x) d.match_r.node.push_back(node_class[dn + x]);
    for (std::size_t x = 0; x < p.rhs.edges.size(); ++x) d.match_r.edge.push_back(edge_class[de + x]);
    return d;
}

bool verify_pushouts(const DirectDerivation& d)
{
    const Rule& p = *d.rule;
    return is_pushout(p.interface, p.lhs, d.context, d.source, p.l, d.match_k, d.match_l, d.into_source) &&
           is_pushout(p.interface, p.rhs, d.context, d.target, p.r, d.match_k, d.match_r, d.into_target);
}

bool is_fusion_safe(const DirectDerivation& d)
{
    const Rule& p = *d.rule;
    const auto n = p.interface.nodes.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (d.match_l.node[p.l.node[a]] == d.match_l.node[p.l.node[b]] && p.r.node[a] == p.r.node[b]) return false;
        }
    }
    const auto m = p.interface.edges.size();
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            if (d.match_l.edge[p.l.edge[a]] == d.match_l.edge[p.l.edge[b]] && p.r.edge[a] == p.r.edge[b]) return false;
        }
    }
    return true;
}

namespace {

// First morphism f: from -> via_domain with via ∘ f = target, if any.
std::optional<GraphMorphism> lift_through(const TypedGraph& from, const TypedGraph& via_domain,
                                          const GraphMorphism& via, const GraphMorphism& target)
{
    std::vector<std::vector<int>> node_options(from.nodes.size());
    for (std::size_t x = 0; x < from.nodes.size(); ++x) {
        for (std::size_t y = 0; y < via.node.size(); ++y) {
            if (via.node[y] == target.node[x]) node_options[x].push_back(static_cast<int>(y));
        }
        if (node_options[x].empty()) return std::nullopt;
    }
    GraphMorphism f;
    f.node.assign(from.nodes.size(), -1);
    f.edge.assign(from.edges.size(), -1);

    auto place_edges = [&](auto&& self, std::size_t i) -> bool {
        if (i == from.edges.size()) return true;
        const auto& e = from.edges[i];
        for (std::size_t y = 0; y < via.edge.size(); ++y) {
            const auto& c = via_domain.edges[y];
            if (via.edge[y] != target.edge[i] || c.src != f.node[e.src] || c.tgt != f.node[e.tgt]) continue;
            f.edge[i] = static_cast<int>(y);
            if (self(self, i + 1)) return true;
        }
        return false;
    };
    auto place_nodes = [&](auto&& self, std::size_t i) -> bool {
        if (i == from.nodes.size()) return place_edges(place_edges, 0);
        for (int y : node_options[i]) {
            f.node[i] = y;
            if (self(self, i + 1)) return true;
        }
        return false;
    };
    if (!place_nodes(place_nodes, 0)) return std::nullopt;
    return f;
}

}  // namespace

std::optional<IndependencePair> sequential_independence(const DirectDerivation& d1, const DirectDerivation& d2)
{
    if (!(d1.target == d2.source)) throw InputError("steps are not consecutive");
    IndependencePair out;

    const auto back_n = inverse_of_injection(d2.into_source.node, d2.source.nodes.size());
    const auto back_e = inverse_of_injection(d2.into_source.edge, d2.source.edges.size());
    for (int y : d1.match_r.node) {
        if (back_n[y] < 0) return std::nullopt;
        out.produced_kept.node.push_back(back_n[y]);
    }
    for (int y : d1.match_r.edge) {
        if (back_e[y] < 0) return std::nullopt;
        out.produced_kept.edge.push_back(back_e[y]);
    }

    auto early = lift_through(d2.rule->lhs, d1.context, d1.into_target, d2.match_l);
    if (!early) return std::nullopt;
    out.consumed_early = std::move(*early);
    return out;
}

std::pair<DirectDerivation, DirectDerivation> interchange(const DirectDerivation& d1, const DirectDerivation& d2,
                                                          const IndependencePair& pair)
{
    const Rule& p1 = *d1.rule;
    const Rule& p2 = *d2.rule;
    const bool witnessed = is_morphism(pair.produced_kept, p1.rhs, d2.context) &&
                           is_morphism(pair.consumed_early, p2.lhs, d1.context) &&
                           compose(d2.into_source, pair.produced_kept) == d1.match_r &&
                           compose(d1.into_target, pair.consumed_early) == d2.match_l;
    if (!witnessed) throw InputError("pair does not witness sequential independence");

    auto first = apply_rule(d1.source, d2.rule, compose(d1.into_source, pair.consumed_early));
    if (!first) throw InputError("second rule is not applicable first");

    const auto back_n = inverse_of_injection(first->into_source.node, first->source.nodes.size());
    const auto back_e = inverse_of_injection(first->into_source.edge, first->source.edges.size());
    GraphMorphism moved;
    for (int y : d1.match_l.node) {
        if (back_n[y] < 0) throw InputError("first match is destroyed by the swapped step");
        moved.node.push_back(first->into_target.node[back_n[y]]);
    }
    for (int y : d1.match_l.edge) {
        if (back_e[y] < 0) throw InputError("first match is destroyed by the swapped step");
        moved.edge.push_back(first->into_target.edge[back_e[y]]);
    }
    auto second = apply_rule(first->target, d1.rule, moved);
    if (!second) throw InputError("first rule is not applicable after the swap");
    return {std::move(*first), std::move(*second)};
}

namespace {

// Colimit of the diagram G0 <- D1 -> G1 <- D2 -> ... as item classes.
struct Colimit {
    std::vector<int> node_offset;  // per source graph G_k
    std::vector<int> edge_offset;
    std::vector<int> node_class;
    std::vector<int> edge_class;
    std::vector<std::string> node_type;
    std::vector<std::string> edge_type;
    std::vector<int> edge_src;
    std::vector<int> edge_tgt;

    int node(int k, int x) const { return node_class[node_offset[k] + x]; }
    int edge(int k, int x) const { return edge_class[edge_offset[k] + x]; }
};

Colimit colimit_of(const Derivation& d)
{
    std::vector<const TypedGraph*> graphs{&d.start};
    for (const auto& s : d.steps) {
        graphs.push_back(&s.context);
        graphs.push_back(&s.target);
    }
    std::vector<int> n_off, e_off;
    int nn = 0, ne = 0;
    for (const auto* g : graphs) {
        n_off.push_back(nn);
        e_off.push_back(ne);
        nn += static_cast<int>(g->nodes.size());
        ne += static_cast<int>(g->edges.size());
    }
    UnionFind nodes(nn), edges(ne);
    for (std::size_t k = 0; k < d.steps.size(); ++k) {
        const auto& s = d.steps[k];
        const std::size_t before = 2 * k, ctx = 2 * k + 1, after = 2 * k + 2;
        for (std::size_t x = 0; x < s.context.nodes.size(); ++x) {
            nodes.unite(n_off[ctx] + x, n_off[before] + s.into_source.node[x]);
            nodes.unite(n_off[ctx] + x, n_off[after] + s.into_target.node[x]);
        }
        for (std::size_t x = 0; x < s.context.edges.size(); ++x) {
            edges.unite(e_off[ctx] + x, e_off[before] + s.into_source.edge[x]);
            edges.unite(e_off[ctx] + x, e_off[after] + s.into_target.edge[x]);
        }
    }

    Colimit c;
    std::map<int, int> slot;
    c.node_class.resize(nn);
    c.edge_class.resize(ne);
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        for (std::size_t x = 0; x < graphs[g]->nodes.size(); ++x) {
            auto [it, created] = slot.emplace(nodes.root(n_off[g] + x), static_cast<int>(c.node_type.size()));
            if (created) c.node_type.push_back(graphs[g]->nodes[x].type);
            c.node_class[n_off[g] + x] = it->second;
        }
    }
    slot.clear();
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        for (std::size_t x = 0; x < graphs[g]->edges.size(); ++x) {
            auto [it, created] = slot.emplace(edges.root(e_off[g] + x), static_cast<int>(c.edge_type.size()));
            const auto& e = graphs[g]->edges[x];
            if (created) {
                c.edge_type.push_back(e.type);
                c.edge_src.push_back(c.node_class[n_off[g] + e.src]);
                c.edge_tgt.push_back(c.node_class[n_off[g] + e.tgt]);
            }
            c.edge_class[e_off[g] + x] = it->second;
        }
    }
    // Only the source graphs G_k are addressed from outside.
    for (std::size_t k = 0; k <= d.steps.size(); ++k) {
        c.node_offset.push_back(n_off[2 * k]);
        c.edge_offset.push_back(e_off[2 * k]);
    }
    return c;
}

// Partial bijection between colimit items, grown by forced assignments.
struct ItemBijection {
    std::vector<int> fwd_node, back_node, fwd_edge, back_edge;

    bool link(std::vector<int>& fwd, std::vector<int>& back, int a, int b)
    {
        if (fwd[a] == b && back[b] == a) return true;
        if (fwd[a] != -1 || back[b] != -1) return false;
        fwd[a] = b;
        back[b] = a;
        return true;
    }
    bool node(const Colimit& ca, const Colimit& cb, int a, int b)
    {
        return ca.node_type[a] == cb.node_type[b] && link(fwd_node, back_node, a, b);
    }
    bool edge(const Colimit& ca, const Colimit& cb, int a, int b)
    {
        return ca.edge_type[a] == cb.edge_type[b] && link(fwd_edge, back_edge, a, b);
    }
};

bool link_step(ItemBijection& xi, const Colimit& ca, const Colimit& cb, const DirectDerivation& sa,
               const DirectDerivation& sb, int i, int j)
{
    for (std::size_t y = 0; y < sa.match_l.node.size(); ++y) {
        if (!xi.node(ca, cb, ca.node(i, sa.match_l.node[y]), cb.node(j, sb.match_l.node[y]))) return false;
    }
    for (std::size_t y = 0; y < sa.match_l.edge.size(); ++y) {
        if (!xi.edge(ca, cb, ca.edge(i, sa.match_l.edge[y]), cb.edge(j, sb.match_l.edge[y]))) return false;
    }
    for (std::size_t y = 0; y < sa.match_r.node.size(); ++y) {
        if (!xi.node(ca, cb, ca.node(i + 1, sa.match_r.node[y]), cb.node(j + 1, sb.match_r.node[y]))) return false;
    }
    for (std::size_t y = 0; y < sa.match_r.edge.size(); ++y) {
        if (!xi.edge(ca, cb, ca.edge(i + 1, sa.match_r.edge[y]), cb.edge(j + 1, sb.match_r.edge[y]))) return false;
    }
    return true;
}

}  // namespace

std::optional<std::vector<int>> equivalent_traces(const Derivation& a, const Derivation& b)
{
    if (!(a.start == b.start)) throw InputError("derivations start from different graphs");
    if (a.size() != b.size()) return std::nullopt;
    const int n = static_cast<int>(a.size());
    {
        std::vector<std::string> ra, rb;
        for (const auto& s : a.steps) ra.push_back(s.rule->name);
        for (const auto& s : b.steps) rb.push_back(s.rule->name);
        std::sort(ra.begin(), ra.end());
        std::sort(rb.begin(), rb.end());
        if (ra != rb) return std::nullopt;
    }
    const Colimit ca = colimit_of(a);
    const Colimit cb = colimit_of(b);
    if (ca.node_type.size() != cb.node_type.size() || ca.edge_type.size() != cb.edge_type.size()) return std::nullopt;

    ItemBijection start;
    start.fwd_node.assign(ca.node_type.size(), -1);
    start.back_node.assign(cb.node_type.size(), -1);
    start.fwd_edge.assign(ca.edge_type.size(), -1);
    start.back_edge.assign(cb.edge_type.size(), -1);
    for (std::size_t x = 0; x < a.start.nodes.size(); ++x) {
        if (!start.node(ca, cb, ca.node(0, static_cast<int>(x)), cb.node(0, static_cast<int>(x)))) return std::nullopt;
    }
    for (std::size_t x = 0; x < a.start.edges.size(); ++x) {
        if (!start.edge(ca, cb, ca.edge(0, static_cast<int>(x)), cb.edge(0, static_cast<int>(x)))) return std::nullopt;
    }

    std::vector<int> perm(n, -1);
    std::vector<bool> used(n, false);
    auto search = [&](auto&& self, int i, const ItemBijection& xi) -> bool {
        if (i == n) {
            auto total = [](const std::vector<int>& v) {
                return std::none_of(v.begin(), v.end(), [](int x) { return x < 0; });
            };
            if (!total(xi.fwd_node) || !total(xi.fwd_edge)) return false;
            for (std::size_t e = 0; e < ca.edge_type.size(); ++e) {
                const int f = xi.fwd_edge[e];
                if (xi.fwd_node[ca.edge_src[e]] != cb.edge_src[f] || xi.fwd_node[ca.edge_tgt[e]] != cb.edge_tgt[f]) {
                    return false;
                }
            }
            return true;
        }
        for (int j = 0; j < n; ++j) {
            if (used[j] || b.steps[j].rule->name != a.steps[i].rule->name) continue;
            ItemBijection next = xi;
            if (!link_step(next, ca, cb, a.steps[i], b.steps[j], i, j)) continue;
            perm[i] = j;
            used[j] = true;
            if (self(self, i + 1, next)) return true;
            used[j] = false;
        }
        return false;
    };
    if (search(search, 0, start)) return perm;
    return std::nullopt;
}

TraceSpace trace_space(const Grammar& g, std::size_t depth, bool fusion_safe, std::size_t ceiling)
{
    std::vector<Derivation> reps{Derivation{g.start, {}}};
    std::vector<std::string> keys{""};
    std::set<std::pair<int, int>> covers;
    std::vector<int> frontier{0};

    auto key_of = [](const Derivation& d) {
        std::vector<std::string> names;
        for (const auto& s : d.steps) names.push_back(s.rule->name);
        std::sort(names.begin(), names.end());
        std::string key;
        for (const auto& nm : names) key += nm + ",";
        return key + "|" + graph_signature(d.target());
    };

    for (std::size_t level = 0; level < depth && !frontier.empty(); ++level) {
        std::vector<int> next;
        for (int c : frontier) {
            const TypedGraph current = reps[c].target();
            for (const auto& rule : g.rules) {
                for (const auto& m : find_matches(*rule, current)) {
                    auto step = apply_rule(current, rule, m);
                    if (!step || (fusion_safe && !is_fusion_safe(*step))) continue;
                    Derivation ext = reps[c];
                    ext.steps.push_back(std::move(*step));
                    const std::string key = key_of(ext);
                    int found = -1;
                    for (int o : next) {
                        if (keys[o] == key && equivalent_traces(reps[o], ext)) {
                            found = o;
                            break;
                        }
                    }
                    if (found < 0) {
                        found = static_cast<int>(reps.size());
                        reps.push_back(std::move(ext));
                        keys.push_back(key);
                        next.push_back(found);
                        if (reps.size() > ceiling) {
                            throw CeilingError("trace enumeration exceeded " + std::to_string(ceiling) + " classes");
                        }
                    }
                    covers.emplace(c, found);
                }
            }
        }
        frontier = std::move(next);
    }

    std::vector<std::string> names;
    std::map<std::string, int> seen;
    for (const auto& r : reps) {
        std::string name = r.rule_sequence();
        int k = ++seen[name];
        if (k > 1) name += "#" + std::to_string(k);
        names.push_back(std::move(name));
    }
    std::vector<std::pair<int, int>> below(covers.begin(), covers.end());
    return {FiniteDomain(std::move(names), below, DomainKind::coherent), std::move(reps)};
}

FiniteDomain trace_domain(const Grammar& g, std::size_t depth, bool fusion_safe, std::size_t ceiling)
{
    return trace_space(g, depth, fusion_safe, ceiling).domain;
}

namespace {

std::string tuple_label(const EventStructure& es, EventSet u)
{
    std::string out = "(";
    bool first = true;
    for (int e : members(u)) {
        if (!first) out += ",";
        out += es.name(e);
        first = false;
    }
    return out + ")";
}

// Hitting sets of the minimal enablings: one pick per enabling, kept as sets.
std::vector<EventSet> pick_tuples(const std::vector<EventSet>& enablings)
{
    std::set<EventSet> tuples{0};
    for (EventSet c : enablings) {
        std::set<EventSet> grown;
        for (EventSet t : tuples) {
            for (int x : members(c)) grown.insert(t | bit(x));
        }
        tuples = std::move(grown);
    }
    return {tuples.begin(), tuples.end()};
}

}  // namespace

Grammar grammar_from_es(const EventStructure& es)
{
    if (es.kind() != ConflictKind::binary) throw InputError("grammar synthesis needs binary conflict");
    if (!classify(es).connected) throw InputError("grammar synthesis needs a connected structure");
    const int n = static_cast<int>(es.size());

    std::vector<std::vector<EventSet>> tuples(n);
    for (int e = 0; e < n; ++e) tuples[e] = pick_tuples(minimal_enablings(es, e));

    const auto& name = [&](int e) -> const std::string& { return es.name(e); };
    auto token_type = [&](int e) { return "i_" + name(e); };
    auto tuple_type = [&](EventSet u, int e) { return tuple_label(es, u) + "/" + name(e); };
    auto conflict_type = [&](int a, int b) { return name(std::min(a, b)) + "#" + name(std::max(a, b)); };
    const auto conflicts = es.conflict_pairs();

    Grammar g;
    TypedGraph t;
    for (int e = 0; e < n; ++e) {
        t.add_node(token_type(e), "");
        const int s = t.add_node(name(e), "");
        t.add_edge(name(e), "", s, s);
        for (EventSet u : tuples[e]) t.add_edge(tuple_type(u, e), "", s, s);
    }
    for (auto [a, b] : conflicts) t.add_node(conflict_type(a, b), "");
    g.type_graph = self_typed(std::move(t));

    auto add_loop_node = [](TypedGraph& graph, const std::string& id, const std::string& type,
                            const std::string& loop_type) {
        const int v = graph.add_node(id, type);
        graph.add_edge(id + ":" + loop_type, loop_type, v, v);
        return v;
    };
    auto tuple_node = [&](EventSet u, int e) { return "L_" + tuple_label(es, u) + "_" + name(e); };

    for (int e = 0; e < n; ++e) g.start.add_node("I_" + name(e), token_type(e));
    for (int e = 0; e < n; ++e) {
        add_loop_node(g.start, "S_" + name(e), name(e), name(e));
        for (EventSet u : tuples[e]) add_loop_node(g.start, tuple_node(u, e), name(e), tuple_type(u, e));
    }
    for (auto [a, b] : conflicts) g.start.add_node("C_" + conflict_type(a, b), conflict_type(a, b));

    for (int e = 0; e < n; ++e) {
        auto rule = std::make_shared<Rule>();
        rule->name = name(e);
        TypedGraph& lhs = rule->lhs;
        TypedGraph& mid = rule->interface;
        TypedGraph& rhs = rule->rhs;

        // The event's own node, with all its pending-enabling loops already fused.
        const std::string own = "M_" + name(e);
        for (TypedGraph* graph : {&lhs, &mid, &rhs}) {
            const int v = add_loop_node(*graph, own, name(e), name(e));
            for (EventSet u : tuples[e]) {
                graph->add_edge(own + ":" + tuple_type(u, e), tuple_type(u, e), v, v);
            }
        }
        // Nodes of other events whose enabling tuples mention e get fused.
        for (int f = 0; f < n; ++f) {
            if (f == e) continue;
            std::vector<EventSet> hit;
            for (EventSet u : tuples[f]) {
                if (contains(u, e)) hit.push_back(u);
            }
            if (hit.empty()) continue;
            const int merged = add_loop_node(rhs, "N_" + name(f), name(f), name(f));
            for (TypedGraph* graph : {&lhs, &mid}) add_loop_node(*graph, "S_" + name(f), name(f), name(f));
            for (EventSet u : hit) {
                rhs.add_edge("N_" + name(f) + ":" + tuple_type(u, f), tuple_type(u, f), merged, merged);
                for (TypedGraph* graph : {&lhs, &mid}) add_loop_node(*graph, tuple_node(u, f), name(f), tuple_type(u, f));
            }
        }
        lhs.add_node("I_" + name(e), token_type(e));
        for (auto [a, b] : conflicts) {
            if (a == e || b == e) lhs.add_node("C_" + conflict_type(a, b), conflict_type(a, b));
        }

        rule->l.node.resize(mid.nodes.size());
        rule->l.edge.resize(mid.edges.size());
        std::iota(rule->l.node.begin(), rule->l.node.end(), 0);
        std::iota(rule->l.edge.begin(), rule->l.edge.end(), 0);
        for (const auto& v : mid.nodes) {
            const bool stays = v.id == own;
            rule->r.node.push_back(stays ? rhs.node_index(own) : rhs.node_index("N_" + v.type));
        }
        for (const auto& x : mid.edges) {
            const auto& owner = mid.nodes[x.src];
            const std::string base = owner.id == own ? own : "N_" + owner.type;
            rule->r.edge.push_back(rhs.edge_index(base + ":" + x.type));
        }
        g.rules.push_back(std::move(rule));
    }
    check_grammar(g);
    return g;
}

}  // namespace weavent
