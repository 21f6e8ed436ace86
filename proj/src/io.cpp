#include "weavent/io.hpp"

#include <fstream>
#include <map>
#include <set>

#include "weavent/error.hpp"

namespace weavent {

namespace {

void require_object(const Json& j, const std::string& what, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {})
{
    if (!j.is_object()) throw InputError(what + " must be a JSON object");
    std::set<std::string> known;
    for (const char* k : required) {
        known.insert(k);
        if (!j.contains(k)) throw InputError(what + " is missing key '" + k + "'");
    }
    for (const char* k : optional) known.insert(k);
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw InputError(what + " has unknown key '" + key + "'");
    }
}

std::string text(const Json& j, const std::string& what)
{
    if (!j.is_string()) throw InputError(what + " must be a string");
    return j.get<std::string>();
}

std::vector<std::string> texts(const Json& j, const std::string& what)
{
    if (!j.is_array()) throw InputError(what + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& x : j) out.push_back(text(x, what + " entry"));
    return out;
}

const Json& array(const Json& j, const std::string& what)
{
    if (!j.is_array()) throw InputError(what + " must be an array");
    return j;
}

Json names_of(const EventStructure& es, EventSet s)
{
    Json out = Json::array();
    for (int e : members(s)) out.push_back(es.name(e));
    return out;
}

GraphMorphism morphism_from_json(const Json& j, const TypedGraph& from, const TypedGraph& to, const std::string& what)
{
    require_object(j, what, {}, {"nodes", "edges"});
    GraphMorphism f;
    f.node.assign(from.nodes.size(), -1);
    f.edge.assign(from.edges.size(), -1);
    auto fill = [&](const char* key, std::vector<int>& image, auto&& source_index, auto&& target_index) {
        if (!j.contains(key)) return;
        if (!j[key].is_object()) throw InputError(what + "." + key + " must be an object");
        for (const auto& [x, y] : j[key].items()) image[source_index(x)] = target_index(text(y, what + " image"));
    };
    fill("nodes", f.node, [&](const std::string& x) { return from.node_index(x); },
         [&](const std::string& y) { return to.node_index(y); });
    fill("edges", f.edge, [&](const std::string& x) { return from.edge_index(x); },
         [&](const std::string& y) { return to.edge_index(y); });
    for (int x : f.node) {
        if (x < 0) throw InputError(what + " leaves a node unmapped");
    }
    for (int x : f.edge) {
        if (x < 0) throw InputError(what + " leaves an edge unmapped");
    }
    return f;
}

Json morphism_to_json(const GraphMorphism& f, const TypedGraph& from, const TypedGraph& to)
{
    Json nodes = Json::object();
    Json edges = Json::object();
    for (std::size_t i = 0; i < f.node.size(); ++i) nodes[from.nodes[i].id] = to.nodes[f.node[i]].id;
    for (std::size_t i = 0; i < f.edge.size(); ++i) edges[from.edges[i].id] = to.edges[f.edge[i]].id;
    return Json{{"nodes", nodes}, {"edges", edges}};
}

}  // namespace

Json load_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

EventStructure es_from_json(const Json& j)
{
    require_object(j, "event structure", {"events", "enabling"}, {"conflict", "consistent"});
    if (j.contains("conflict") && j.contains("consistent")) {
        throw InputError("event structure gives both 'conflict' and 'consistent'");
    }
    auto names = texts(j["events"], "events");
    if (names.size() > kMaxEvents) throw InputError("at most 64 events are supported");
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!index.emplace(names[i], static_cast<int>(i)).second) throw InputError("duplicate event '" + names[i] + "'");
    }
    auto event = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw InputError("unknown event '" + name + "'");
        return it->second;
    };
    auto set = [&](const Json& x, const std::string& what) {
        EventSet s = 0;
        for (const auto& n : texts(x, what)) s |= bit(event(n));
        return s;
    };

    std::vector<EnablingGen> gens;
    for (const auto& g : array(j["enabling"], "enabling")) {
        require_object(g, "enabling entry", {"needs", "event"});
        gens.push_back({set(g["needs"], "needs"), event(text(g["event"], "enabled event"))});
    }

    if (j.contains("consistent")) {
        std::vector<EventSet> maximal;
        for (const auto& s : array(j["consistent"], "consistent")) maximal.push_back(set(s, "consistent set"));
        return EventStructure::with_consistency(std::move(names), std::move(maximal), std::move(gens));
    }
    std::vector<std::pair<int, int>> conflict;
    if (j.contains("conflict")) {
        for (const auto& p : array(j["conflict"], "conflict")) {
            auto pair = texts(p, "conflict pair");
            if (pair.size() != 2) throw InputError("conflict entries must be pairs");
            if (pair[0] == pair[1]) throw InputError("conflict must be irreflexive ('" + pair[0] + "')");
            conflict.emplace_back(event(pair[0]), event(pair[1]));
        }
    }
    return EventStructure::with_conflict(std::move(names), conflict, std::move(gens));
}

Json es_to_json(const EventStructure& es)
{
    Json out;
    out["events"] = es.names();
    if (es.kind() == ConflictKind::binary) {
        Json pairs = Json::array();
        for (const auto& [a, b] : es.conflict_pairs()) pairs.push_back({es.name(a), es.name(b)});
        out["conflict"] = pairs;
    } else {
        Json sets = Json::array();
        for (EventSet s : es.maximal_consistent()) sets.push_back(names_of(es, s));
        out["consistent"] = sets;
    }
    Json gens = Json::array();
    for (const auto& g : es.generators()) gens.push_back({{"needs", names_of(es, g.needs)}, {"event", es.name(g.event)}});
    out["enabling"] = gens;
    return out;
}

FiniteDomain domain_from_json(const Json& j)
{
    require_object(j, "domain", {"elements", "covers"}, {"kind"});
    auto names = texts(j["elements"], "elements");
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!index.emplace(names[i], static_cast<int>(i)).second) {
            throw InputError("duplicate element '" + names[i] + "'");
        }
    }
    auto element = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw InputError("unknown element '" + name + "'");
        return it->second;
    };
    std::vector<std::pair<int, int>> below;
    for (const auto& c : array(j["covers"], "covers")) {
        auto pair = texts(c, "cover");
        if (pair.size() != 2) throw InputError("covers must be pairs");
        below.emplace_back(element(pair[0]), element(pair[1]));
    }
    DomainKind kind = DomainKind::coherent;
    if (j.contains("kind")) {
        const auto k = text(j["kind"], "kind");
        if (k == "bounded_complete") {
            kind = DomainKind::bounded_complete;
        } else if (k != "coherent") {
            throw InputError("kind must be 'coherent' or 'bounded_complete'");
        }
    }
    FiniteDomain d(std::move(names), below, kind);
    const auto verdict = validate_domain(d);
    if (!verdict.ok) throw InputError("not a domain: " + verdict.reason);
    return d;
}

Json domain_to_json(const FiniteDomain& d)
{
    Json covers = Json::array();
    for (const auto& [x, y] : d.cover_pairs()) covers.push_back({d.name(x), d.name(y)});
    return Json{{"elements", d.names()},
                {"covers", covers},
                {"kind", d.kind() == DomainKind::coherent ? "coherent" : "bounded_complete"}};
}

TypedGraph graph_from_json(const Json& j)
{
    require_object(j, "graph", {"nodes"}, {"edges"});
    TypedGraph g;
    for (const auto& n : array(j["nodes"], "nodes")) {
        require_object(n, "node", {"id"}, {"type"});
        const auto id = text(n["id"], "node id");
        g.add_node(id, n.contains("type") ? text(n["type"], "node type") : id);
    }
    if (j.contains("edges")) {
        for (const auto& e : array(j["edges"], "edges")) {
            require_object(e, "edge", {"id", "src", "tgt"}, {"type"});
            const auto id = text(e["id"], "edge id");
            g.add_edge(id, e.contains("type") ? text(e["type"], "edge type") : id,
                       g.node_index(text(e["src"], "edge source")), g.node_index(text(e["tgt"], "edge target")));
        }
    }
    return g;
}

Json graph_to_json(const TypedGraph& g)
{
    Json nodes = Json::array();
    for (const auto& n : g.nodes) nodes.push_back({{"id", n.id}, {"type", n.type}});
    Json edges = Json::array();
    for (const auto& e : g.edges) {
        edges.push_back({{"id", e.id}, {"type", e.type}, {"src", g.nodes[e.src].id}, {"tgt", g.nodes[e.tgt].id}});
    }
    return Json{{"nodes", nodes}, {"edges", edges}};
}

Grammar grammar_from_json(const Json& j)
{
    require_object(j, "grammar", {"type_graph", "start", "rules"});
    Grammar g;
    g.type_graph = self_typed(graph_from_json(j["type_graph"]));
    g.start = graph_from_json(j["start"]);
    for (const auto& r : array(j["rules"], "rules")) {
        require_object(r, "rule", {"name", "L", "K", "R", "l", "r"});
        auto rule = std::make_shared<Rule>();
        rule->name = text(r["name"], "rule name");
        rule->lhs = graph_from_json(r["L"]);
        rule->interface = graph_from_json(r["K"]);
        rule->rhs = graph_from_json(r["R"]);
        rule->l = morphism_from_json(r["l"], rule->interface, rule->lhs, "rule '" + rule->name + "' left leg");
        rule->r = morphism_from_json(r["r"], rule->interface, rule->rhs, "rule '" + rule->name + "' right leg");
        g.rules.push_back(std::move(rule));
    }
    check_grammar(g);
    return g;
}

Json grammar_to_json(const Grammar& g)
{
    Json rules = Json::array();
    for (const auto& r : g.rules) {
        rules.push_back({{"name", r->name},
                         {"L", graph_to_json(r->lhs)},
                         {"K", graph_to_json(r->interface)},
                         {"R", graph_to_json(r->rhs)},
                         {"l", morphism_to_json(r->l, r->interface, r->lhs)},
                         {"r", morphism_to_json(r->r, r->interface, r->rhs)}});
    }
    return Json{{"type_graph", graph_to_json(g.type_graph)}, {"start", graph_to_json(g.start)}, {"rules", rules}};
}

AsyncGraph async_from_json(const Json& j)
{
    require_object(j, "async graph", {"nodes", "edges", "origin"}, {"squares"});
    AsyncGraph a;
    a.nodes = texts(j["nodes"], "nodes");
    for (const auto& e : array(j["edges"], "edges")) {
        require_object(e, "edge", {"id", "src", "tgt"});
        a.edges.push_back({text(e["id"], "edge id"), text(e["src"], "edge source"), text(e["tgt"], "edge target")});
    }
    a.origin = text(j["origin"], "origin");
    if (j.contains("squares")) {
        auto path = [](const Json& p) {
            auto ids = texts(p, "square path");
            if (ids.size() != 2) throw InputError("square paths have exactly two edges");
            return AsyncGraph::Path2{ids[0], ids[1]};
        };
        for (const auto& s : array(j["squares"], "squares")) {
            if (!s.is_array() || s.size() != 2) throw InputError("squares are pairs of paths");
            a.squares.push_back({path(s[0]), path(s[1])});
        }
    }
    check_async_graph(a);
    return a;
}

Json async_to_json(const AsyncGraph& a)
{
    Json edges = Json::array();
    for (const auto& e : a.edges) edges.push_back({{"id", e.id}, {"src", e.src}, {"tgt", e.tgt}});
    Json squares = Json::array();
    for (const auto& [p, q] : a.squares) {
        squares.push_back(Json::array({Json::array({p[0], p[1]}), Json::array({q[0], q[1]})}));
    }
    return Json{{"nodes", a.nodes}, {"edges", edges}, {"origin", a.origin}, {"squares", squares}};
}

Epes epes_from_json(const Json& j)
{
    require_object(j, "equivalence structure", {"es"}, {"classes"});
    Epes p;
    p.base = es_from_json(j["es"]);
    p.cls.assign(p.base.size(), -1);
    int next = 0;
    if (j.contains("classes")) {
        for (const auto& c : array(j["classes"], "classes")) {
            for (const auto& name : texts(c, "class")) {
                const int e = p.base.index_of(name);
                if (p.cls[e] != -1) throw InputError("event '" + name + "' is in two classes");
                p.cls[e] = next;
            }
            ++next;
        }
    }
    for (int& c : p.cls) {
        if (c == -1) c = next++;
    }
    check_epes(p);
    return p;
}

Json epes_to_json(const Epes& p)
{
    std::map<int, std::vector<std::string>> classes;
    for (std::size_t e = 0; e < p.cls.size(); ++e) classes[p.cls[e]].push_back(p.base.name(static_cast<int>(e)));
    Json cs = Json::array();
    for (const auto& [c, names] : classes) cs.push_back(names);
    return Json{{"es", es_to_json(p.base)}, {"classes", cs}};
}

EventMap event_map_from_json(const Json& j, const EventStructure& src, const EventStructure& dst)
{
    require_object(j, "morphism", {"map"});
    if (!j["map"].is_object()) throw InputError("morphism map must be an object");
    EventMap f(src.size(), -1);
    for (const auto& [x, y] : j["map"].items()) {
        f[src.index_of(x)] = y.is_null() ? -1 : dst.index_of(text(y, "image"));
    }
    return f;
}

PosetMap poset_map_from_json(const Json& j, const FiniteDomain& src, const FiniteDomain& dst)
{
    require_object(j, "morphism", {"map"});
    if (!j["map"].is_object()) throw InputError("morphism map must be an object");
    PosetMap f(src.size(), -1);
    for (const auto& [x, y] : j["map"].items()) f[src.index_of(x)] = dst.index_of(text(y, "image"));
    for (std::size_t x = 0; x < f.size(); ++x) {
        if (f[x] < 0) throw InputError("domain maps are total; '" + src.name(static_cast<int>(x)) + "' is unmapped");
    }
    return f;
}

}  // namespace weavent
