#include "weavent/dot.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace weavent {

namespace {

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string poset_to_dot(const FiniteDomain& d)
{
    std::set<std::string> nodes(d.names().begin(), d.names().end());
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& [x, y] : d.cover_pairs()) edges.insert({d.name(x), d.name(y)});

    std::ostringstream out;
    out << "digraph hasse {\n  rankdir=BT;\n";
    for (const auto& n : nodes) out << "  " << quote(n) << ";\n";
    for (const auto& [x, y] : edges) out << "  " << quote(x) << " -> " << quote(y) << ";\n";
    out << "}\n";
    return out.str();
}

std::string graph_to_dot(const TypedGraph& g)
{
    std::set<std::pair<std::string, std::string>> nodes;
    for (const auto& n : g.nodes) nodes.insert({n.id, n.type});
    std::set<std::tuple<std::string, std::string, std::string, std::string>> edges;
    for (const auto& e : g.edges) edges.insert({g.nodes[e.src].id, g.nodes[e.tgt].id, e.id, e.type});

    std::ostringstream out;
    out << "digraph typed {\n";
    for (const auto& [id, type] : nodes) out << "  " << quote(id) << " [label=" << quote(id + ":" + type) << "];\n";
    for (const auto& [src, tgt, id, type] : edges) {
        out << "  " << quote(src) << " -> " << quote(tgt) << " [label=" << quote(id + ":" + type) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string async_to_dot(const AsyncGraph& a)
{
    std::set<std::string> nodes(a.nodes.begin(), a.nodes.end());
    std::set<std::tuple<std::string, std::string, std::string>> edges;
    for (const auto& e : a.edges) edges.insert({e.src, e.tgt, e.id});

    // A commuting square is drawn as a dashed link between its two middle nodes.
    std::set<std::pair<std::string, std::string>> squares;
    auto middle = [&](const AsyncGraph::Path2& p) {
        auto it = std::find_if(a.edges.begin(), a.edges.end(), [&](const AsyncGraph::Edge& e) { return e.id == p[0]; });
        return it == a.edges.end() ? p[0] : it->tgt;
    };
    for (const auto& [p, q] : a.squares) {
        auto x = middle(p);
        auto y = middle(q);
        if (y < x) std::swap(x, y);
        squares.insert({x, y});
    }

    std::ostringstream out;
    out << "digraph async {\n  rankdir=BT;\n";
    for (const auto& n : nodes) {
        out << "  " << quote(n) << (n == a.origin ? " [shape=doublecircle]" : "") << ";\n";
    }
    for (const auto& [src, tgt, id] : edges) {
        out << "  " << quote(src) << " -> " << quote(tgt) << " [label=" << quote(id) << "];\n";
    }
    for (const auto& [x, y] : squares) {
        out << "  " << quote(x) << " -> " << quote(y) << " [style=dashed, dir=none, constraint=false];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace weavent
