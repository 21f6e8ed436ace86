#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "weavent/dot.hpp"
#include "weavent/error.hpp"
#include "weavent/interval.hpp"
#include "weavent/io.hpp"

using namespace weavent;

namespace {

struct Options {
    std::string verb;
    std::string es, domain, grammar, async, epes;
    std::string morphism, src, dst;
    std::optional<std::size_t> depth;
    bool fusion_safe = false;
    bool strict_morphism = false;
    bool weak = false;
    bool intervals = false;
    std::string output;
    std::string format = "json";
};

// Collects the report and decides the exit code.
class Report {
public:
    Report(const Options& o) : body_{{"verb", o.verb}, {"inputs", Json::object()}, {"results", Json::object()},
                                     {"witnesses", Json::array()}}
    {
        for (const auto& [key, path] : {std::pair<const char*, const std::string&>{"es", o.es},
                                        {"domain", o.domain},
                                        {"grammar", o.grammar},
                                        {"async", o.async},
                                        {"epes", o.epes},
                                        {"morphism", o.morphism},
                                        {"src", o.src},
                                        {"dst", o.dst}}) {
            if (!path.empty()) body_["inputs"][key] = path;
        }
    }

    Json& results() { return body_["results"]; }

    // Records a checked property; a failed one makes the run exit with 1.
    void assert_property(const std::string& property, bool holds, const Json& witness = nullptr)
    {
        results()["checks"][property] = holds;
        if (!holds) {
            failed_ = true;
            body_["witnesses"].push_back({{"property", property}, {"witness", witness}});
        }
    }

    int finish() const
    {
        std::cout << body_.dump(2) << "\n";
        return failed_ ? 1 : 0;
    }

private:
    Json body_;
    bool failed_ = false;
};

std::size_t class_ceiling()
{
    const char* env = std::getenv("WEAVENT_CLASS_CEILING");
    if (!env) return kDefaultClassCeiling;
    try {
        std::size_t used = 0;
        const auto value = std::stoull(env, &used);
        if (used != std::string(env).size() || value == 0) throw std::invalid_argument(env);
        return value;
    } catch (const std::exception&) {
        throw InputError("WEAVENT_CLASS_CEILING must be a positive integer");
    }
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    out << text;
    if (!out) throw InputError("cannot write '" + path + "'");
}

Json names(const FiniteDomain& d, const std::vector<int>& xs)
{
    Json out = Json::array();
    for (int x : xs) out.push_back(d.name(x));
    return out;
}

Json domain_summary(const FiniteDomain& d)
{
    const auto alg = algebraicity(d);
    Json classes = Json::array();
    for (const auto& c : interchange_classes(d)) classes.push_back(names(d, c));
    return Json{{"elements", d.size()},
                {"irreducibles", names(d, irreducible_elements(d))},
                {"primes", names(d, primes(d))},
                {"weak_primes", names(d, weak_primes(d))},
                {"interchange_classes", classes},
                {"prime_algebraic", alg.prime_algebraic},
                {"weak_prime_algebraic", alg.weak_prime_algebraic}};
}

Json non_weak_primes(const FiniteDomain& d)
{
    const auto wp = weak_primes(d);
    Json out = Json::array();
    for (int i : irreducible_elements(d)) {
        if (std::find(wp.begin(), wp.end(), i) == wp.end()) out.push_back(d.name(i));
    }
    return out;
}

Json classification(const EventStructure& es)
{
    const auto c = classify(es);
    return Json{{"events", es.size()}, {"live", c.live}, {"stable", c.stable}, {"prime", c.prime},
                {"connected", c.connected}, {"diagnostics", c.diagnostics}};
}

// Emits a converted structure to --output (JSON or DOT) and into the report.
void deliver(Report& r, const Options& o, const Json& structure, const std::string& dot)
{
    r.results()["output"] = structure;
    if (o.format == "dot") r.results()["dot"] = dot;
    if (o.output.empty()) return;
    write_file(o.output, o.format == "dot" ? dot : structure.dump(2) + "\n");
}

std::string only_input(const Options& o, std::initializer_list<const char*> allowed)
{
    std::string chosen;
    int count = 0;
    for (const auto& [key, path] : {std::pair<std::string, std::string>{"es", o.es},
                                    {"domain", o.domain},
                                    {"grammar", o.grammar},
                                    {"async", o.async},
                                    {"epes", o.epes}}) {
        if (path.empty()) continue;
        ++count;
        chosen = key;
    }
    if (count != 1) throw InputError(o.verb + " needs exactly one structure input");
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return chosen == a; }) == allowed.end()) {
        throw InputError(o.verb + " does not accept --" + chosen);
    }
    return chosen;
}

int check_morphism(Report& r, const Options& o)
{
    if (o.src.empty() || o.dst.empty()) throw InputError("--morphism needs --src and --dst");
    const auto m = load_json(o.morphism);
    const auto src = load_json(o.src);
    const auto dst = load_json(o.dst);
    if (src.contains("elements")) {
        const auto a = domain_from_json(src);
        const auto b = domain_from_json(dst);
        const auto v = validate_domain_morphism(poset_map_from_json(m, a, b), a, b, o.strict_morphism);
        r.results()["kind"] = "domain";
        r.assert_property("domain morphism", v.ok, {{"condition", v.condition}, {"elements", names(a, v.witness)}});
    } else if (src.contains("es")) {
        const auto a = epes_from_json(src);
        const auto b = epes_from_json(dst);
        const auto v = validate_epes_morphism(event_map_from_json(m, a.base, b.base), a, b);
        r.results()["kind"] = "epes";
        r.assert_property("equivalence structure morphism", v.ok, {{"condition", v.condition}, {"detail", v.witness}});
    } else {
        const auto a = es_from_json(src);
        const auto b = es_from_json(dst);
        const auto v = validate_es_morphism(event_map_from_json(m, a, b), a, b);
        r.results()["kind"] = "es";
        r.assert_property("event structure morphism", v.ok, {{"condition", v.condition}, {"detail", v.witness}});
    }
    return r.finish();
}

int run_check(Report& r, const Options& o)
{
    if (!o.morphism.empty()) return check_morphism(r, o);
    const auto kind = only_input(o, {"es", "domain", "grammar", "async", "epes"});
    r.results()["kind"] = kind;
    if (kind == "es") {
        const auto es = es_from_json(load_json(o.es));
        r.results()["classification"] = classification(es);
        r.assert_property("live", classify(es).live, classify(es).diagnostics);
    } else if (kind == "domain") {
        const auto d = domain_from_json(load_json(o.domain));
        r.results()["domain"] = domain_summary(d);
        r.assert_property("weak prime algebraic", algebraicity(d).weak_prime_algebraic, non_weak_primes(d));
    } else if (kind == "grammar") {
        const auto g = grammar_from_json(load_json(o.grammar));
        Json rules = Json::array();
        for (const auto& p : g.rules) rules.push_back(p->name);
        r.results()["rules"] = rules;
        r.results()["start"] = {{"nodes", g.start.nodes.size()}, {"edges", g.start.edges.size()}};
    } else if (kind == "async") {
        const auto v = validate_async_graph(async_from_json(load_json(o.async)), o.weak);
        r.results()["axioms"] = {{"axiom1", v.axiom1},   {"axiom2", v.axiom2},
                                 {"cube_forward", v.cube_forward}, {"cube_stability", v.cube_backward},
                                 {"coherence", v.coherence}, {"all_cofinal_equivalent", v.all_cofinal_equivalent}};
        r.assert_property(o.weak ? "weak asynchronous graph" : "asynchronous graph", v.ok, v.diagnostics);
    } else {
        const auto p = epes_from_json(load_json(o.epes));
        r.results()["events"] = p.base.size();
        r.results()["connected"] = epes_connected(p);
    }
    return r.finish();
}

int run_convert(Report& r, const Options& o)
{
    const auto kind = only_input(o, {"es", "domain", "epes"});
    if (kind == "es") {
        const auto d = dom_of_es(es_from_json(load_json(o.es)));
        deliver(r, o, domain_to_json(d), poset_to_dot(d));
    } else if (kind == "epes") {
        const auto d = epes_dom(epes_from_json(load_json(o.epes)));
        deliver(r, o, domain_to_json(d), poset_to_dot(d));
    } else {
        const auto d = domain_from_json(load_json(o.domain));
        if (o.format == "dot") throw InputError("event structures have no DOT form");
        if (!algebraicity(d).weak_prime_algebraic) {
            r.assert_property("weak prime algebraic", false, non_weak_primes(d));
            return r.finish();
        }
        deliver(r, o, es_to_json(o.intervals ? ev_wd(d) : ev_of_domain(d)), "");
    }
    return r.finish();
}

int run_connect(Report& r, const Options& o)
{
    only_input(o, {"es"});
    if (o.format == "dot") throw InputError("event structures have no DOT form");
    const auto es = es_from_json(load_json(o.es));
    const auto connected = connect_es(es);
    r.results()["already_connected"] = es_isomorphic(connected, es).has_value();
    r.assert_property("dom(connect(E)) isomorphic to dom(E)",
                      poset_isomorphic(dom_of_es(connected), dom_of_es(es)).has_value());
    deliver(r, o, es_to_json(connected), "");
    return r.finish();
}

int run_derive(Report& r, const Options& o)
{
    only_input(o, {"grammar"});
    if (!o.depth) throw InputError("derive needs --depth");
    const auto g = grammar_from_json(load_json(o.grammar));
    const auto space = trace_space(g, *o.depth, o.fusion_safe, class_ceiling());
    const auto& d = space.domain;
    Json traces = Json::array();
    for (const auto& rep : space.representatives) traces.push_back(rep.rule_sequence());
    r.results()["classes"] = d.size();
    r.results()["traces"] = traces;
    r.results()["prime"] = algebraicity(d).prime_algebraic;
    r.results()["domain"] = domain_summary(d);
    r.assert_property("trace order is weak prime algebraic", algebraicity(d).weak_prime_algebraic,
                      non_weak_primes(d));
    if (algebraicity(d).weak_prime_algebraic) r.results()["events"] = es_to_json(ev_of_domain(d));
    deliver(r, o, domain_to_json(d), poset_to_dot(d));
    return r.finish();
}

int run_synth(Report& r, const Options& o)
{
    only_input(o, {"es"});
    const auto es = es_from_json(load_json(o.es));
    const auto g = grammar_from_es(es);
    const std::size_t depth = o.depth.value_or(g.rules.size());
    r.results()["rules"] = g.rules.size();
    r.results()["start"] = {{"nodes", g.start.nodes.size()}, {"edges", g.start.edges.size()}};
    r.results()["depth"] = depth;
    const auto d = trace_domain(g, depth, false, class_ceiling());
    r.assert_property("ev(trace order of synthesized grammar) isomorphic to E",
                      es_isomorphic(ev_of_domain(d), es).has_value(), {{"classes", d.size()}});
    deliver(r, o, grammar_to_json(g), graph_to_dot(g.start));
    return r.finish();
}

int run_roundtrip(Report& r, const Options& o)
{
    const auto kind = only_input(o, {"es", "domain", "epes"});
    if (kind == "es") {
        const auto es = es_from_json(load_json(o.es));
        const auto back = ev_of_domain(dom_of_es(es));
        const bool connected = classify(es).connected;
        r.results()["connected"] = connected;
        if (connected) {
            r.assert_property("ev(dom(E)) isomorphic to E", es_isomorphic(back, es).has_value(), es_to_json(back));
        } else {
            r.assert_property("dom(ev(dom(E))) isomorphic to dom(E)",
                              poset_isomorphic(dom_of_es(back), dom_of_es(es)).has_value());
        }
        r.assert_property("fuse(unfold(E)) isomorphic to E", es_isomorphic(fuse(unfold(es)), es).has_value());
    } else if (kind == "domain") {
        const auto d = domain_from_json(load_json(o.domain));
        const bool weak_prime = algebraicity(d).weak_prime_algebraic;
        r.assert_property("weak prime algebraic", weak_prime, non_weak_primes(d));
        if (weak_prime) {
            const auto ev = ev_of_domain(d);
            r.assert_property("dom(ev(D)) isomorphic to D", poset_isomorphic(dom_of_es(ev), d).has_value());
            r.assert_property("interval events isomorphic to irreducible events",
                              es_isomorphic(ev_wd(d), ev).has_value());
            const auto z = zeta(d);
            r.assert_property("interval classes biject with interchange classes", z.well_defined && z.mutually_inverse);
        }
    } else {
        const auto p = epes_from_json(load_json(o.epes));
        r.assert_property("unfold(fuse(P)) isomorphic to P", epes_isomorphic(unfold(fuse(p)), p).has_value());
        const auto d = epes_dom(p);
        r.assert_property("saturated configurations form a weak prime domain",
                          validate_domain(d).ok && algebraicity(d).weak_prime_algebraic, non_weak_primes(d));
    }
    return r.finish();
}

int run_axioms(Report& r, const Options& o)
{
    only_input(o, {"domain"});
    const auto d = domain_from_json(load_json(o.domain));
    const auto a = check_axioms(d);
    const auto parts = interval_classes(d);
    r.results()["intervals"] = parts.intervals.size();
    r.results()["interval_classes"] = parts.classes.size();
    r.results()["axioms"] = {{"F", a.finitary}, {"C", a.cover_join}, {"R", a.rigid}, {"V", a.consistency},
                             {"I", a.intervals_ordered}};
    r.results()["weak_prime_algebraic"] = algebraicity(d).weak_prime_algebraic;
    r.assert_property("axioms F, C, R, V", a.event_axioms(), a.diagnostics);
    return r.finish();
}

int run_async(Report& r, const Options& o)
{
    const auto kind = only_input(o, {"async", "domain"});
    const auto a = kind == "async" ? async_from_json(load_json(o.async))
                                   : hasse_as_async(domain_from_json(load_json(o.domain)));
    const auto v = validate_async_graph(a, o.weak);
    r.results()["axioms"] = {{"axiom1", v.axiom1},   {"axiom2", v.axiom2},
                             {"cube_forward", v.cube_forward}, {"cube_stability", v.cube_backward},
                             {"coherence", v.coherence}, {"all_cofinal_equivalent", v.all_cofinal_equivalent}};
    r.assert_property(o.weak ? "weak asynchronous graph" : "asynchronous graph", v.ok, v.diagnostics);
    if (v.ok && v.all_cofinal_equivalent) {
        const auto d = async_domain(a);
        r.results()["path_order"] = domain_summary(d);
        deliver(r, o, domain_to_json(d), poset_to_dot(d));
    } else if (kind == "domain") {
        deliver(r, o, async_to_json(a), async_to_dot(a));
    }
    return r.finish();
}

int run_emit(Report& r, const Options& o)
{
    const auto kind = only_input(o, {"es", "domain", "grammar", "async"});
    if (o.output.empty()) throw InputError("emit needs --output");
    std::string dot;
    if (kind == "es") {
        dot = poset_to_dot(dom_of_es(es_from_json(load_json(o.es))));
    } else if (kind == "domain") {
        dot = poset_to_dot(domain_from_json(load_json(o.domain)));
    } else if (kind == "grammar") {
        dot = graph_to_dot(grammar_from_json(load_json(o.grammar)).start);
    } else {
        dot = async_to_dot(async_from_json(load_json(o.async)));
    }
    write_file(o.output, dot);
    r.results()["written"] = o.output;
    return r.finish();
}

int fail_input(const std::string& kind, const std::string& message)
{
    std::cerr << Json{{"error", kind}, {"message", message}}.dump() << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Event structures, weak prime domains and graph rewriting"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--es", o.es, "event structure JSON")->check(CLI::ExistingFile);
        sub->add_option("--domain", o.domain, "domain JSON")->check(CLI::ExistingFile);
        sub->add_option("--grammar", o.grammar, "grammar JSON")->check(CLI::ExistingFile);
        sub->add_option("--async", o.async, "asynchronous graph JSON")->check(CLI::ExistingFile);
        sub->add_option("--epes", o.epes, "event structure with equivalence JSON")->check(CLI::ExistingFile);
        sub->add_option("--morphism", o.morphism, "morphism JSON")->check(CLI::ExistingFile);
        sub->add_option("--src", o.src, "morphism source")->check(CLI::ExistingFile);
        sub->add_option("--dst", o.dst, "morphism target")->check(CLI::ExistingFile);
        sub->add_option("--depth", o.depth, "derivation length bound");
        sub->add_flag("--fusion-safe", o.fusion_safe, "only fusion-safe steps");
        sub->add_flag("--strict-morphism", o.strict_morphism, "domain maps must preserve every cover");
        sub->add_flag("--weak", o.weak, "drop the stability direction of the cube axiom");
        sub->add_flag("--intervals", o.intervals, "build events from interval classes");
        sub->add_option("--output", o.output, "output file");
        sub->add_option("--format", o.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    };
    for (const char* verb : {"check", "convert", "connect", "derive", "synth", "roundtrip", "axioms", "async", "emit"}) {
        add_common(app.add_subcommand(verb));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail_input("usage", e.what());
    }
    o.verb = app.get_subcommands().front()->get_name();

    try {
        Report r(o);
        if (o.verb == "check") return run_check(r, o);
        if (o.verb == "convert") return run_convert(r, o);
        if (o.verb == "connect") return run_connect(r, o);
        if (o.verb == "derive") return run_derive(r, o);
        if (o.verb == "synth") return run_synth(r, o);
        if (o.verb == "roundtrip") return run_roundtrip(r, o);
        if (o.verb == "axioms") return run_axioms(r, o);
        if (o.verb == "async") return run_async(r, o);
        return run_emit(r, o);
    } catch (const CeilingError& e) {
        return fail_input("ceiling", e.what());
    } catch (const InputError& e) {
        return fail_input("input", e.what());
    } catch (const Json::exception& e) {
        return fail_input("input", e.what());
    }
}
