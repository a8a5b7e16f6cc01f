// chipfire: command-line front end for the divisor library.
//
// Exit status: 0 success, 1 a self-check failed, 2 bad input.

#include "chipfire/chipfire.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace chipfire;
using Json = nlohmann::ordered_json;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string graph_path;
    std::string format = "text";
    bool timing = false;
    std::string q = "0";
    std::string divisor;
    std::string other;
    std::string tree;
    std::optional<std::int64_t> degree;
    std::optional<std::uint64_t> seed;
    std::size_t count = 1;
    std::size_t jobs = 1;
    std::int64_t c = 0;
    std::size_t max_iterations = 100000;
    std::int64_t spread = 3;
};

struct Report {
    std::string command;
    std::string digest;
    std::optional<std::uint64_t> seed;
    Json outputs = Json::object();
    Json moves;
    Json bounds;
    std::vector<std::string> text;
};

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << x;
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Inline text, `@file`, or the name of a divisor declared in the graph file.
std::string divisor_text(const GraphFile& f, const std::string& arg, const char* flag) {
    if (arg.empty())
        throw InputError(std::string("missing ") + flag);
    if (arg.front() == '@')
        return read_file(arg.substr(1));
    if (const auto* named = f.find(arg))
        return named->text;
    return arg;
}

Vertex parse_vertex(const Graph& g, const std::string& s) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &pos);
    } catch (const std::exception&) {
        throw InputError("--q expects a vertex index, got '" + s + "'");
    }
    if (pos != s.size() || v >= g.n())
        throw InputError("--q expects a vertex index below " + std::to_string(g.n()) + ", got '" + s + "'");
    return v;
}

Json to_json(const Divisor& d) {
    Json a = Json::array();
    for (auto x : d)
        a.push_back(x);
    return a;
}

Json to_json(const VertexFunction& f) {
    Json a = Json::array();
    for (auto x : f)
        a.push_back(x);
    return a;
}

Json to_json(const std::vector<EdgeIndex>& v) {
    Json a = Json::array();
    for (auto x : v)
        a.push_back(x);
    return a;
}

Json to_json(const MetricDivisor& d) {
    Json a = Json::array();
    for (const auto& [p, k] : d)
        a.push_back({{"point", to_string(p)}, {"weight", k}});
    return a;
}

std::string format_values(std::span<const std::int64_t> v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? " " : "") + std::to_string(v[i]);
    return out;
}

std::string join(const std::vector<EdgeIndex>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? " " : "") + std::to_string(v[i]);
    return out;
}

std::string join_points(const std::vector<GraphPoint>& pts) {
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        out += (i ? " " : "") + to_string(pts[i]);
    return out;
}

Json tree_json(const SpanningTree& t) {
    return {{"tree_edges", to_json(t.tree_edges)},
            {"ext_active", to_json(t.ext_active)},
            {"ext_passive", to_json(t.ext_passive)},
            {"external_activity", t.external_activity()}};
}

Json bounds_json(const MoveBounds& b) {
    return {{"exact_potential", to_string(b.exact_potential)},
            {"resistance", to_string(b.resistance)},
            {"max_resistance_sum", to_string(b.max_resistance_sum)},
            {"max_resistance", to_string(b.max_resistance)},
            {"foster", to_string(b.foster)},
            {"spectral", b.spectral},
            {"lambda1", b.lambda1},
            {"diameter", to_string(b.diameter)},
            {"max_effective_resistance", to_string(b.max_effective_resistance)},
            {"graph_diameter", b.graph_diameter}};
}

Json moves_json(const ReductionReport& r) {
    return {{"borrowings", r.moves_step2},
            {"set_firings", r.moves_step3},
            {"vertex_firings", r.total_set_fire_vertices},
            {"total", r.total_moves()}};
}

void run_check_reduced(const GraphFile& f, const Options& o, Report& r) {
    const Vertex q = parse_vertex(f.graph, o.q);
    const Divisor d = parse_divisor(divisor_text(f, o.divisor, "--divisor"), f.graph.n());
    const DharOutcome out = dhar(f.graph, q, d);
    r.outputs = {{"reduced", out.reduced},
                 {"burn_order", out.burn_order},
                 {"unburnt", out.unburnt},
                 {"negative", out.negative}};
    if (out.reduced) {
        r.text.push_back("reduced");
    } else if (!out.negative.empty()) {
        r.text.push_back("not reduced: negative at " + join(out.negative));
    } else {
        r.text.push_back("not reduced: unburnt " + join(out.unburnt));
    }
}

void run_reduce(const GraphFile& f, const Options& o, Report& r) {
    const Vertex q = parse_vertex(f.graph, o.q);
    const Divisor d = parse_divisor(divisor_text(f, o.divisor, "--divisor"), f.graph.n());
    const PotentialTable table(f.graph, q);
    const ReductionReport rep = reduce(f.graph, table, d);
    const MoveBounds b = move_bounds(f.graph, table);
    if (!is_reduced(f.graph, q, rep.result))
        throw CheckFailure("reduce: output failed the burning test");
    if (rep.result != d + apply_laplacian(f.graph, rep.script.f))
        throw CheckFailure("reduce: script does not reproduce the output");
    if (!(Rational(static_cast<unsigned long>(rep.total_moves())) < b.exact_potential) && rep.total_moves() > 0)
        throw CheckFailure("reduce: move count reached the exact potential bound");
    Json fired = Json::array();
    for (const auto& s : rep.fired_sets)
        fired.push_back(s);
    r.outputs = {{"divisor", to_json(rep.result)},
                 {"script", to_json(rep.script.f)},
                 {"after_step1", to_json(rep.after_step1)},
                 {"after_step2", to_json(rep.after_step2)},
                 {"fired_sets", fired}};
    r.moves = moves_json(rep);
    r.bounds = {{"exact_potential", to_string(b.exact_potential)}, {"resistance", to_string(b.resistance)}};
    r.text.push_back("divisor: " + format_divisor(rep.result));
    r.text.push_back("moves: borrowings=" + std::to_string(rep.moves_step2) +
                     " set_firings=" + std::to_string(rep.moves_step3) +
                     " vertex_firings=" + std::to_string(rep.total_set_fire_vertices) +
                     " total=" + std::to_string(rep.total_moves()));
    r.text.push_back("bound: exact_potential=" + to_string(b.exact_potential) +
                     " resistance=" + to_string(b.resistance));
}

void run_to_tree(const GraphFile& f, const Options& o, Report& r) {
    const Vertex q = parse_vertex(f.graph, o.q);
    const Divisor d = parse_divisor(divisor_text(f, o.divisor, "--divisor"), f.graph.n());
    const SpanningTree t = divisor_to_tree(f.graph, q, d);
    r.outputs = tree_json(t);
    r.outputs["degree"] = degree(d);
    r.text.push_back("tree: " + join(t.tree_edges));
    r.text.push_back("ext_active: " + join(t.ext_active));
    r.text.push_back("ext_passive: " + join(t.ext_passive));
}

std::vector<EdgeIndex> parse_edge_list(const std::string& s) {
    std::vector<EdgeIndex> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        std::size_t pos = 0;
        unsigned long e = 0;
        try {
            e = std::stoul(tok, &pos);
        } catch (const std::exception&) {
            throw InputError("--tree expects edge indices, got '" + tok + "'");
        }
        if (pos != tok.size())
            throw InputError("--tree expects edge indices, got '" + tok + "'");
        out.push_back(e);
    }
    return out;
}

void run_from_tree(const GraphFile& f, const Options& o, Report& r) {
    const Vertex q = parse_vertex(f.graph, o.q);
    const auto edges = parse_edge_list(o.tree);
    const std::int64_t d = o.degree.value_or(f.graph.genus());
    const TreeDivisor td = tree_to_divisor_detailed(f.graph, q, edges, d);
    r.outputs = {{"divisor", to_json(td.divisor)}, {"degree", d}};
    r.outputs.update(tree_json(td.tree));
    r.text.push_back("divisor: " + format_divisor(td.divisor));
    r.text.push_back("ext_active: " + join(td.tree.ext_active));
    r.text.push_back("ext_passive: " + join(td.tree.ext_passive));
}

void run_count_trees(const GraphFile& f, const Options&, Report& r) {
    const BigInt count = count_spanning_trees(f.graph);
    r.outputs = {{"spanning_trees", to_string(count)}};
    r.text.push_back(to_string(count));
}

void run_jacobian(const GraphFile& f, const Options& o, Report& r) {
    const Vertex q = parse_vertex(f.graph, o.q);
    const JacobianPresentation jac = jacobian(f.graph, q);
    Json factors = Json::array(), gens = Json::array();
    std::string shape;
    for (std::size_t i = 0; i < jac.invariant_factors.size(); ++i) {
        factors.push_back(to_string(jac.invariant_factors[i]));
        gens.push_back(to_json(jac.generators[i]));
        shape += (i ? " x " : "") + ("Z/" + to_string(jac.invariant_factors[i]));
    }
    r.outputs = {{"q", q}, {"invariant_factors", factors}, {"order", to_string(jac.order())}, {"generators", gens}};
    r.text.push_back(shape.empty() ? "trivial" : shape);
    r.text.push_back("order: " + to_string(jac.order()));
    for (std::size_t i = 0; i < jac.generators.size(); ++i)
        r.text.push_back("generator " + std::to_string(i) + ": " + format_divisor(jac.generators[i]));
}

void run_sample_tree(const GraphFile& f, const Options& o, Report& r) {
    const Vertex q = parse_vertex(f.graph, o.q);
    if (!o.seed)
        throw InputError("sample-tree requires --seed");
    const SpanningTreeSampler sampler(f.graph, q);
    std::vector<SpanningTree> trees(o.count);
    const std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, o.count));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t k = w; k < o.count; k += jobs)
                trees[k] = sampler.sample(*o.seed, k);
        });
    for (auto& t : pool)
        t.join();
    Json samples = Json::array();
    for (std::size_t k = 0; k < trees.size(); ++k) {
        samples.push_back({{"index", k}, {"tree_edges", to_json(trees[k].tree_edges)}});
        r.text.push_back(std::to_string(k) + ": " + join(trees[k].tree_edges));
    }
    r.outputs = {{"q", q}, {"count", o.count}, {"samples", samples}};
}

void run_group_add(const GraphFile& f, const Options& o, Report& r) {
    const Vertex q = parse_vertex(f.graph, o.q);
    const Divisor a = parse_divisor(divisor_text(f, o.divisor, "--divisor"), f.graph.n());
    const Divisor b = parse_divisor(divisor_text(f, o.other, "--other"), f.graph.n());
    const Divisor sum = group_add(f.graph, q, a, b);
    r.outputs = {{"divisor", to_json(sum)}};
    r.text.push_back("divisor: " + format_divisor(sum));
}

void run_winnable(const GraphFile& f, const Options& o, Report& r) {
    const Vertex q = parse_vertex(f.graph, o.q);
    const Divisor d = parse_divisor(divisor_text(f, o.divisor, "--divisor"), f.graph.n());
    const auto script = winnable(f.graph, d, q);
    r.outputs = {{"winnable", script.has_value()}};
    if (script) {
        const Divisor target = d + apply_laplacian(f.graph, script->f);
        if (!is_effective(target))
            throw CheckFailure("winnable: script does not reach an effective divisor");
        r.outputs["script"] = to_json(script->f);
        r.outputs["effective"] = to_json(target);
        r.text.push_back("winnable");
        r.text.push_back("effective: " + format_divisor(target));
        r.text.push_back("script: " + format_values(script->f.values()));
    } else {
        r.text.push_back("not winnable");
    }
}

void run_rank(const GraphFile& f, const Options& o, Report& r) {
    const Divisor d = parse_divisor(divisor_text(f, o.divisor, "--divisor"), f.graph.n());
    const bool ok = rank_at_least(f.graph, d, o.c);
    r.outputs = {{"c", o.c}, {"rank_at_least", ok}};
    r.text.push_back(std::string(ok ? "r(D) >= " : "r(D) < ") + std::to_string(o.c));
}

void run_bounds(const GraphFile& f, const Options& o, Report& r) {
    const Vertex q = parse_vertex(f.graph, o.q);
    const MoveBounds b = move_bounds(f.graph, q);
    r.bounds = bounds_json(b);
    r.outputs = {{"q", q}};
    for (const auto& [k, v] : r.bounds.items())
        r.text.push_back(k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()));
}

Json component_json(const UnburntComponent& c) {
    Json pts = Json::array();
    for (const auto& p : c.points)
        pts.push_back(to_string(p));
    return {{"points", pts}, {"length", to_string(c.length)}, {"outdegree", c.outdegree}};
}

void run_metric_check(const GraphFile& f, const Options& o, Report& r) {
    const MetricGraph g = f.metric();
    const GraphPoint q = parse_point(o.q, g);
    const MetricDivisor d = parse_metric_divisor(divisor_text(f, o.divisor, "--divisor"), g);
    const MetricDharOutcome out = metric_dhar(g, q, d);
    Json comps = Json::array(), neg = Json::array();
    for (const auto& c : out.unburnt)
        comps.push_back(component_json(c));
    for (const auto& p : out.negative)
        neg.push_back(to_string(p));
    r.outputs = {{"q", to_string(q)}, {"reduced", out.reduced}, {"unburnt", comps}, {"negative", neg}};
    if (out.reduced)
        r.text.push_back("reduced");
    else if (!out.negative.empty())
        r.text.push_back("not reduced: negative at " + join_points(out.negative));
    else
        for (const auto& c : out.unburnt)
            r.text.push_back("unburnt: " + join_points(c.points) + " length=" + to_string(c.length) +
                             " outdegree=" + std::to_string(c.outdegree));
}

void run_metric_reduce(const GraphFile& f, const Options& o, Report& r) {
    const MetricGraph g = f.metric();
    const GraphPoint q = parse_point(o.q, g);
    const MetricDivisor d = parse_metric_divisor(divisor_text(f, o.divisor, "--divisor"), g);
    MetricReduceOptions opts;
    opts.max_iterations = o.max_iterations;
    const MetricReduction red = metric_reduce(g, q, d, opts);
    if (!metric_is_reduced(g, q, red.result))
        throw CheckFailure("metric-reduce: output failed the burning test");
    if (!(red.result == d + metric_laplacian(g, red.total)))
        throw CheckFailure("metric-reduce: accumulated function does not reproduce the output");
    Json steps = Json::array();
    for (const auto& s : red.steps) {
        const Rational drop = *s.b_before - *s.b_after;
        if (drop != s.predicted_drop)
            throw CheckFailure("metric-reduce: b_q drop differs from l(X) eps + outdeg(X) eps^2 / 2");
        Json j = component_json(s.component);
        j["epsilon"] = to_string(s.epsilon);
        j["b_before"] = to_string(*s.b_before);
        j["b_after"] = to_string(*s.b_after);
        j["drop"] = to_string(drop);
        steps.push_back(std::move(j));
    }
    r.outputs = {{"q", to_string(q)},
                 {"divisor", to_json(red.result)},
                 {"effective", to_json(red.effective)},
                 {"iterations", steps}};
    r.moves = {{"iterations", red.steps.size()}};
    r.text.push_back("divisor: " + format_metric_divisor(red.result));
    r.text.push_back("iterations: " + std::to_string(red.steps.size()));
    for (const auto& s : red.steps)
        r.text.push_back("  eps=" + to_string(s.epsilon) + " X=" + join_points(s.component.points) +
                         " drop=" + to_string(s.predicted_drop));
}

/// CSV rows for seeded random divisors; not wrapped in a report.
void run_bench(const GraphFile& f, const Options& o) {
    const Vertex q = parse_vertex(f.graph, o.q);
    if (!o.seed)
        throw InputError("bench requires --seed");
    const PotentialTable table(f.graph, q);
    const MoveBounds b = move_bounds(f.graph, table);
    std::cout << "index,degree,borrowings,set_firings,vertex_firings,total_moves,exact_bound,resistance_bound";
    if (o.timing)
        std::cout << ",microseconds";
    std::cout << "\n";
    for (std::size_t k = 0; k < o.count; ++k) {
        auto rng = substream(*o.seed, k);
        Divisor d(f.graph.n());
        for (Vertex v = 0; v < f.graph.n(); ++v) {
            const auto span = o.spread * static_cast<std::int64_t>(f.graph.degree(v));
            d[v] = std::uniform_int_distribution<std::int64_t>(-span, span)(rng);
        }
        const auto start = std::chrono::steady_clock::now();
        const ReductionReport rep = reduce(f.graph, table, d);
        const auto micros =
            std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
        std::cout << k << ',' << degree(d) << ',' << rep.moves_step2 << ',' << rep.moves_step3 << ','
                  << rep.total_set_fire_vertices << ',' << rep.total_moves() << ',' << b.exact_potential << ','
                  << b.resistance;
        if (o.timing)
            std::cout << ',' << micros;
        std::cout << "\n";
    }
}

void emit(const Report& r, const Options& o, double millis) {
    if (o.format == "json") {
        Json j = {{"command", r.command},
                  {"inputs_digest", r.digest},
                  {"seed", r.seed ? Json(*r.seed) : Json(nullptr)},
                  {"outputs", r.outputs},
                  {"moves", r.moves.is_null() ? Json(nullptr) : r.moves},
                  {"bounds", r.bounds.is_null() ? Json(nullptr) : r.bounds}};
        if (o.timing)
            j["wall_time_ms"] = millis;
        std::cout << j.dump(2) << "\n";
        return;
    }
    for (const auto& line : r.text)
        std::cout << line << "\n";
    if (o.timing)
        std::cout << "wall_time_ms: " << millis << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chip-firing and divisor computations on finite and metric graphs"};
    app.require_subcommand(1);
    Options o;

    struct Command {
        const char* name;
        const char* help;
        void (*run)(const GraphFile&, const Options&, Report&);
        bool divisor, other, tree, degree, seed, count, c, metric;
    };
    const std::vector<Command> commands = {
        {"check-reduced", "burning test for a q-reduced divisor", run_check_reduced, true, false, false, false, false, false, false, false},
        {"reduce", "q-reduced divisor equivalent to the input", run_reduce, true, false, false, false, false, false, false, false},
        {"to-tree", "spanning tree of a q-reduced divisor", run_to_tree, true, false, false, false, false, false, false, false},
        {"from-tree", "q-reduced divisor of a spanning tree", run_from_tree, false, false, true, true, false, false, false, false},
        {"count-trees", "number of spanning trees", run_count_trees, false, false, false, false, false, false, false, false},
        {"jacobian", "invariant factors and generators of the Jacobian", run_jacobian, false, false, false, false, false, false, false, false},
        {"sample-tree", "uniform random spanning trees", run_sample_tree, false, false, false, false, true, true, false, false},
        {"group-add", "sum of two reduced degree-zero divisors", run_group_add, true, true, false, false, false, false, false, false},
        {"winnable", "dollar game: is D equivalent to an effective divisor", run_winnable, true, false, false, false, false, false, false, false},
        {"rank", "test r(D) >= c", run_rank, true, false, false, false, false, false, true, false},
        {"bounds", "upper bounds on reduction moves", run_bounds, false, false, false, false, false, false, false, false},
        {"metric-check", "metric burning test", run_metric_check, true, false, false, false, false, false, false, true},
        {"metric-reduce", "metric q-reduced divisor with epsilon-move log", run_metric_reduce, true, false, false, false, false, false, false, true},
    };

    std::vector<std::pair<CLI::App*, const Command*>> subs;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--graph", o.graph_path, "graph file")->required();
        sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--timing", o.timing, "report wall time");
    };
    for (const auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        add_common(sub);
        if (std::string(cmd.name) != "count-trees" && std::string(cmd.name) != "rank")
            sub->add_option("--q", o.q, cmd.metric ? "base point (v:<i> or e:<edge>@<offset>)" : "base vertex");
        if (cmd.divisor)
            sub->add_option("--divisor", o.divisor, "divisor text, @file, or a name from the graph file")->required();
        if (cmd.other)
            sub->add_option("--other", o.other, "second divisor")->required();
        if (cmd.tree)
            sub->add_option("--tree", o.tree, "spanning tree edge indices")->required();
        if (cmd.degree)
            sub->add_option("--degree", o.degree, "degree of the output divisor (default: genus)");
        if (cmd.seed)
            sub->add_option("--seed", o.seed, "random seed")->required();
        if (cmd.count) {
            sub->add_option("--count", o.count, "number of samples");
            sub->add_option("--jobs", o.jobs, "worker threads");
        }
        if (cmd.c)
            sub->add_option("--c", o.c, "rank threshold")->required()->check(CLI::NonNegativeNumber);
        if (cmd.metric)
            sub->add_option("--max-iterations", o.max_iterations, "iteration cap");
        subs.emplace_back(sub, &cmd);
    }
    CLI::App* bench = app.add_subcommand("bench", "CSV of move counts for seeded random divisors");
    add_common(bench);
    bench->add_option("--q", o.q, "base vertex");
    bench->add_option("--seed", o.seed, "random seed")->required();
    bench->add_option("--count", o.count, "number of divisors");
    bench->add_option("--spread", o.spread, "coordinates drawn from [-spread*deg, spread*deg]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        const GraphFile file = [&] {
            try {
                return parse_graph(read_file(o.graph_path));
            } catch (const ParseError& e) {
                throw InputError(o.graph_path + ":" + e.what());
            }
        }();
        if (bench->parsed()) {
            run_bench(file, o);
            return 0;
        }
        for (const auto& [sub, cmd] : subs) {
            if (!sub->parsed())
                continue;
            Report r;
            r.command = cmd->name;
            r.seed = o.seed;
            std::string digest_input = serialize(file) + "\n" + cmd->name;
            for (const auto* opt : sub->get_options())
                if (opt->count() > 0 && opt->get_name() != "--format" && opt->get_name() != "--timing" &&
                    opt->get_name() != "--graph")
                {
                    const std::string value = opt->as<std::string>();
                    digest_input += "\n" + opt->get_name() + "=" + value;
                    if (!value.empty() && value.front() == '@')
                        digest_input += "\n" + read_file(value.substr(1));
                }
            r.digest = "fnv1a64:" + hex64(fnv1a(digest_input));
            cmd->run(file, o, r);
            const double millis =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            emit(r, o, millis);
            return 0;
        }
    } catch (const CheckFailure& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
