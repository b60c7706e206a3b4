#include "hatcheck/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "hatcheck/bounds.hpp"
#include "hatcheck/constructions.hpp"
#include "hatcheck/errors.hpp"
#include "hatcheck/graph.hpp"
#include "hatcheck/solver.hpp"
#include "hatcheck/verify.hpp"

namespace hatcheck {

namespace {

class Report {
public:
    void add(std::string key, std::string value) { items_.emplace_back(std::move(key), std::move(value)); }
    void add(std::string key, std::uint64_t value) { add(std::move(key), std::to_string(value)); }
    void add(std::string key, int value) { add(std::move(key), std::to_string(value)); }
    void add(std::string key, bool value) { add(std::move(key), std::string(value ? "yes" : "no")); }
    void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }

    void write(std::ostream& out, bool json) const {
        if (json) {
            nlohmann::ordered_json j = nlohmann::ordered_json::object();
            for (const auto& [k, v] : items_) j[k] = v;
            out << j.dump(2) << '\n';
            return;
        }
        for (const auto& [k, v] : items_) {
            if (v.find('\n') == std::string::npos) {
                out << k << ": " << v << '\n';
                continue;
            }
            out << k << ":\n";
            std::istringstream lines(v);
            for (std::string line; std::getline(lines, line);) out << "  " << line << '\n';
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

std::string hex64(std::uint64_t x) {
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << x;
    return s.str();
}

std::string set_text(std::span<const Vertex> vs) {
    std::string s = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + std::to_string(vs[i]);
    return s + "}";
}

struct Input {
    Graph graph;
    std::string digest;
};

Input load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(ParseError::Kind::Malformed, 0, "cannot open '" + path + "'");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return {parse_graph(bytes), "fnv1a64:" + hex64(fnv1a64(bytes))};
}

ColorBudget parse_budget(const std::string& text, int n) {
    std::vector<Color> q;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || v == 0 || v > std::numeric_limits<Color>::max())
            throw PreconditionError("budget entry '" + item + "' is not a positive color count");
        q.push_back(static_cast<Color>(v));
    }
    if (q.size() == 1) return ColorBudget::uniform(n, q[0]);
    if (static_cast<int>(q.size()) != n) throw PreconditionError("budget list length differs from vertex count");
    return ColorBudget(std::move(q));
}

std::string budget_text(const ColorBudget& b) {
    if (b.size() > 0 && b.is_uniform()) return "uniform " + std::to_string(b[0]);
    return b.size() == 0 ? "none" : to_text(b);
}

// ---------------------------------------------------------------------------

void cmd_analyze(const Graph& g, const Guards& guards, Report& r) {
    r.add("vertices", g.vertex_count());
    r.add("edges", static_cast<std::uint64_t>(g.edge_count()));
    r.add("max-degree", g.vertex_count() ? g.max_degree() : 0);
    r.add("components", static_cast<std::uint64_t>(connected_components(g).size()));
    const BlockDecomposition bd = block_decomposition(g);
    r.add("blocks", static_cast<std::uint64_t>(bd.blocks.size()));
    for (std::size_t i = 0; i < bd.blocks.size(); ++i) r.add("block " + std::to_string(i), set_text(bd.blocks[i]));
    r.add("cut-vertices", bd.cut_vertices.empty() ? std::string("none") : set_text(bd.cut_vertices));
    try {
        r.add("circumference", circumference(g, guards));
    } catch (const GuardExceeded& e) {
        r.add("circumference", std::string("guard-exceeded (") + e.what() + ")");
    }
    for (std::size_t i = 0; i < bd.blocks.size(); ++i) {
        const Subgraph b = induced_subgraph(g, bd.blocks[i]);
        const TreedepthCertificate cert = dfs_treedepth_certificate(b.graph, 0);
        std::string parents;
        for (Vertex v = 0; v < cert.tree.vertex_count(); ++v) {
            const Vertex p = cert.tree.parent(v);
            parents += (v ? " " : "") + std::to_string(b.to_parent[v]) + "<-" +
                       (p == RootedTree::kNoParent ? std::string("root") : std::to_string(b.to_parent[p]));
        }
        r.add("certificate " + std::to_string(i), "depth " + std::to_string(cert.depth) + " " + parents);
    }
    const auto classes = greedy_proper_coloring(g);
    r.add("coloring-classes", static_cast<std::uint64_t>(classes.size()));
    for (std::size_t i = 0; i < classes.size(); ++i) r.add("class " + std::to_string(i), set_text(classes[i]));
}

std::string transcript_text(const SolveOutcome& o) {
    std::string t = to_text(o);
    return t.substr(t.find('\n') + 1);
}

int cmd_solve(const Graph& g, int guesses, const std::optional<std::string>& budget, bool sweep, const Guards& guards,
              Report& r) {
    if (g.vertex_count() == 0) throw PreconditionError("solve needs at least one vertex");
    SolverOptions opt;
    opt.guards = guards;
    r.add("guesses", guesses);
    if (!sweep) {
        if (!budget) throw PreconditionError("solve needs --budget unless --sweep is given");
        const ColorBudget b = parse_budget(*budget, g.vertex_count());
        r.add("budget", budget_text(b));
        try {
            const SolveOutcome o = players_win(g, b, guesses, opt);
            r.add("winner", to_string(o.winner));
            r.add("nodes", o.nodes);
            if (o.certificate) {
                r.add("certificate", to_text(*o.certificate));
            } else {
                r.add("refutation-leaves", o.refutation_leaves);
                r.add("refutation", transcript_text(o));
            }
        } catch (const GuardExceeded& e) {
            r.add("winner", "unknown");
            r.add("guard-exceeded", e.what());
            return kExitGuard;
        }
        return kExitOk;
    }
    Color q = 1;
    for (;; ++q) {
        try {
            const SolveOutcome o = players_win(g, ColorBudget::uniform(g.vertex_count(), q), guesses, opt);
            r.add("q " + std::to_string(q), std::string(to_string(o.winner)) + " nodes " + std::to_string(o.nodes));
            if (o.winner == Winner::Adversary) break;
        } catch (const GuardExceeded& e) {
            r.add("q " + std::to_string(q), std::string("guard-exceeded (") + e.what() + ")");
            r.add(guesses == 1 ? "hg-lower-bound" : "hg2-lower-bound", static_cast<std::uint64_t>(q - 1));
            return kExitGuard;
        }
    }
    r.add(guesses == 1 ? "hg" : "hg2", static_cast<std::uint64_t>(q - 1));
    return kExitOk;
}

void add_bound(Report& r, const std::string& key, const BigBound& b) {
    r.add(key, to_text(b));
    r.add(key + "-approx", approx_text(b));
    if (!b.is_exact()) r.add(key + "-log2", to_text(b.log2_enclosure(), 15));
}

struct BoundArgs {
    std::string seq;
    int n = -1;
    int circ = -1;
    std::vector<int> tary;
    int lll = -1;
    int theta = -1;
};

void cmd_bound(const BoundArgs& a, Report& r) {
    int chosen = 0;
    if (!a.seq.empty()) {
        ++chosen;
        if (a.n < 0) throw PreconditionError("--seq needs --n");
        if (a.seq != "sylvester" && a.seq != "a") throw PreconditionError("--seq takes 'sylvester' or 'a'");
        r.add("sequence", a.seq);
        r.add("n", a.n);
        add_bound(r, "value", a.seq == "a" ? two_guess_seq(a.n) : sylvester(a.n));
    }
    if (a.circ >= 0) {
        ++chosen;
        r.add("circumference", a.circ);
        const std::uint64_t d = circ_depth(a.circ);
        r.add("depth", d);
        add_bound(r, "value", circ_bound(a.circ));
        if (d <= 64) add_bound(r, "a-depth", two_guess_seq(static_cast<int>(d)));
    }
    if (!a.tary.empty()) {
        ++chosen;
        const int h = a.tary[0];
        const int t = a.tary[1];
        r.add("h", h);
        r.add("t", t);
        const BigBound rec = n_h_t_recursive(h, t);
        const BigBound closed = n_h_t_closed(h, t);
        add_bound(r, "recursive", rec);
        add_bound(r, "closed", closed);
        r.add("recursive-le-closed", certainly_le(rec, closed));
    }
    if (a.lll >= 0) {
        ++chosen;
        r.add("t", a.lll);
        r.add("value", to_text(lll_degree_bound(a.lll), 15));
        r.add("ceiling", lll_degree_ceiling(a.lll));
    }
    if (a.theta >= 0) {
        ++chosen;
        const Interval iv = theta_estimate(a.theta);
        r.add("precision-bits", a.theta);
        r.add("theta", to_text(iv, 20));
        r.add("width", iv.width().to_string(3, MPFR_RNDU));
    }
    if (chosen != 1) throw PreconditionError("bound takes exactly one of --seq, --circ, --tary, --lll, --theta");
}

struct VerifyArgs {
    std::string lemma;
    std::string trials = "1000";
    std::uint64_t seed = 0;
    std::optional<Color> ell;
    std::optional<Vertex> vertex;
    int t = 2;
    int h = 2;
    std::optional<Color> base;
    std::string depth = "certificate";
    bool trace = false;
};

// Default split for the cut-vertex lemma: G1 is v plus the component of
// G - v holding the smallest other vertex, G2 is v plus the rest.
std::pair<std::vector<Vertex>, std::vector<Vertex>> rus_split(const Graph& g, Vertex v) {
    std::vector<Vertex> all(static_cast<std::size_t>(g.vertex_count()));
    for (Vertex w = 0; w < g.vertex_count(); ++w) all[w] = w;
    if (!block_decomposition(g).is_cut_vertex(v)) return {all, {v}};
    const Subgraph rest = remove_vertices(g, std::vector<Vertex>{v});
    const auto comps = connected_components(rest.graph);
    std::vector<Vertex> g1{v}, g2{v};
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (Vertex w : comps[i]) (i == 0 ? g1 : g2).push_back(rest.to_parent[w]);
    std::sort(g1.begin(), g1.end());
    std::sort(g2.begin(), g2.end());
    return {g1, g2};
}

OraclePtr build_oracle(const Graph& g, const VerifyArgs& a, const Guards& guards, Report& r) {
    const int n = g.vertex_count();
    auto ell_or = [&](std::uint64_t fallback) { return a.ell ? *a.ell : static_cast<Color>(fallback); };
    if (a.lemma == "is") {
        if (n == 0) throw PreconditionError("lemma is needs a nonempty graph");
        const std::vector<Vertex> u = greedy_proper_coloring(g).front();
        int r_deg = 1;
        for (Vertex w : u) r_deg = std::max(r_deg, g.degree(w));
        const Subgraph rest = remove_vertices(g, u);
        const Color ell = ell_or(std::max(2, rest.graph.vertex_count() + 1));
        r.add("independent-set", set_text(u));
        r.add("r", r_deg);
        r.add("ell", static_cast<std::uint64_t>(ell));
        return oracle_lemma_is(g, u, r_deg, ell,
                               oracle_exhaustive(rest.graph, ColorBudget::uniform(rest.graph.vertex_count(), ell), 1,
                                                 guards));
    }
    if (a.lemma == "two") {
        if (n == 0) throw PreconditionError("lemma two needs a nonempty graph");
        const Vertex v = a.vertex.value_or(0);
        if (v < 0 || v >= n) throw PreconditionError("--vertex is outside the graph");
        const Color ell = ell_or(std::max(1, 2 * (n - 1)));
        const Subgraph h = remove_vertices(g, std::vector<Vertex>{v});
        r.add("vertex", v);
        r.add("ell", static_cast<std::uint64_t>(ell));
        return oracle_lemma_two_at_v(
            g, v, {0, 1}, ell,
            oracle_exhaustive(h.graph, ColorBudget::uniform(h.graph.vertex_count(), ell + 1), 2, guards));
    }
    if (a.lemma == "rus") {
        if (n == 0) throw PreconditionError("lemma rus needs a nonempty graph");
        const BlockDecomposition bd = block_decomposition(g);
        const Vertex v = a.vertex ? *a.vertex : bd.cut_vertices.empty() ? 0 : bd.cut_vertices.front();
        if (v < 0 || v >= n) throw PreconditionError("--vertex is outside the graph");
        const auto [g1, g2] = rus_split(g, v);
        const Color ell =
            ell_or(std::max<std::uint64_t>(g1.size(), 2 * static_cast<std::uint64_t>(g2.size())));
        r.add("vertex", v);
        r.add("g1", set_text(g1));
        r.add("g2", set_text(g2));
        r.add("ell", static_cast<std::uint64_t>(ell));
        RusParts parts;
        parts.guards = guards;
        return oracle_lemma_rus(g, v, g1, g2, ell, parts);
    }
    if (a.lemma == "blocks") {
        std::size_t biggest = 1;
        for (const auto& b : block_decomposition(g).blocks) biggest = std::max(biggest, b.size());
        const Color ell = ell_or(2 * biggest);
        r.add("ell", static_cast<std::uint64_t>(ell));
        return oracle_lemma_blocks(g, ell, exhaustive_block_factory(guards));
    }
    if (a.lemma == "closure") {
        if (n == 0 || !is_connected(g)) throw PreconditionError("lemma closure needs a connected graph");
        const TreedepthCertificate cert = dfs_treedepth_certificate(g, 0);
        r.add("tree-height", cert.tree.height());
        if (closure(cert.tree) == g) return oracle_closure(cert.tree, LeafOrder::Smallest, guards);
        const auto colors = two_guess_seq(cert.tree.height() + 1).to_u64();
        if (!colors || *colors > std::numeric_limits<Color>::max())
            throw GuardExceeded("colors", "the DFS tree is too deep for a color index");
        return oracle_closure_cover(g, cert.tree, static_cast<Color>(*colors), guards);
    }
    if (a.lemma == "circ") {
        if (a.depth != "certificate" && a.depth != "circumference")
            throw PreconditionError("--depth takes 'certificate' or 'circumference'");
        const CircResult c =
            oracle_theorem_circ(g, a.depth == "certificate" ? CircDepth::Certificate : CircDepth::Circumference, guards);
        r.add("circumference", c.circumference);
        r.add("circumference-exact", c.circumference_exact);
        r.add("depth", c.depth);
        r.add("bound", to_text(c.bound));
        if (c.formula) r.add("formula-bound", approx_text(*c.formula));
        if (c.guard_note) r.add("guard-note", *c.guard_note);
        if (!c.oracle) throw GuardExceeded("colors", c.guard_note.value_or("no oracle at this depth"));
        return c.oracle;
    }
    if (a.lemma == "tary") {
        TaryOptions opt;
        opt.base_colors = a.base;
        opt.guards = guards;
        const TaryResult t = oracle_theorem_tary(g, a.t, a.h, opt);
        r.add("t", a.t);
        r.add("h", a.h);
        r.add("bound", to_text(t.bound));
        if (t.guard_note) r.add("guard-note", *t.guard_note);
        return t.oracle;
    }
    throw PreconditionError("unknown lemma '" + a.lemma + "' (is, two, rus, blocks, closure, circ, tary)");
}

constexpr std::uint64_t kFallbackTrials = 10'000;

int cmd_verify(const Graph& g, const VerifyArgs& a, const Guards& guards, Report& r) {
    r.add("lemma", a.lemma);
    r.add("seed", a.seed);
    const OraclePtr oracle = build_oracle(g, a, guards, r);
    r.add("oracle-budget", budget_text(oracle->budget()));
    r.add("oracle-guesses", oracle->guess_count());
    r.add("construction", describe(*oracle));

    VerifyOptions opt;
    opt.seed = a.seed;
    opt.guards = guards;
    if (a.trials == "exhaustive") {
        opt.trials = 0;
        opt.exhaustive = true;
        opt.exhaustive_limit = guards.enumeration;
        const std::uint64_t space = strategy_space_size(oracle->graph(), oracle->budget(), oracle->guess_count());
        if (space > opt.exhaustive_limit) {
            opt.exhaustive = false;
            opt.trials = kFallbackTrials;
            r.add("note", "strategy space exceeds the enumeration guard; sampling " + std::to_string(kFallbackTrials) +
                              " random strategies instead");
        }
    } else {
        std::size_t used = 0;
        try {
            opt.trials = std::stoull(a.trials, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != a.trials.size())
            throw PreconditionError("--trials takes a count or 'exhaustive'");
        opt.exhaustive = false;
    }

    if (a.trace) {
        SplitMix64 rng(a.seed);
        const Strategy s = random_strategy(oracle->graph(), oracle->budget(), oracle->guess_count(), rng, guards);
        Trace trace;
        try {
            const HatAssignment got = oracle->defeat(s, &trace);
            trace.push_back("assignment " + to_text(got));
        } catch (const PremiseViolation& e) {
            trace.push_back(std::string("premise violation: ") + e.what());
        }
        std::string t;
        for (const auto& line : trace) t += line + '\n';
        r.add("trace", t);
    }

    const VerifyReport v = verify_oracle(*oracle, opt);
    r.add("strategy-space", v.space == ~std::uint64_t{0} ? std::string(">= 2^64") : std::to_string(v.space));
    r.add("mode", v.enumerated ? "exhaustive" : "random");
    r.add("defeated", std::to_string(v.defeated()) + "/" + std::to_string(v.checked()));
    r.add("premise-violations", v.premise_violations);
    if (v.premise_witness) r.add("premise-witness", *v.premise_witness);
    if (v.counterexample) r.add("counterexample", *v.counterexample);
    if (v.premise_violations > 0) return kExitPremise;
    return v.all_defeated() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hat guessing game toolkit: exact solving, adversary constructions and bounds", "hatcheck"};
    app.require_subcommand(1);
    bool dump = false;
    app.add_flag("--dump", dump, "Print the report as JSON");

    std::string file;
    auto* analyze = app.add_subcommand("analyze", "Blocks, cut vertices, circumference and certificates");
    analyze->add_option("graph", file, "Edge-list file")->required();

    int guesses = 1;
    std::optional<std::string> budget;
    bool sweep = false;
    auto* solve = app.add_subcommand("solve", "Decide whether the players win");
    solve->add_option("graph", file, "Edge-list file")->required();
    solve->add_option("--guesses", guesses, "Guesses per vertex (1 or 2)")->check(CLI::IsMember({1, 2}));
    solve->add_option("--budget", budget, "Colors: one count for all vertices or a comma list");
    solve->add_flag("--sweep", sweep, "Increase a uniform budget until the adversary wins");

    BoundArgs ba;
    auto* bound = app.add_subcommand("bound", "Evaluate sequences and closed-form bounds");
    bound->add_option("--seq", ba.seq, "sylvester or a");
    bound->add_option("--n", ba.n, "Sequence index");
    bound->add_option("--circ", ba.circ, "Circumference c >= 3");
    bound->add_option("--tary", ba.tary, "Height h and arity t")->expected(2);
    bound->add_option("--lll", ba.lll, "Degree parameter t");
    bound->add_option("--theta", ba.theta, "Precision bits of the theta enclosure");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check a construction against many strategies");
    verify->set_help_flag("--help", "Print this help message and exit");
    verify->add_option("graph", file, "Edge-list file")->required();
    verify->add_option("--lemma", va.lemma, "is, two, rus, blocks, closure, circ or tary")->required();
    verify->add_option("--trials", va.trials, "Random strategy count, or 'exhaustive'");
    verify->add_option("--seed", va.seed, "Seed of the strategy sampler");
    verify->add_option("--ell", va.ell, "Color parameter of the lemma");
    verify->add_option("--vertex", va.vertex, "Distinguished vertex (two, rus)");
    verify->add_option("--t", va.t, "Tree arity (tary)");
    verify->add_option("--h", va.h, "Tree height (tary)");
    verify->add_option("--base", va.base, "Colors at the base of the tary recursion");
    verify->add_option("--depth", va.depth, "certificate or circumference (circ)");
    verify->add_flag("--trace", va.trace, "Print the steps of one defeat");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    Report r;
    std::string echo = "hatcheck";
    for (const auto& a : args) echo += " " + a;
    r.add("command", echo);

    int code = kExitOk;
    try {
        const Guards guards = Guards::from_environment();
        if (*bound) {
            cmd_bound(ba, r);
        } else {
            const Input in = load_graph(file);
            r.add("input-digest", in.digest);
            if (*analyze) cmd_analyze(in.graph, guards, r);
            if (*solve) code = cmd_solve(in.graph, guesses, budget, sweep, guards, r);
            if (*verify) code = cmd_verify(in.graph, va, guards, r);
        }
    } catch (const ParseError& e) {
        r.add("error", std::string("parse: ") + e.what());
        code = kExitParse;
    } catch (const GuardExceeded& e) {
        r.add("error", std::string("guard exceeded: ") + e.what());
        code = kExitGuard;
    } catch (const PremiseViolation& e) {
        r.add("error", std::string("premise violation: ") + e.what());
        r.add("premise-witness", e.witness());
        code = kExitPremise;
    } catch (const std::overflow_error& e) {
        r.add("error", std::string("out of range: ") + e.what());
        code = kExitGuard;
    } catch (const std::invalid_argument& e) {
        r.add("error", std::string("invalid argument: ") + e.what());
        code = kExitUsage;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    r.add("exit-code", code);
    r.add("wall-time-ms", static_cast<std::uint64_t>(ms.count()));
    r.write(out, dump);
    if (code != kExitOk) err << "hatcheck: exit " << code << '\n';
    return code;
}

}  // namespace hatcheck
