#include "hatcheck/solver.hpp"

#include <algorithm>
#include <sstream>

#include "hatcheck/errors.hpp"

namespace hatcheck {

const char* to_string(Winner w) noexcept { return w == Winner::Players ? "players" : "adversary"; }

namespace {

// Search state for players_win. Variables are table entries (v, e); the
// constraint for assignment a is "some vertex v guesses a[v] at entry e_v(a)".
class CoverSearch {
public:
    CoverSearch(const Graph& g, const ColorBudget& budget, int guess_count, const SolverOptions& options)
        : g_(g), budget_(budget), gc_(guess_count), options_(options), n_(g.vertex_count()) {
        if (n_ == 0) throw PreconditionError("players_win requires at least one vertex");
        if (budget.size() != n_) throw PreconditionError("budget length differs from vertex count");
        if (gc_ != 1 && gc_ != 2) throw PreconditionError("guess_count must be 1 or 2");

        const std::uint64_t count = budget.assignment_count();
        if (count > options.guards.assignments)
            throw GuardExceeded("assignments", std::to_string(count) + " assignments exceed guard " +
                                                   std::to_string(options.guards.assignments));
        assignments_ = static_cast<std::size_t>(count);

        Strategy shape(g, budget, gc_, Guards{.strategy_entries = options.guards.table_entries});
        var_base_.resize(static_cast<std::size_t>(n_) + 1, 0);
        for (Vertex v = 0; v < n_; ++v) var_base_[v + 1] = var_base_[v] + shape.entry_count(v);
        vars_ = var_base_[n_];
        var_vertex_.resize(vars_);
        for (Vertex v = 0; v < n_; ++v)
            for (std::size_t x = var_base_[v]; x < var_base_[v + 1]; ++x) var_vertex_[x] = v;

        domains_.resize(static_cast<std::size_t>(n_));
        for (Vertex v = 0; v < n_; ++v) {
            const Color q = budget[v];
            if (gc_ == 1 || q == 1) {
                for (Color c = 0; c < q; ++c) domains_[v].emplace_back(c);
            } else {
                // A pair dominates each of its singletons, so pairs suffice.
                for (Color a = 0; a < q; ++a)
                    for (Color b = a + 1; b < q; ++b) domains_[v].emplace_back(a, b);
            }
        }

        a_color_.resize(assignments_ * n_);
        a_var_.resize(assignments_ * n_);
        AssignmentEnumerator it(budget, Guards{.enumeration = count});
        std::size_t a = 0;
        std::vector<std::size_t> list_size(vars_, 0);
        while (it.next()) {
            const HatAssignment& cur = it.current();
            for (Vertex v = 0; v < n_; ++v) {
                const std::size_t x = var_base_[v] + shape.entry_index(v, cur);
                a_color_[a * n_ + v] = cur.colors[v];
                a_var_[a * n_ + v] = x;
                ++list_size[x];
            }
            ++a;
        }
        list_start_.resize(vars_ + 1, 0);
        for (std::size_t x = 0; x < vars_; ++x) list_start_[x + 1] = list_start_[x] + list_size[x];
        list_.resize(list_start_[vars_]);
        std::vector<std::size_t> fill(list_start_.begin(), list_start_.end() - 1);
        for (std::size_t b = 0; b < assignments_; ++b)
            for (Vertex v = 0; v < n_; ++v) list_[fill[a_var_[b * n_ + v]]++] = b;

        value_.assign(vars_, -1);
        cover_.assign(assignments_, 0);
        live_.assign(assignments_, static_cast<std::uint32_t>(n_));
        uncovered_ = assignments_;
        per_color_.resize(vars_);
        best_.assign(vars_, 0);
        required_.assign(vars_, kNoColor);
        shape_ = std::move(shape);
    }

    SolveOutcome run() {
        SolveOutcome out;
        const bool won = search();
        out.nodes = nodes_;
        out.refutation_leaves = leaves_;
        if (won) {
            out.winner = Winner::Players;
            out.certificate = certificate();
        } else {
            out.winner = Winner::Adversary;
            out.transcript = std::move(transcript_);
        }
        return out;
    }

private:
    struct Frame {
        std::size_t var;
        std::vector<int> values;
        std::size_t next = 0;
        bool assigned = false;
    };

    void assign(std::size_t x, int val) {
        value_[x] = val;
        const Vertex v = var_vertex_[x];
        const GuessSet& gs = domains_[v][static_cast<std::size_t>(val)];
        for (std::size_t i = list_start_[x]; i < list_start_[x + 1]; ++i) {
            const std::size_t a = list_[i];
            --live_[a];
            if (gs.contains(a_color_[a * n_ + v]) && cover_[a]++ == 0) --uncovered_;
        }
    }

    void unassign(std::size_t x) {
        const Vertex v = var_vertex_[x];
        const GuessSet& gs = domains_[v][static_cast<std::size_t>(value_[x])];
        for (std::size_t i = list_start_[x]; i < list_start_[x + 1]; ++i) {
            const std::size_t a = list_[i];
            ++live_[a];
            if (gs.contains(a_color_[a * n_ + v]) && --cover_[a] == 0) ++uncovered_;
        }
        value_[x] = -1;
    }

    // Per unassigned entry: how many uncovered assignments each color would
    // cover, and the best any single value can do.
    void tally() {
        for (std::size_t x = 0; x < vars_; ++x) {
            auto& pc = per_color_[x];
            pc.assign(value_[x] >= 0 ? 0 : budget_[var_vertex_[x]], 0);
            best_[x] = 0;
            if (value_[x] >= 0) continue;
            const Vertex v = var_vertex_[x];
            for (std::size_t i = list_start_[x]; i < list_start_[x + 1]; ++i) {
                const std::size_t a = list_[i];
                if (cover_[a] == 0) ++pc[a_color_[a * n_ + v]];
            }
            best_[x] = value_gain(x, best_value(x));
        }
    }

    std::uint64_t value_gain(std::size_t x, int val) const {
        const GuessSet& gs = domains_[var_vertex_[x]][static_cast<std::size_t>(val)];
        const auto& pc = per_color_[x];
        return gs.size() == 1 ? pc[gs[0]] : pc[gs[0]] + pc[gs[1]];
    }

    int best_value(std::size_t x) const {
        const auto& dom = domains_[var_vertex_[x]];
        int best = 0;
        std::uint64_t gain = 0;
        for (std::size_t i = 0; i < dom.size(); ++i) {
            const std::uint64_t g = value_gain(x, static_cast<int>(i));
            if (i == 0 || g > gain) {
                best = static_cast<int>(i);
                gain = g;
            }
        }
        return best;
    }

    HatAssignment assignment_at(std::size_t a) const {
        HatAssignment h;
        h.colors.assign(a_color_.begin() + static_cast<std::ptrdiff_t>(a * n_),
                        a_color_.begin() + static_cast<std::ptrdiff_t>((a + 1) * n_));
        return h;
    }

    std::string branch_id(const std::vector<Frame>& stack) const {
        std::string id;
        for (std::size_t i = 0; i < stack.size(); ++i) {
            if (i) id += '.';
            id += std::to_string(stack[i].next - 1);
        }
        return id.empty() ? "root" : id;
    }

    void record_leaf(const std::vector<Frame>& stack, std::optional<std::size_t> a, std::uint64_t cap) {
        ++leaves_;
        if (transcript_.size() >= options_.transcript_limit) return;
        RefutationLeaf leaf;
        leaf.branch = branch_id(stack);
        if (a) leaf.assignment = assignment_at(*a);
        leaf.uncovered = uncovered_;
        leaf.capacity = cap;
        transcript_.push_back(std::move(leaf));
    }

    // Returns the frame for the next decision, or nullopt when the node is
    // closed; `solved` is set when every assignment is covered.
    std::optional<Frame> expand(const std::vector<Frame>& stack, bool& solved) {
        solved = false;
        if (uncovered_ == 0) {
            solved = true;
            return std::nullopt;
        }
        for (std::size_t a = 0; a < assignments_; ++a) {
            if (cover_[a] == 0 && live_[a] == 0) {
                record_leaf(stack, a, 0);
                return std::nullopt;
            }
        }
        tally();
        std::uint64_t cap = 0;
        for (std::size_t x = 0; x < vars_; ++x) cap += best_[x];
        if (cap < uncovered_) {
            record_leaf(stack, std::nullopt, cap);
            return std::nullopt;
        }
        const std::uint64_t slack = cap - uncovered_;

        // An uncovered assignment with a single open entry fixes a color that
        // entry must guess.
        std::fill(required_.begin(), required_.end(), kNoColor);
        for (std::size_t a = 0; a < assignments_; ++a) {
            if (cover_[a] != 0 || live_[a] != 1) continue;
            for (Vertex v = 0; v < n_; ++v) {
                const std::size_t x = a_var_[a * n_ + v];
                if (value_[x] >= 0) continue;
                if (required_[x] == kNoColor) required_[x] = a_color_[a * n_ + v];
                break;
            }
        }

        // Values of x that keep the counting bound satisfiable: assigning x
        // loses best_[x] of capacity and gains the covered count.
        auto admissible = [&](std::size_t x, std::vector<int>& out) {
            out.clear();
            const auto& dom = domains_[var_vertex_[x]];
            for (std::size_t i = 0; i < dom.size(); ++i) {
                const int val = static_cast<int>(i);
                if (value_gain(x, val) + slack < best_[x]) continue;
                if (required_[x] != kNoColor && !dom[i].contains(required_[x])) continue;
                out.push_back(val);
            }
        };

        // When the bound already restricts some entry, branch on the entry with
        // the fewest admissible values (lowest vertex, then entry, on ties).
        // Otherwise pick the uncovered assignment with the fewest open entries
        // and, among those, the entry touching the most uncovered assignments.
        Frame f{vars_, {}, 0, false};
        std::vector<int> vals;
        for (std::size_t x = 0; x < vars_; ++x) {
            if (value_[x] >= 0) continue;
            admissible(x, vals);
            if (vals.size() < domains_[var_vertex_[x]].size() && (f.var == vars_ || vals.size() < f.values.size())) {
                f.var = x;
                f.values = vals;
                if (vals.size() <= 1) break;
            }
        }
        Color need = kNoColor;
        if (f.var == vars_) {
            std::size_t pick = assignments_;
            for (std::size_t a = 0; a < assignments_; ++a)
                if (cover_[a] == 0 && (pick == assignments_ || live_[a] < live_[pick])) pick = a;
            std::uint64_t best_reach = 0;
            for (Vertex v = 0; v < n_; ++v) {
                const std::size_t x = a_var_[pick * n_ + v];
                if (value_[x] >= 0) continue;
                std::uint64_t reach = 0;
                for (auto c : per_color_[x]) reach += c;
                if (f.var == vars_ || reach > best_reach) {
                    f.var = x;
                    best_reach = reach;
                    need = a_color_[pick * n_ + v];
                }
            }
            admissible(f.var, f.values);
        }
        if (f.values.empty()) {
            // Every remaining choice of this entry breaks the bound or leaves
            // an assignment with no open entry; branch on the required color
            // so each child closes with a concrete leaf.
            const auto& dom = domains_[var_vertex_[f.var]];
            for (std::size_t i = 0; i < dom.size(); ++i)
                if (required_[f.var] == kNoColor || dom[i].contains(required_[f.var]))
                    f.values.push_back(static_cast<int>(i));
        }
        // Values covering the chosen assignment first, then by coverage.
        std::stable_sort(f.values.begin(), f.values.end(), [&](int a, int b) {
            const auto& dom = domains_[var_vertex_[f.var]];
            const bool ca = need != kNoColor && dom[static_cast<std::size_t>(a)].contains(need);
            const bool cb = need != kNoColor && dom[static_cast<std::size_t>(b)].contains(need);
            if (ca != cb) return ca;
            return value_gain(f.var, a) > value_gain(f.var, b);
        });

        if (stack.empty() && options_.color_symmetry && budget_.is_uniform()) {
            // A per-vertex color permutation maps any value of this entry to
            // the first domain element, and nothing else is fixed yet.
            f.values.assign(1, 0);
        }
        return f;
    }

    bool search() {
        std::vector<Frame> stack;
        bool solved = false;
        if (auto f = expand(stack, solved)) stack.push_back(std::move(*f));
        if (solved) return true;
        while (!stack.empty()) {
            Frame& top = stack.back();
            if (top.assigned) {
                unassign(top.var);
                top.assigned = false;
            }
            if (top.next == top.values.size()) {
                stack.pop_back();
                continue;
            }
            if (++nodes_ > options_.guards.solver_nodes)
                throw GuardExceeded("nodes", "search exceeded " + std::to_string(options_.guards.solver_nodes) +
                                                 " nodes");
            assign(top.var, top.values[top.next++]);
            top.assigned = true;
            auto child = expand(stack, solved);
            if (solved) return true;
            if (child) stack.push_back(std::move(*child));
        }
        return false;
    }

    Strategy certificate() const {
        Strategy s = shape_;
        for (std::size_t x = 0; x < vars_; ++x) {
            const Vertex v = var_vertex_[x];
            const int val = value_[x] < 0 ? 0 : value_[x];
            s.set_guesses(v, x - var_base_[v], domains_[v][static_cast<std::size_t>(val)]);
        }
        return s;
    }

    const Graph& g_;
    const ColorBudget& budget_;
    int gc_;
    const SolverOptions& options_;
    int n_;
    std::size_t assignments_ = 0;
    std::size_t vars_ = 0;
    Strategy shape_;
    std::vector<std::size_t> var_base_;
    std::vector<Vertex> var_vertex_;
    std::vector<std::vector<GuessSet>> domains_;
    std::vector<Color> a_color_;
    std::vector<std::size_t> a_var_;
    std::vector<std::size_t> list_start_;
    std::vector<std::size_t> list_;
    std::vector<int> value_;
    std::vector<std::uint32_t> cover_;
    std::vector<std::uint32_t> live_;
    static constexpr Color kNoColor = ~Color{0};
    std::vector<std::vector<std::uint64_t>> per_color_;
    std::vector<std::uint64_t> best_;
    std::vector<Color> required_;
    std::uint64_t uncovered_ = 0;
    std::uint64_t nodes_ = 0;
    std::uint64_t leaves_ = 0;
    std::vector<RefutationLeaf> transcript_;
};

}  // namespace

SolveOutcome players_win(const Graph& g, const ColorBudget& budget, int guess_count, const SolverOptions& options) {
    return CoverSearch(g, budget, guess_count, options).run();
}

int hat_guessing_number(const Graph& g, int guess_count, const SolverOptions& options) {
    if (g.vertex_count() == 0) throw PreconditionError("hat guessing number of the empty graph is not defined");
    Color q = 1;
    while (players_win(g, ColorBudget::uniform(g.vertex_count(), q + 1), guess_count, options).winner ==
           Winner::Players)
        ++q;
    return static_cast<int>(q);
}

int hg_exact(const Graph& g, const SolverOptions& options) { return hat_guessing_number(g, 1, options); }
int hg2_exact(const Graph& g, const SolverOptions& options) { return hat_guessing_number(g, 2, options); }

std::optional<HatAssignment> find_defeating_assignment(const Graph& g, const Strategy& strategy,
                                                       const ColorBudget& budget, const Guards& guards) {
    if (!(strategy.graph() == g)) throw PreconditionError("strategy is for a different graph");
    if (!strategy.budget().dominates(budget))
        throw PreconditionError("budget exceeds the strategy's budget");
    AssignmentEnumerator it(budget, guards);
    while (it.next())
        if (is_defeating(strategy, it.current())) return it.current();
    return std::nullopt;
}

std::string to_text(const SolveOutcome& outcome) {
    std::ostringstream out;
    out << "winner " << to_string(outcome.winner) << '\n';
    if (outcome.certificate) {
        out << to_text(*outcome.certificate);
        return out.str();
    }
    for (const auto& leaf : outcome.transcript) {
        out << "branch " << leaf.branch << " defeated-by ";
        if (leaf.assignment)
            out << to_text(*leaf.assignment);
        else
            out << "counting " << leaf.uncovered << " > " << leaf.capacity;
        out << '\n';
    }
    if (outcome.refutation_leaves > outcome.transcript.size())
        out << "branches-omitted " << outcome.refutation_leaves - outcome.transcript.size() << '\n';
    return out.str();
}

}  // namespace hatcheck
