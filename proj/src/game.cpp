#include "hatcheck/game.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "hatcheck/errors.hpp"

namespace hatcheck {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kSaturated / a) return kSaturated;
    return a * b;
}

}  // namespace

// ---------------------------------------------------------------------------
// ColorBudget / HatAssignment

ColorBudget::ColorBudget(std::vector<Color> per_vertex) : q_(std::move(per_vertex)) {
    for (Color q : q_)
        if (q == 0) throw PreconditionError("every vertex needs at least one color");
}

ColorBudget ColorBudget::uniform(int vertex_count, Color q) {
    return ColorBudget(std::vector<Color>(static_cast<std::size_t>(vertex_count), q));
}

std::uint64_t ColorBudget::assignment_count() const noexcept {
    std::uint64_t total = 1;
    for (Color q : q_) total = saturating_mul(total, q);
    return total;
}

bool ColorBudget::is_uniform() const noexcept {
    return std::adjacent_find(q_.begin(), q_.end(), std::not_equal_to<>()) == q_.end();
}

bool ColorBudget::dominates(const ColorBudget& other) const {
    if (other.size() != size()) return false;
    for (int v = 0; v < size(); ++v)
        if (q_[v] < other.q_[v]) return false;
    return true;
}

std::string to_text(const ColorBudget& b) {
    std::ostringstream out;
    for (int v = 0; v < b.size(); ++v) out << (v ? " " : "") << b[v];
    return out.str();
}

bool HatAssignment::within(const ColorBudget& b) const {
    if (b.size() != size()) return false;
    for (int v = 0; v < size(); ++v)
        if (colors[v] >= b[v]) return false;
    return true;
}

std::string to_text(const HatAssignment& a) {
    std::ostringstream out;
    for (int v = 0; v < a.size(); ++v) out << (v ? " " : "") << a.colors[v];
    return out.str();
}

// ---------------------------------------------------------------------------
// Strategy

Strategy::Strategy(Graph g, ColorBudget budget, int guess_count, const Guards& guards)
    : graph_(std::move(g)), budget_(std::move(budget)), guess_count_(guess_count) {
    if (guess_count_ != 1 && guess_count_ != 2) throw PreconditionError("guess_count must be 1 or 2");
    if (budget_.size() != graph_.vertex_count()) throw PreconditionError("budget length differs from vertex count");
    const int n = graph_.vertex_count();
    entry_counts_.resize(static_cast<std::size_t>(n));
    tables_.resize(static_cast<std::size_t>(n));
    std::uint64_t total = 0;
    for (Vertex v = 0; v < n; ++v) {
        std::uint64_t count = 1;
        for (Vertex w : graph_.neighbors(v)) count = saturating_mul(count, budget_[w]);
        total = count > kSaturated - total ? kSaturated : total + count;
        if (total > guards.strategy_entries)
            throw GuardExceeded("entries", "strategy needs more than " + std::to_string(guards.strategy_entries) +
                                               " table entries");
        entry_counts_[v] = static_cast<std::size_t>(count);
        tables_[v].assign(entry_counts_[v] * static_cast<std::size_t>(guess_count_), 0);
    }
}

std::uint64_t Strategy::total_entries() const noexcept {
    std::uint64_t total = 0;
    for (auto c : entry_counts_) total += c;
    return total;
}

std::size_t Strategy::entry_index(Vertex v, const HatAssignment& a) const {
    std::size_t index = 0;
    for (Vertex w : graph_.neighbors(v)) index = index * budget_[w] + a.colors[w];
    return index;
}

std::size_t Strategy::encode(Vertex v, std::span<const Color> neighborhood) const {
    const auto nb = graph_.neighbors(v);
    if (neighborhood.size() != nb.size()) throw PreconditionError("neighborhood coloring has wrong arity");
    std::size_t index = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
        if (neighborhood[i] >= budget_[nb[i]]) throw PreconditionError("neighborhood color out of budget");
        index = index * budget_[nb[i]] + neighborhood[i];
    }
    return index;
}

std::vector<Color> Strategy::decode(Vertex v, std::size_t index) const {
    const auto nb = graph_.neighbors(v);
    std::vector<Color> out(nb.size());
    for (std::size_t i = nb.size(); i-- > 0;) {
        const Color q = budget_[nb[i]];
        out[i] = static_cast<Color>(index % q);
        index /= q;
    }
    return out;
}

GuessSet Strategy::guesses(Vertex v, std::size_t entry) const {
    const auto& t = tables_.at(v);
    if (guess_count_ == 1) return GuessSet(t.at(entry));
    return GuessSet(t.at(2 * entry), t.at(2 * entry + 1));
}

void Strategy::set_guesses(Vertex v, std::size_t entry, GuessSet guesses) {
    if (guesses.size() > guess_count_) throw PreconditionError("too many guesses for this strategy");
    if (guesses.max() >= budget_[v]) throw PreconditionError("guess outside the vertex budget");
    auto& t = tables_.at(v);
    if (entry >= entry_counts_.at(v)) throw PreconditionError("table entry out of range");
    if (guess_count_ == 1) {
        t[entry] = guesses[0];
    } else {
        t[2 * entry] = guesses.min();
        t[2 * entry + 1] = guesses.max();
    }
}

std::uint64_t guess_set_count(Color q, int guess_count) {
    const std::uint64_t singles = q;
    return guess_count == 1 ? singles : singles + singles * (singles - 1) / 2;
}

GuessSet guess_set_at(Color q, int guess_count, std::uint64_t index) {
    if (index >= guess_set_count(q, guess_count)) throw PreconditionError("guess set index out of range");
    if (index < q) return GuessSet(static_cast<Color>(index));
    index -= q;
    for (Color a = 0; a + 1 < q; ++a) {
        const std::uint64_t row = q - 1 - a;
        if (index < row) return GuessSet(a, static_cast<Color>(a + 1 + index));
        index -= row;
    }
    throw PreconditionError("unreachable guess set index");
}

Strategy random_strategy(const Graph& g, const ColorBudget& b, int guess_count, SplitMix64& rng,
                         const Guards& guards) {
    Strategy s(g, b, guess_count, guards);
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        for (std::size_t e = 0; e < s.entry_count(v); ++e) {
            const auto first = static_cast<Color>(rng.uniform(b[v]));
            if (guess_count == 1) {
                s.set_guesses(v, e, GuessSet(first));
            } else {
                const auto second = static_cast<Color>(rng.uniform(b[v]));
                s.set_guesses(v, e, GuessSet(first, second));
            }
        }
    return s;
}

std::uint64_t strategy_space_size(const Graph& g, const ColorBudget& b, int guess_count) {
    std::uint64_t total = 1;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        std::uint64_t entries = 1;
        for (Vertex w : g.neighbors(v)) entries = saturating_mul(entries, b[w]);
        const std::uint64_t choices = guess_set_count(b[v], guess_count);
        for (std::uint64_t e = 0; e < entries && total != kSaturated && choices > 1; ++e)
            total = saturating_mul(total, choices);
    }
    return total;
}

StrategyEnumerator::StrategyEnumerator(const Graph& g, const ColorBudget& b, int guess_count, const Guards& guards)
    : current_(g, b, guess_count, guards) {
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        for (std::size_t e = 0; e < current_.entry_count(v); ++e) slots_.emplace_back(v, e);
    digits_.assign(slots_.size(), 0);
}

bool StrategyEnumerator::next() {
    if (!started_) {
        started_ = true;
        return true;
    }
    for (std::size_t i = slots_.size(); i-- > 0;) {
        const auto [v, e] = slots_[i];
        const Color q = current_.budget()[v];
        const std::uint64_t base = guess_set_count(q, current_.guess_count());
        if (++digits_[i] < base) {
            current_.set_guesses(v, e, guess_set_at(q, current_.guess_count(), digits_[i]));
            return true;
        }
        digits_[i] = 0;
        current_.set_guesses(v, e, guess_set_at(q, current_.guess_count(), 0));
    }
    return false;
}

GuessSet guesses_at(const Strategy& s, Vertex v, const HatAssignment& a) {
    return s.guesses(v, s.entry_index(v, a));
}

bool is_defeating(const Strategy& s, const HatAssignment& a) {
    for (Vertex v = 0; v < s.vertex_count(); ++v)
        if (guesses_at(s, v, a).contains(a.colors[v])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Assignment enumeration

AssignmentEnumerator::AssignmentEnumerator(ColorBudget budget, const Guards& guards)
    : budget_(std::move(budget)), count_(budget_.assignment_count()) {
    if (count_ > guards.enumeration)
        throw GuardExceeded("enumeration", std::to_string(count_) +
                                               " assignments exceed guard " + std::to_string(guards.enumeration));
    current_.colors.assign(static_cast<std::size_t>(budget_.size()), 0);
}

bool AssignmentEnumerator::next() {
    if (!started_) {
        started_ = true;
        return true;
    }
    for (int v = budget_.size(); v-- > 0;) {
        if (++current_.colors[v] < budget_[v]) return true;
        current_.colors[v] = 0;
    }
    return false;
}

std::vector<HatAssignment> enumerate_assignments(const ColorBudget& budget, const Guards& guards) {
    AssignmentEnumerator it(budget, guards);
    std::vector<HatAssignment> out;
    out.reserve(static_cast<std::size_t>(it.count()));
    while (it.next()) out.push_back(it.current());
    return out;
}

// ---------------------------------------------------------------------------
// Induced strategies

InducedStrategy induce_on(const Strategy& s, std::vector<Vertex> keep, const PartialAssignment& pins,
                          const Guards& guards) {
    const Graph& g = s.graph();
    if (static_cast<int>(pins.size()) != g.vertex_count()) throw PreconditionError("pins must cover every vertex");
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (pins[v] && *pins[v] >= s.budget()[v]) throw PreconditionError("pinned color outside budget");

    Subgraph sub = induced_subgraph(g, std::move(keep));
    const auto local = sub.from_parent(g.vertex_count());
    std::vector<Color> q;
    q.reserve(sub.to_parent.size());
    for (Vertex p : sub.to_parent) q.push_back(s.budget()[p]);

    Strategy out(sub.graph, ColorBudget(std::move(q)), s.guess_count(), guards);
    std::vector<Color> full;
    for (Vertex i = 0; i < out.vertex_count(); ++i) {
        const Vertex p = sub.to_parent[i];
        const auto parent_nb = g.neighbors(p);
        for (Vertex w : parent_nb)
            if (local[w] < 0 && !pins[w])
                throw PreconditionError("neighbor " + std::to_string(w) + " of kept vertex " + std::to_string(p) +
                                        " is neither kept nor pinned");
        full.resize(parent_nb.size());
        for (std::size_t e = 0; e < out.entry_count(i); ++e) {
            const auto mine = out.decode(i, e);
            std::size_t k = 0;
            for (std::size_t j = 0; j < parent_nb.size(); ++j)
                full[j] = local[parent_nb[j]] >= 0 ? mine[k++] : *pins[parent_nb[j]];
            out.set_guesses(i, e, s.guesses(p, s.encode(p, full)));
        }
    }
    return {std::move(out), std::move(sub.to_parent)};
}

InducedStrategy induce_strategy_after_fixing(const Strategy& s, const PartialAssignment& fixed, const Guards& guards) {
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < s.vertex_count(); ++v)
        if (!fixed.at(v)) keep.push_back(v);
    return induce_on(s, std::move(keep), fixed, guards);
}

Strategy merge_two_guess(const Strategy& a, const Strategy& b) {
    if (a.guess_count() != 1 || b.guess_count() != 1) throw PreconditionError("merge_two_guess takes 1-guess strategies");
    if (!(a.graph() == b.graph()) || !(a.budget() == b.budget()))
        throw PreconditionError("merge_two_guess needs the same graph and budget");
    Strategy out(a.graph(), a.budget(), 2, Guards{.strategy_entries = std::numeric_limits<std::uint64_t>::max()});
    for (Vertex v = 0; v < a.vertex_count(); ++v)
        for (std::size_t e = 0; e < a.entry_count(v); ++e)
            out.set_guesses(v, e, GuessSet(a.guesses(v, e)[0], b.guesses(v, e)[0]));
    return out;
}

Strategy as_two_guess(const Strategy& s) {
    if (s.guess_count() == 2) return s;
    return merge_two_guess(s, s);
}

Strategy restrict_budget(const Strategy& s, const ColorBudget& smaller, const Guards& guards) {
    if (!s.budget().dominates(smaller)) throw PreconditionError("restrict_budget needs a pointwise smaller budget");
    if (s.budget() == smaller) return s;
    Strategy out(s.graph(), smaller, s.guess_count(), guards);
    for (Vertex v = 0; v < s.vertex_count(); ++v) {
        const Color q = smaller[v];
        for (std::size_t e = 0; e < out.entry_count(v); ++e) {
            const auto nb = out.decode(v, e);
            const GuessSet g = s.guesses(v, s.encode(v, nb));
            const Color lo = g.min();
            const Color hi = g.max();
            GuessSet clamped = hi < q ? g : lo < q ? GuessSet(lo) : GuessSet(0);
            out.set_guesses(v, e, clamped);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string to_text(const Strategy& s) {
    std::ostringstream out;
    out << "guesses " << s.guess_count() << '\n';
    for (Vertex v = 0; v < s.vertex_count(); ++v)
        for (std::size_t e = 0; e < s.entry_count(v); ++e) {
            const GuessSet g = s.guesses(v, e);
            out << v << ' ' << e << ' ' << g[0];
            if (g.size() == 2) out << ' ' << g[1];
            out << '\n';
        }
    return out.str();
}

Strategy parse_strategy(std::string_view text, const Graph& g, const ColorBudget& b) {
    std::istringstream in{std::string(text)};
    std::string word;
    int guess_count = 0;
    if (!(in >> word >> guess_count) || word != "guesses")
        throw PreconditionError("strategy text must start with 'guesses g'");
    Strategy s(g, b, guess_count);
    std::vector<std::vector<char>> seen(static_cast<std::size_t>(g.vertex_count()));
    for (Vertex v = 0; v < g.vertex_count(); ++v) seen[v].assign(s.entry_count(v), 0);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        long long v = -1;
        long long e = -1;
        std::vector<long long> guesses;
        ls >> v >> e;
        for (long long c; ls >> c;) guesses.push_back(c);
        if (v < 0 || v >= g.vertex_count() || e < 0 || static_cast<std::size_t>(e) >= s.entry_count(v) ||
            guesses.empty() || guesses.size() > static_cast<std::size_t>(guess_count))
            throw PreconditionError("bad strategy line '" + line + "'");
        for (long long c : guesses)
            if (c < 0 || c >= static_cast<long long>(b[static_cast<Vertex>(v)]))
                throw PreconditionError("guess out of budget in '" + line + "'");
        const auto c0 = static_cast<Color>(guesses.front());
        const auto c1 = static_cast<Color>(guesses.back());
        s.set_guesses(static_cast<Vertex>(v), static_cast<std::size_t>(e), GuessSet(c0, c1));
        seen[v][e] = 1;
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (std::find(seen[v].begin(), seen[v].end(), 0) != seen[v].end())
            throw PreconditionError("strategy table of vertex " + std::to_string(v) + " is incomplete");
    return s;
}

}  // namespace hatcheck
