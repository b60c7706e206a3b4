#include "hatcheck/constructions.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "hatcheck/errors.hpp"
#include "hatcheck/solver.hpp"

namespace hatcheck {

namespace {

std::string set_text(std::span<const Vertex> vs) {
    std::string s = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + std::to_string(vs[i]);
    return s + "}";
}

std::string budget_text(const ColorBudget& b) {
    if (b.size() == 0) return "none";
    if (b.is_uniform()) return "uniform " + std::to_string(b[0]);
    return "(" + to_text(b) + ")";
}

Color checked_color(std::uint64_t q) {
    if (q > std::numeric_limits<Color>::max())
        throw GuardExceeded("colors", std::to_string(q) + " colors do not fit a color index");
    return static_cast<Color>(q);
}

std::vector<Vertex> sorted_unique(std::vector<Vertex> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

ColorBudget restrict_to(const ColorBudget& b, std::span<const Vertex> keep) {
    std::vector<Color> q;
    q.reserve(keep.size());
    for (Vertex v : keep) q.push_back(b[v]);
    return ColorBudget(std::move(q));
}

class EmptyOracle final : public AdversaryOracle {
public:
    explicit EmptyOracle(int gc) : AdversaryOracle(Graph(0), ColorBudget(), gc, "empty") {}

protected:
    HatAssignment defeat_exact(const Strategy&, Trace*, int) const override { return {}; }
};

class ExhaustiveOracle final : public AdversaryOracle {
public:
    ExhaustiveOracle(const Graph& g, const ColorBudget& b, int gc, const Guards& guards)
        : AdversaryOracle(g, b, gc, "exhaustive"), guards_(guards) {
        if (b.assignment_count() > guards.enumeration)
            throw GuardExceeded("enumeration", std::to_string(b.assignment_count()) +
                                                   " assignments exceed guard " + std::to_string(guards.enumeration));
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        auto a = find_defeating_assignment(graph(), s, budget(), guards_);
        if (!a)
            throw PremiseViolation("the players win on this " + std::to_string(graph().vertex_count()) +
                                       "-vertex graph at budget " + budget_text(budget()) + " with " +
                                       std::to_string(guess_count()) + " guess(es)",
                                   "graph\n" + to_text(graph()) + "budget " + to_text(budget()) + "\n" + to_text(s));
        note(trace, depth, "exhaustive: " + to_text(*a));
        return *a;
    }

private:
    Guards guards_;
};

class IsOracle final : public AdversaryOracle {
public:
    IsOracle(const Graph& g, std::vector<Vertex> u, int r, Color ell, OraclePtr sub, Color colors)
        : AdversaryOracle(g, ColorBudget::uniform(g.vertex_count(), colors), 1, "lemma-is"),
          u_(std::move(u)), r_(r), ell_(ell), sub_(std::move(sub)) {}

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        out.push_back(std::string(2 * depth + 2, ' ') + "U=" + set_text(u_) + " r=" + std::to_string(r_) +
                      " ell=" + std::to_string(ell_));
        sub_->describe(out, depth + 1);
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        PartialAssignment fixed(static_cast<std::size_t>(graph().vertex_count()));
        std::vector<char> guessed;
        std::vector<Color> nb;
        for (Vertex u : u_) {
            const auto n = graph().neighbors(u);
            guessed.assign(budget()[u], 0);
            nb.assign(n.size(), 0);
            // Every coloring of N(u) from the first ell colors.
            for (;;) {
                guessed[s.guesses(u, s.encode(u, nb)).min()] = 1;
                std::size_t i = nb.size();
                while (i > 0 && ++nb[i - 1] == ell_) nb[--i] = 0;
                if (i == 0) break;
            }
            const Color c = static_cast<Color>(std::find(guessed.begin(), guessed.end(), 0) - guessed.begin());
            fixed[u] = c;
            note(trace, depth, "lemma-is: u=" + std::to_string(u) + " dodges " +
                                   std::to_string(std::count(guessed.begin(), guessed.end(), 1)) + " guesses -> " +
                                   std::to_string(c));
        }
        const InducedStrategy ind = induce_strategy_after_fixing(s, fixed);
        const Strategy restricted = restrict_budget(ind.strategy, ColorBudget::uniform(ind.strategy.vertex_count(), ell_));
        const HatAssignment inner = sub_->defeat(restricted, trace, depth + 1);
        HatAssignment out;
        out.colors.assign(static_cast<std::size_t>(graph().vertex_count()), 0);
        for (Vertex v = 0; v < graph().vertex_count(); ++v)
            if (fixed[v]) out.colors[v] = *fixed[v];
        for (std::size_t i = 0; i < ind.to_parent.size(); ++i) out.colors[ind.to_parent[i]] = inner.colors[i];
        return out;
    }

private:
    std::vector<Vertex> u_;
    int r_;
    Color ell_;
    OraclePtr sub_;
};

class TwoAtVOracle final : public AdversaryOracle {
public:
    TwoAtVOracle(const Graph& g, Vertex v, std::pair<Color, Color> colors, Color ell, OraclePtr sub2, ColorBudget b)
        : AdversaryOracle(g, std::move(b), 1, "two-at-v"), v_(v), colors_(colors), ell_(ell), sub2_(std::move(sub2)) {}

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        out.push_back(std::string(2 * depth + 2, ' ') + "v=" + std::to_string(v_) + " colors {" +
                      std::to_string(colors_.first) + "," + std::to_string(colors_.second) +
                      "} ell=" + std::to_string(ell_));
        sub2_->describe(out, depth + 1);
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        PartialAssignment fixed(static_cast<std::size_t>(graph().vertex_count()));
        fixed[v_] = colors_.first;
        const InducedStrategy first = induce_strategy_after_fixing(s, fixed);
        fixed[v_] = colors_.second;
        const InducedStrategy second = induce_strategy_after_fixing(s, fixed);
        const HatAssignment psi = sub2_->defeat(merge_two_guess(first.strategy, second.strategy), trace, depth + 1);

        HatAssignment out;
        out.colors.assign(static_cast<std::size_t>(graph().vertex_count()), 0);
        for (std::size_t i = 0; i < first.to_parent.size(); ++i) out.colors[first.to_parent[i]] = psi.colors[i];
        const Color guess = guesses_at(s, v_, out).min();
        out.colors[v_] = guess == colors_.first ? colors_.second : colors_.first;
        note(trace, depth, "two-at-v: v=" + std::to_string(v_) + " guesses " + std::to_string(guess) + " -> " +
                               std::to_string(out.colors[v_]));
        return out;
    }

private:
    Vertex v_;
    std::pair<Color, Color> colors_;
    Color ell_;
    OraclePtr sub2_;
};

// Plays on g - v by handing the parent oracle a strategy in which nobody
// looks at v.
class DeleteVertexOracle final : public AdversaryOracle {
public:
    DeleteVertexOracle(OraclePtr parent, Vertex v, Subgraph rest)
        : AdversaryOracle(rest.graph, restrict_to(parent->budget(), rest.to_parent), parent->guess_count(),
                          "delete-vertex"),
          parent_(std::move(parent)), v_(v), rest_(std::move(rest)) {}

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        out.push_back(std::string(2 * depth + 2, ' ') + "removed v=" + std::to_string(v_));
        parent_->describe(out, depth + 1);
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        const Graph& big = parent_->graph();
        const auto local = rest_.from_parent(big.vertex_count());
        Strategy lifted(big, parent_->budget(), guess_count(), Guards{.strategy_entries = ~std::uint64_t{0}});
        std::vector<Color> mine;
        for (Vertex w = 0; w < big.vertex_count(); ++w) {
            if (w == v_) continue;
            const Vertex lw = local[w];
            const auto nb = big.neighbors(w);
            for (std::size_t e = 0; e < lifted.entry_count(w); ++e) {
                const auto full = lifted.decode(w, e);
                mine.clear();
                for (std::size_t i = 0; i < nb.size(); ++i)
                    if (nb[i] != v_) mine.push_back(full[i]);
                lifted.set_guesses(w, e, s.guesses(lw, s.encode(lw, mine)));
            }
        }
        const HatAssignment a = parent_->defeat(lifted, trace, depth + 1);
        HatAssignment out;
        for (Vertex p : rest_.to_parent) out.colors.push_back(a.colors[p]);
        return out;
    }

private:
    OraclePtr parent_;
    Vertex v_;
    Subgraph rest_;
};

class RusOracle final : public AdversaryOracle {
public:
    RusOracle(const Graph& g, Vertex v, std::vector<Vertex> v1, std::vector<Vertex> v2, Color ell, RusParts parts)
        : AdversaryOracle(g, ColorBudget::uniform(g.vertex_count(), checked_color(std::uint64_t{ell} + 1)), 1, "rus"),
          v_(v), v1_(std::move(v1)), v2_(std::move(v2)), ell_(ell), g1_(induced_subgraph(g, v1_)),
          g2_(induced_subgraph(g, v2_)), parts_(std::move(parts)) {
        v_in1_ = g1_.from_parent(g.vertex_count())[v_];
        v_in2_ = g2_.from_parent(g.vertex_count())[v_];
        for (Vertex w : g1_.graph.neighbors(v_in1_)) n1_.push_back(g1_.to_parent[w]);
        if (parts_.g1) {
            if (!(parts_.g1->graph() == g1_.graph) || parts_.g1->guess_count() != 1 ||
                !ColorBudget::uniform(g1_.graph.vertex_count(), ell + 1).dominates(parts_.g1->budget()))
                throw PreconditionError("G1 oracle must play one guess on G1 within ell+1 colors");
        }
        Subgraph h = remove_vertices(g2_.graph, std::vector<Vertex>{v_in2_});
        if (!parts_.g2_minus_v)
            parts_.g2_minus_v = oracle_exhaustive(h.graph, ColorBudget::uniform(h.graph.vertex_count(), ell + 1), 2,
                                                  parts_.guards);
        // Validates the G2 - v oracle against G2 once, up front.
        (void)oracle_lemma_two_at_v(g2_.graph, v_in2_, {0, 1}, ell, parts_.g2_minus_v);
    }

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        const std::string pad(2 * depth + 2, ' ');
        out.push_back(pad + "v=" + std::to_string(v_) + " G1=" + set_text(v1_) + " G2=" + set_text(v2_) +
                      " ell=" + std::to_string(ell_));
        if (parts_.g1)
            parts_.g1->describe(out, depth + 1);
        else
            out.push_back(pad + "  G1 colorings enumerated");
        parts_.g2_minus_v->describe(out, depth + 1);
    }

protected:
    // Colorings of G1 in which every vertex but v guesses wrong, keyed by the
    // coloring of N_G1(v) and then by the color of v.
    using Extensions = std::map<std::vector<Color>, std::map<Color, HatAssignment>>;

    std::vector<Color> alpha_of(const HatAssignment& phi) const {
        std::vector<Color> a;
        for (Vertex w : g1_.graph.neighbors(v_in1_)) a.push_back(phi.colors[w]);
        return a;
    }

    bool fools_all_but_v(const Strategy& s1, const HatAssignment& phi) const {
        for (Vertex w = 0; w < s1.vertex_count(); ++w)
            if (w != v_in1_ && guesses_at(s1, w, phi).contains(phi.colors[w])) return false;
        return true;
    }

    // v guesses the unique extension color where there is one, else 0.
    void set_v_table(Strategy& s1, const Extensions& ext) const {
        for (std::size_t e = 0; e < s1.entry_count(v_in1_); ++e) {
            const auto it = ext.find(s1.decode(v_in1_, e));
            s1.set_guesses(v_in1_, e, GuessSet(it != ext.end() && it->second.size() == 1 ? it->second.begin()->first : 0));
        }
    }

    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        const int n = graph().vertex_count();
        PartialAssignment pins(static_cast<std::size_t>(n));
        for (Vertex w : graph().neighbors(v_))
            if (!std::binary_search(v1_.begin(), v1_.end(), w)) pins[w] = 0;
        Strategy s1 = induce_on(s, v1_, pins).strategy;

        Extensions ext;
        const std::vector<Color>* alpha = nullptr;
        if (parts_.g1) {
            // Each round either opens a new neighborhood coloring or finds the
            // second color for one, so this ends within entry_count + 1 rounds.
            const std::size_t rounds = s1.entry_count(v_in1_) + 1;
            for (std::size_t round = 0; round < rounds && !alpha; ++round) {
                set_v_table(s1, ext);
                const HatAssignment phi = parts_.g1->defeat(s1, trace, depth + 1);
                if (!fools_all_but_v(s1, phi) || guesses_at(s1, v_in1_, phi).contains(phi.colors[v_in1_]))
                    throw std::logic_error("G1 oracle returned an assignment that does not defeat its strategy");
                auto& colors = ext[alpha_of(phi)];
                colors.emplace(phi.colors[v_in1_], phi);
                if (colors.size() >= 2) alpha = &ext.find(alpha_of(phi))->first;
            }
            if (!alpha) throw std::logic_error("G1 oracle made no progress");
        } else {
            AssignmentEnumerator it(s1.budget(), parts_.guards);
            while (it.next())
                if (fools_all_but_v(s1, it.current()))
                    ext[alpha_of(it.current())].emplace(it.current().colors[v_in1_], it.current());
            for (const auto& [a, colors] : ext)
                if (colors.size() >= 2) {
                    alpha = &a;
                    break;
                }
            if (!alpha) {
                set_v_table(s1, ext);
                if (find_defeating_assignment(s1.graph(), s1, s1.budget(), parts_.guards))
                    throw std::logic_error("premise witness for G1 is not a winning strategy");
                throw PremiseViolation("no coloring of N_G1(v) has two extensions: the players win on G1 = " +
                                           set_text(v1_) + " with " + std::to_string(ell_ + 1) + " colors",
                                       "graph\n" + to_text(s1.graph()) + "budget " + to_text(s1.budget()) + "\n" +
                                           to_text(s1));
            }
        }
        const auto& colors = ext.at(*alpha);
        auto first = colors.begin();
        auto second = std::next(first);
        note(trace, depth, "rus: v=" + std::to_string(v_) + " alpha=(" + to_text(HatAssignment{*alpha}) +
                               ") colors {" + std::to_string(first->first) + "," + std::to_string(second->first) + "}");

        PartialAssignment pins2(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < n1_.size(); ++i) pins2[n1_[i]] = (*alpha)[i];
        const InducedStrategy s2 = induce_on(s, v2_, pins2);
        const OraclePtr two =
            oracle_lemma_two_at_v(g2_.graph, v_in2_, {first->first, second->first}, ell_, parts_.g2_minus_v);
        const HatAssignment psi = two->defeat(s2.strategy, trace, depth + 1);
        const HatAssignment& phi = psi.colors[v_in2_] == first->first ? first->second : second->second;

        HatAssignment out;
        out.colors.assign(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < v1_.size(); ++i) out.colors[v1_[i]] = phi.colors[i];
        for (std::size_t i = 0; i < v2_.size(); ++i) out.colors[v2_[i]] = psi.colors[i];
        return out;
    }

private:
    Vertex v_;
    std::vector<Vertex> v1_, v2_;
    Color ell_;
    Subgraph g1_, g2_;
    Vertex v_in1_ = 0, v_in2_ = 0;
    std::vector<Vertex> n1_;
    RusParts parts_;
};

class AsTwoGuessOracle final : public AdversaryOracle {
public:
    explicit AsTwoGuessOracle(OraclePtr inner)
        : AdversaryOracle(inner->graph(), inner->budget(), 1, "single-block"), inner_(std::move(inner)) {}

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        inner_->describe(out, depth + 1);
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        return inner_->defeat(as_two_guess(s), trace, depth + 1);
    }

private:
    OraclePtr inner_;
};

class ComponentsOracle final : public AdversaryOracle {
public:
    ComponentsOracle(const Graph& g, std::vector<std::vector<Vertex>> comps, std::vector<OraclePtr> parts, int gc)
        : AdversaryOracle(g, assemble(g, comps, parts), gc, "components"), comps_(std::move(comps)),
          parts_(std::move(parts)) {}

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        for (const auto& p : parts_) p->describe(out, depth + 1);
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        HatAssignment out;
        out.colors.assign(static_cast<std::size_t>(graph().vertex_count()), 0);
        const PartialAssignment none(static_cast<std::size_t>(graph().vertex_count()));
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            const HatAssignment a = parts_[i]->defeat(induce_on(s, comps_[i], none).strategy, trace, depth + 1);
            for (std::size_t j = 0; j < comps_[i].size(); ++j) out.colors[comps_[i][j]] = a.colors[j];
        }
        return out;
    }

private:
    static ColorBudget assemble(const Graph& g, const std::vector<std::vector<Vertex>>& comps,
                                const std::vector<OraclePtr>& parts) {
        std::vector<Color> q(static_cast<std::size_t>(g.vertex_count()), 0);
        for (std::size_t i = 0; i < comps.size(); ++i)
            for (std::size_t j = 0; j < comps[i].size(); ++j) q[comps[i][j]] = parts[i]->budget()[static_cast<Vertex>(j)];
        return ColorBudget(std::move(q));
    }

    std::vector<std::vector<Vertex>> comps_;
    std::vector<OraclePtr> parts_;
};

// Names a sub-oracle by the parent vertices it covers, and tags premise
// violations raised inside it with that name.
class LabelledOracle final : public AdversaryOracle {
public:
    LabelledOracle(OraclePtr inner, std::string label)
        : AdversaryOracle(inner->graph(), inner->budget(), inner->guess_count(), std::move(label)),
          inner_(std::move(inner)) {}

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        inner_->describe(out, depth + 1);
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        try {
            return inner_->defeat(s, trace, depth + 1);
        } catch (const PremiseViolation& e) {
            throw PremiseViolation(name() + ": " + e.what(), e.witness());
        }
    }

private:
    OraclePtr inner_;
};

class ClosureOracle final : public AdversaryOracle {
public:
    ClosureOracle(const RootedTree& tree, ColorBudget b, LeafOrder order, const Guards& guards)
        : AdversaryOracle(closure(tree), std::move(b), 2, "closure"), tree_(tree), order_(order), guards_(guards) {
        for (Vertex v = 0; v < tree_.vertex_count(); ++v) {
            std::uint64_t combos = 1;
            for (Vertex u : tree_.ancestors(v)) combos *= budget()[u];
            if (combos > guards_.enumeration)
                throw GuardExceeded("enumeration", "ancestor colorings of vertex " + std::to_string(v) +
                                                       " exceed guard " + std::to_string(guards_.enumeration));
        }
    }

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        std::string parents;
        for (Vertex p : tree_.parents()) parents += (parents.empty() ? "" : " ") + std::to_string(p);
        out.push_back(std::string(2 * depth + 2, ' ') + "tree root " + std::to_string(tree_.root()) + " parents " +
                      parents);
    }

    using GuessFn = std::function<GuessSet(Vertex, std::span<const Color>)>;

    // Peels leaves of the tree; `guess` answers for a full closure
    // neighborhood in ascending neighbor order.
    HatAssignment dodge(const GuessFn& guess, Trace* trace, int depth) const {
        const int n = graph().vertex_count();
        std::vector<int> open_children(static_cast<std::size_t>(n));
        std::set<Vertex> leaves;
        for (Vertex v = 0; v < n; ++v) {
            open_children[v] = static_cast<int>(tree_.children(v).size());
            if (open_children[v] == 0) leaves.insert(v);
        }
        HatAssignment out;
        out.colors.assign(static_cast<std::size_t>(n), 0);
        std::vector<char> is_anc(static_cast<std::size_t>(n));
        std::vector<char> guessed;
        std::vector<Color> nb;
        while (!leaves.empty()) {
            const Vertex v = order_ == LeafOrder::Smallest ? *leaves.begin() : *leaves.rbegin();
            leaves.erase(v);
            const auto anc = tree_.ancestors(v);
            std::fill(is_anc.begin(), is_anc.end(), 0);
            for (Vertex u : anc) is_anc[u] = 1;
            const auto neighbors = graph().neighbors(v);
            // Positions of the ancestors inside v's neighbor list; the other
            // neighbors are descendants and already colored.
            std::vector<std::size_t> anc_pos;
            nb.assign(neighbors.size(), 0);
            for (std::size_t i = 0; i < neighbors.size(); ++i) {
                if (is_anc[neighbors[i]])
                    anc_pos.push_back(i);
                else
                    nb[i] = out.colors[neighbors[i]];
            }
            guessed.assign(budget()[v], 0);
            for (;;) {
                const GuessSet g = guess(v, nb);
                guessed[g[0]] = 1;
                if (g.size() == 2) guessed[g[1]] = 1;
                std::size_t k = anc_pos.size();
                while (k > 0) {
                    const std::size_t i = anc_pos[k - 1];
                    if (++nb[i] < budget()[neighbors[i]]) break;
                    nb[i] = 0;
                    --k;
                }
                if (k == 0) break;
            }
            const auto free = std::find(guessed.begin(), guessed.end(), 0);
            if (free == guessed.end()) throw std::logic_error("closure budget leaves no unguessed color");
            out.colors[v] = static_cast<Color>(free - guessed.begin());
            note(trace, depth, "closure: leaf " + std::to_string(v) + " height " + std::to_string(tree_.height_of(v)) +
                                   " dodges " + std::to_string(std::count(guessed.begin(), guessed.end(), 1)) +
                                   " guesses -> " + std::to_string(out.colors[v]));
            const Vertex p = tree_.parent(v);
            if (p != RootedTree::kNoParent && --open_children[p] == 0) leaves.insert(p);
        }
        return out;
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        return dodge([&s](Vertex v, std::span<const Color> nb) { return s.guesses(v, s.encode(v, nb)); }, trace,
                     depth);
    }

private:
    RootedTree tree_;
    LeafOrder order_;
    Guards guards_;
};

class ClosureCoverOracle final : public AdversaryOracle {
public:
    ClosureCoverOracle(const Graph& g, Color colors, std::shared_ptr<const ClosureOracle> inner)
        : AdversaryOracle(g, ColorBudget::uniform(g.vertex_count(), colors), 2, "closure-cover"),
          inner_(std::move(inner)) {
        // The strategy on g is played in the closure by ignoring the extra
        // neighbors, so only the positions of g's neighbors are needed.
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            const auto big = inner_->graph().neighbors(v);
            std::vector<std::size_t> pos;
            for (Vertex w : g.neighbors(v))
                pos.push_back(static_cast<std::size_t>(std::lower_bound(big.begin(), big.end(), w) - big.begin()));
            positions_.push_back(std::move(pos));
        }
    }

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        inner_->describe(out, depth + 1);
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        const Strategy r = restrict_budget(s, inner_->budget());
        std::vector<Color> mine;
        return inner_->dodge(
            [&](Vertex v, std::span<const Color> nb) {
                const auto& pos = positions_[v];
                mine.resize(pos.size());
                for (std::size_t i = 0; i < pos.size(); ++i) mine[i] = nb[pos[i]];
                return r.guesses(v, r.encode(v, mine));
            },
            trace, depth + 1);
    }

private:
    std::shared_ptr<const ClosureOracle> inner_;
    std::vector<std::vector<std::size_t>> positions_;
};

class BlocksOracle final : public AdversaryOracle {
public:
    BlocksOracle(OraclePtr inner, Color ell)
        : AdversaryOracle(inner->graph(), inner->budget(), 1, "blocks"), inner_(std::move(inner)), ell_(ell) {}

    void describe(std::vector<std::string>& out, int depth) const override {
        AdversaryOracle::describe(out, depth);
        out.push_back(std::string(2 * depth + 2, ' ') + "ell=" + std::to_string(ell_));
        inner_->describe(out, depth + 1);
    }

protected:
    HatAssignment defeat_exact(const Strategy& s, Trace* trace, int depth) const override {
        return inner_->defeat(s, trace, depth + 1);
    }

private:
    OraclePtr inner_;
    Color ell_;
};

OraclePtr build_blocks(const Graph& g, Color ell, const BlockOracleFactory& factory,
                       std::span<const Vertex> to_outer) {
    if (g.empty()) return std::make_shared<EmptyOracle>(1);
    const auto comps = connected_components(g);
    if (comps.size() > 1) {
        std::vector<OraclePtr> parts;
        for (const auto& c : comps) {
            const Subgraph sub = induced_subgraph(g, c);
            std::vector<Vertex> outer;
            for (Vertex p : sub.to_parent) outer.push_back(to_outer[p]);
            parts.push_back(build_blocks(sub.graph, ell, factory, outer));
        }
        return std::make_shared<ComponentsOracle>(g, comps, std::move(parts), 1);
    }
    const BlockDecomposition bd = block_decomposition(g);
    auto outer_set = [&](std::span<const Vertex> vs) {
        std::vector<Vertex> o;
        for (Vertex v : vs) o.push_back(to_outer[v]);
        return set_text(o);
    };
    if (bd.blocks.size() == 1) {
        std::vector<Vertex> all(static_cast<std::size_t>(g.vertex_count()));
        for (Vertex v = 0; v < g.vertex_count(); ++v) all[v] = v;
        return std::make_shared<AsTwoGuessOracle>(
            std::make_shared<LabelledOracle>(factory(g, ell), "block " + outer_set(all)));
    }
    const std::vector<Vertex>& block = bd.blocks[bd.terminal_blocks().front()];
    Vertex cut = -1;
    for (Vertex v : block)
        if (bd.is_cut_vertex(v)) cut = v;

    std::vector<Vertex> v1;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (v == cut || !std::binary_search(block.begin(), block.end(), v)) v1.push_back(v);
    const Subgraph g1 = induced_subgraph(g, v1);
    std::vector<Vertex> g1_outer;
    for (Vertex p : g1.to_parent) g1_outer.push_back(to_outer[p]);

    const Subgraph b = induced_subgraph(g, block);
    const Vertex cut_in_b = b.from_parent(g.vertex_count())[cut];
    const OraclePtr block_oracle = std::make_shared<LabelledOracle>(factory(b.graph, ell), "block " + outer_set(block));

    RusParts parts;
    parts.g1 = build_blocks(g1.graph, ell, factory, g1_outer);
    parts.g2_minus_v = std::make_shared<DeleteVertexOracle>(block_oracle, cut_in_b,
                                                             remove_vertices(b.graph, std::vector<Vertex>{cut_in_b}));
    return oracle_lemma_rus(g, cut, v1, block, ell, std::move(parts));
}

ColorBudget closure_budget(const RootedTree& tree) {
    std::vector<Color> q;
    for (Vertex v = 0; v < tree.vertex_count(); ++v) {
        const auto a = two_guess_seq(tree.height_of(v) + 1).to_u64();
        if (!a) throw GuardExceeded("colors", "a_" + std::to_string(tree.height_of(v) + 1) + " is too large");
        q.push_back(checked_color(*a));
    }
    return ColorBudget(std::move(q));
}

struct TaryLevel {
    OraclePtr oracle;
    Color ell;
};

TaryLevel build_tary(const Graph& g, int t, int h, Color base) {
    if (g.empty()) return {std::make_shared<EmptyOracle>(1), 2};
    if (h <= 1) return {oracle_exhaustive(g, ColorBudget::uniform(g.vertex_count(), base), 1), base};

    std::uint64_t k = 2;
    for (int i = 0; i < h; ++i) k = k > (~std::uint64_t{0}) / static_cast<std::uint64_t>(t) ? ~std::uint64_t{0} : k * t;
    std::vector<Vertex> u;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (static_cast<std::uint64_t>(g.degree(v)) < k) u.push_back(v);
    if (u.empty()) return build_tary(g, t, h - 1, base);

    const Subgraph rest = remove_vertices(g, u);
    TaryLevel cur = build_tary(rest.graph, t, h - 1, base);
    std::vector<Vertex> present = rest.to_parent;

    const Subgraph gu = induced_subgraph(g, u);
    for (const auto& cls_local : greedy_proper_coloring(gu.graph)) {
        std::vector<Vertex> cls;
        for (Vertex w : cls_local) cls.push_back(gu.to_parent[w]);
        std::vector<Vertex> next = present;
        next.insert(next.end(), cls.begin(), cls.end());
        std::sort(next.begin(), next.end());
        const Subgraph hsub = induced_subgraph(g, next);
        const auto local = hsub.from_parent(g.vertex_count());
        std::vector<Vertex> ul;
        int r = 1;
        for (Vertex p : cls) {
            ul.push_back(local[p]);
            r = std::max(r, hsub.graph.degree(local[p]));
        }
        const OraclePtr o = oracle_lemma_is(hsub.graph, ul, r, cur.ell, cur.oracle);
        cur = {o, o->budget()[0]};
        present = std::move(next);
    }
    return cur;
}

}  // namespace

// ---------------------------------------------------------------------------

AdversaryOracle::AdversaryOracle(Graph g, ColorBudget budget, int guess_count, std::string name)
    : graph_(std::move(g)), budget_(std::move(budget)), guess_count_(guess_count), name_(std::move(name)) {
    if (budget_.size() != graph_.vertex_count()) throw PreconditionError("oracle budget length differs from graph");
    if (guess_count_ != 1 && guess_count_ != 2) throw PreconditionError("guess_count must be 1 or 2");
}

HatAssignment AdversaryOracle::defeat(const Strategy& s, Trace* trace, int depth) const {
    if (!(s.graph() == graph_)) throw PreconditionError(name_ + ": strategy is for a different graph");
    if (s.guess_count() > guess_count_)
        throw PreconditionError(name_ + ": strategy makes more guesses than the oracle handles");
    if (!s.budget().dominates(budget_)) throw PreconditionError(name_ + ": strategy budget is below the oracle budget");
    if (s.guess_count() == guess_count_ && s.budget() == budget_) return defeat_exact(s, trace, depth);
    Strategy t = s.guess_count() < guess_count_ ? as_two_guess(s) : s;
    if (!(t.budget() == budget_)) t = restrict_budget(t, budget_, Guards{.strategy_entries = ~std::uint64_t{0}});
    return defeat_exact(t, trace, depth);
}

void AdversaryOracle::describe(std::vector<std::string>& out, int depth) const {
    out.push_back(std::string(2 * depth, ' ') + name_ + ": n=" + std::to_string(graph_.vertex_count()) +
                  " m=" + std::to_string(graph_.edge_count()) + " budget " + budget_text(budget_) + " guesses " +
                  std::to_string(guess_count_));
}

void AdversaryOracle::note(Trace* trace, int depth, const std::string& line) {
    if (trace) trace->push_back(std::string(2 * depth, ' ') + line);
}

std::string describe(const AdversaryOracle& oracle) {
    std::vector<std::string> lines;
    oracle.describe(lines);
    std::string out;
    for (const auto& l : lines) out += l + '\n';
    return out;
}

OraclePtr oracle_exhaustive(const Graph& g, const ColorBudget& budget, int guess_count, const Guards& guards) {
    if (g.empty()) return std::make_shared<EmptyOracle>(guess_count);
    return std::make_shared<ExhaustiveOracle>(g, budget, guess_count, guards);
}

OraclePtr oracle_lemma_is(const Graph& g, std::vector<Vertex> u_set, int r, Color ell, OraclePtr sub) {
    u_set = sorted_unique(std::move(u_set));
    for (Vertex u : u_set)
        if (u < 0 || u >= g.vertex_count()) throw PreconditionError("U contains a vertex outside the graph");
    if (!is_independent_set(g, u_set)) throw PreconditionError("U is not independent");
    if (r < 0) throw PreconditionError("r must be non-negative");
    for (Vertex u : u_set)
        if (g.degree(u) > r) throw PreconditionError("vertex " + std::to_string(u) + " has degree above r");
    if (ell < 2) throw PreconditionError("ell must be at least 2");
    if (!sub || sub->guess_count() != 1) throw PreconditionError("sub-oracle must play one guess");
    const Subgraph rest = remove_vertices(g, u_set);
    if (!(sub->graph() == rest.graph)) throw PreconditionError("sub-oracle graph is not g minus U");
    if (!(sub->budget() == ColorBudget::uniform(rest.graph.vertex_count(), ell)))
        throw PreconditionError("sub-oracle budget must be uniform ell");
    std::uint64_t colors = 1;
    for (int i = 0; i < r; ++i) colors = checked_color(colors * ell);
    return std::make_shared<IsOracle>(g, std::move(u_set), r, ell, std::move(sub), checked_color(colors + 1));
}

OraclePtr oracle_lemma_two_at_v(const Graph& g, Vertex v, std::pair<Color, Color> two_colors, Color ell,
                                OraclePtr sub2) {
    if (v < 0 || v >= g.vertex_count()) throw PreconditionError("v is outside the graph");
    if (two_colors.first == two_colors.second) throw PreconditionError("the two colors must differ");
    if (two_colors.first > two_colors.second) std::swap(two_colors.first, two_colors.second);
    if (!sub2 || sub2->guess_count() != 2) throw PreconditionError("sub-oracle must play two guesses");
    const Subgraph h = remove_vertices(g, std::vector<Vertex>{v});
    if (!(sub2->graph() == h.graph)) throw PreconditionError("sub-oracle graph is not g minus v");
    const Color others = checked_color(std::uint64_t{ell} + 1);
    if (!ColorBudget::uniform(h.graph.vertex_count(), others).dominates(sub2->budget()))
        throw PreconditionError("sub-oracle budget exceeds ell+1");
    std::vector<Color> q(static_cast<std::size_t>(g.vertex_count()), others);
    q[v] = two_colors.second + 1;
    return std::make_shared<TwoAtVOracle>(g, v, two_colors, ell, std::move(sub2), ColorBudget(std::move(q)));
}

OraclePtr oracle_lemma_rus(const Graph& g, Vertex v, std::vector<Vertex> g1_vertices, std::vector<Vertex> g2_vertices,
                           Color ell, RusParts parts) {
    g1_vertices = sorted_unique(std::move(g1_vertices));
    g2_vertices = sorted_unique(std::move(g2_vertices));
    const int n = g.vertex_count();
    if (v < 0 || v >= n) throw PreconditionError("v is outside the graph");
    std::vector<int> side(static_cast<std::size_t>(n), 0);
    for (Vertex w : g1_vertices) {
        if (w < 0 || w >= n) throw PreconditionError("G1 contains a vertex outside the graph");
        side[w] |= 1;
    }
    for (Vertex w : g2_vertices) {
        if (w < 0 || w >= n) throw PreconditionError("G2 contains a vertex outside the graph");
        side[w] |= 2;
    }
    for (Vertex w = 0; w < n; ++w) {
        if (side[w] == 0) throw PreconditionError("vertex " + std::to_string(w) + " is in neither G1 nor G2");
        if (side[w] == 3 && w != v) throw PreconditionError("G1 and G2 share a vertex other than v");
    }
    if (side[v] != 3) throw PreconditionError("v must lie in both G1 and G2");
    for (const auto& [a, b] : g.edges())
        if ((side[a] & side[b]) == 0) throw PreconditionError("an edge joins G1 - v to G2 - v");
    if (ell < 1) throw PreconditionError("ell must be at least 1");
    return std::make_shared<RusOracle>(g, v, std::move(g1_vertices), std::move(g2_vertices), ell, std::move(parts));
}

BlockOracleFactory exhaustive_block_factory(const Guards& guards) {
    return [guards](const Graph& block, Color ell) {
        return oracle_exhaustive(block, ColorBudget::uniform(block.vertex_count(), checked_color(std::uint64_t{ell} + 1)),
                                 2, guards);
    };
}

OraclePtr oracle_lemma_blocks(const Graph& g, Color ell, BlockOracleFactory factory) {
    if (ell < 1) throw PreconditionError("ell must be at least 1");
    std::vector<Vertex> ids(static_cast<std::size_t>(g.vertex_count()));
    for (Vertex v = 0; v < g.vertex_count(); ++v) ids[v] = v;
    return std::make_shared<BlocksOracle>(build_blocks(g, ell, factory, ids), ell);
}

OraclePtr oracle_closure(const RootedTree& tree, LeafOrder order, const Guards& guards) {
    if (tree.vertex_count() == 0) throw PreconditionError("closure oracle needs a nonempty tree");
    return std::make_shared<ClosureOracle>(tree, closure_budget(tree), order, guards);
}

OraclePtr oracle_closure_cover(const Graph& g, const RootedTree& tree, Color colors, const Guards& guards) {
    if (tree.vertex_count() != g.vertex_count()) throw PreconditionError("tree and graph differ in vertex count");
    if (!certifies(tree, g)) throw PreconditionError("graph is not contained in the closure of the tree");
    if (tree.vertex_count() == 0) throw PreconditionError("closure oracle needs a nonempty tree");
    const auto inner = std::make_shared<const ClosureOracle>(tree, closure_budget(tree), LeafOrder::Smallest, guards);
    if (!ColorBudget::uniform(g.vertex_count(), colors).dominates(inner->budget()))
        throw PreconditionError("closure needs a_" + std::to_string(tree.height() + 1) + " colors, only " +
                                std::to_string(colors) + " given");
    return std::make_shared<ClosureCoverOracle>(g, colors, inner);
}

CircResult oracle_theorem_circ(const Graph& g, CircDepth mode, const Guards& guards) {
    CircResult res;
    try {
        res.circumference = circumference(g, guards);
    } catch (const GuardExceeded& e) {
        // Every cycle has at most n vertices and the bound grows with c.
        res.circumference = g.vertex_count();
        res.circumference_exact = false;
        res.guard_note = e.what();
    }
    const int c = res.circumference;
    if (c >= 3) res.formula = circ_bound(c);

    std::uint64_t deepest = 1;
    for (const auto& block : block_decomposition(g).blocks) {
        const Subgraph b = induced_subgraph(g, block);
        deepest = std::max<std::uint64_t>(deepest, static_cast<std::uint64_t>(dfs_treedepth_certificate(b.graph, 0).depth));
    }
    if (mode == CircDepth::Circumference)
        res.depth = c >= 3 ? circ_depth(c) : 2;
    else
        res.depth = deepest;

    if (res.depth > 64) {
        res.bound = *res.formula;
        res.guard_note = "a_" + std::to_string(res.depth) + " is beyond the tabulated range";
        return res;
    }
    res.bound = two_guess_seq(static_cast<int>(res.depth));
    const auto colors = res.bound.to_u64();
    if (!colors || *colors > std::numeric_limits<Color>::max()) {
        res.guard_note = "a_" + std::to_string(res.depth) + " colors do not fit a color index";
        return res;
    }
    const Color ell = static_cast<Color>(*colors - 1);
    const Guards gd = guards;
    BlockOracleFactory factory = [gd](const Graph& block, Color l) -> OraclePtr {
        return oracle_closure_cover(block, dfs_treedepth_certificate(block, 0).tree, checked_color(std::uint64_t{l} + 1),
                                    gd);
    };
    res.oracle = oracle_lemma_blocks(g, ell, factory);
    return res;
}

TaryResult oracle_theorem_tary(const Graph& g, int t, int h, const TaryOptions& options) {
    if (t < 2 || h < 1) throw PreconditionError("t-ary pipeline needs t >= 2 and h >= 1");
    TaryResult res;
    res.bound = n_h_t_recursive(h, t);
    try {
        if (const auto emb = contains_tary_tree(g, t, h, options.guards)) {
            std::ostringstream w;
            w << "tree-embedding";
            for (std::size_t i = 0; i < emb->size(); ++i) w << ' ' << i << "->" << (*emb)[i];
            throw PremiseViolation("the graph contains a complete " + std::to_string(t) + "-ary tree of height " +
                                       std::to_string(h),
                                   w.str() + "\n");
        }
    } catch (const GuardExceeded& e) {
        res.guard_note = std::string("subtree check incomplete: ") + e.what();
    }
    const Color base = options.base_colors ? *options.base_colors : checked_color(lll_degree_ceiling(t));
    res.oracle = build_tary(g, t, h, base).oracle;
    return res;
}

}  // namespace hatcheck
