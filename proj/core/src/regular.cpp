#include "treestab/regular.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "treestab/errors.hpp"

namespace treestab {

namespace {

enum class SearchOutcome { Found, Exhausted, Budget };

// Complete backtracking search for a nonempty edge set in which every touched
// vertex has degree exactly r. Edges carry one of three states; constraint
// propagation forces edges in or out around partially-satisfied vertices, and
// branching always attacks the touched vertex with the least slack.
struct FactorSearch {
    const Graph& g;
    const int r;
    long long budget;
    long long nodes = 0;

    std::vector<signed char> state;          // per edge: 0 unknown, 1 in, -1 out
    std::vector<int> cur, rem;               // ambient-indexed degree counters
    std::vector<std::vector<int>> incident;  // vertex -> edge indices

    FactorSearch(const Graph& graph, int degree, long long node_budget)
        : g(graph), r(degree), budget(node_budget), state(graph.edges.size(), 0),
          cur(graph.ambient_n, 0), rem(graph.ambient_n, 0), incident(graph.ambient_n) {
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            incident[g.edges[i].first].push_back(static_cast<int>(i));
            incident[g.edges[i].second].push_back(static_cast<int>(i));
            rem[g.edges[i].first] += 1;
            rem[g.edges[i].second] += 1;
        }
    }

    struct Trail {
        std::vector<int> assigned;  // edge indices, for undo
    };

    bool assign(int e, signed char value, Trail& trail) {
        state[e] = value;
        trail.assigned.push_back(e);
        const auto [u, v] = g.edges[static_cast<std::size_t>(e)];
        rem[u] -= 1;
        rem[v] -= 1;
        if (value == 1) {
            cur[u] += 1;
            cur[v] += 1;
            if (cur[u] > r || cur[v] > r) return false;
        }
        return feasible(u) && feasible(v);
    }

    bool feasible(int v) const {
        if (cur[v] > 0 && cur[v] + rem[v] < r) return false;
        return true;
    }

    void undo(Trail& trail, std::size_t checkpoint) {
        while (trail.assigned.size() > checkpoint) {
            const int e = trail.assigned.back();
            trail.assigned.pop_back();
            const auto [u, v] = g.edges[static_cast<std::size_t>(e)];
            if (state[e] == 1) {
                cur[u] -= 1;
                cur[v] -= 1;
            }
            rem[u] += 1;
            rem[v] += 1;
            state[e] = 0;
        }
    }

    // Forces every implied assignment; false on contradiction.
    bool propagate(Trail& trail) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v : g.verts) {
                if (cur[v] > r) return false;
                if (cur[v] > 0 && cur[v] + rem[v] < r) return false;
                if (cur[v] == r && rem[v] > 0) {
                    for (int e : incident[v])
                        if (state[e] == 0) {
                            if (!assign(e, -1, trail)) return false;
                            changed = true;
                        }
                } else if (cur[v] > 0 && cur[v] < r && cur[v] + rem[v] == r) {
                    for (int e : incident[v])
                        if (state[e] == 0) {
                            if (!assign(e, 1, trail)) return false;
                            changed = true;
                        }
                } else if (cur[v] == 0 && rem[v] > 0 && rem[v] < r) {
                    // Touching this vertex could never complete; keep it clean.
                    for (int e : incident[v])
                        if (state[e] == 0) {
                            if (!assign(e, -1, trail)) return false;
                            changed = true;
                        }
                }
            }
        }
        return true;
    }

    SearchOutcome dive(Trail& trail) {
        if (++nodes > budget) return SearchOutcome::Budget;
        if (!propagate(trail)) return SearchOutcome::Exhausted;

        int pick = -1, pick_slack = std::numeric_limits<int>::max();
        for (int v : g.verts) {
            if (cur[v] > 0 && cur[v] < r) {
                const int slack = rem[v] - (r - cur[v]);
                if (slack < pick_slack) {
                    pick_slack = slack;
                    pick = v;
                }
            }
        }
        if (pick < 0) {
            // Every touched vertex sits at degree exactly r.
            for (signed char s : state)
                if (s == 1) return SearchOutcome::Found;
            return SearchOutcome::Exhausted;  // nothing placed on this branch
        }

        int e = -1;
        for (int cand : incident[pick])
            if (state[cand] == 0) {
                e = cand;
                break;
            }
        if (e < 0) return SearchOutcome::Exhausted;

        for (signed char value : {static_cast<signed char>(1), static_cast<signed char>(-1)}) {
            const std::size_t mark = trail.assigned.size();
            if (assign(e, value, trail)) {
                const SearchOutcome sub = dive(trail);
                if (sub != SearchOutcome::Exhausted) return sub;
            }
            undo(trail, mark);
        }
        return SearchOutcome::Exhausted;
    }

    // Seeds each edge in ascending order as "the first included edge" with all
    // earlier edges excluded, so the search space is covered exactly once.
    SearchOutcome run(EdgeSet& found) {
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            Trail trail;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) ok = assign(static_cast<int>(j), -1, trail);
            if (ok) ok = assign(static_cast<int>(i), 1, trail);
            if (ok) {
                const SearchOutcome sub = dive(trail);
                if (sub == SearchOutcome::Found) {
                    for (std::size_t e = 0; e < state.size(); ++e)
                        if (state[e] == 1) found.push_back(g.edges[e]);
                    return SearchOutcome::Found;
                }
                if (sub == SearchOutcome::Budget) return SearchOutcome::Budget;
            }
            undo(trail, 0);
        }
        return SearchOutcome::Exhausted;
    }
};

// One complete search on the r-core of `g`.
SearchOutcome search_once(const Graph& g, int r, long long budget, long long& nodes_used,
                          EdgeSet& found) {
    const Graph core = peel_below(g, static_cast<long long>(r) - 1);
    if (core.edge_count() == 0) return SearchOutcome::Exhausted;
    FactorSearch search(core, r, budget);
    const SearchOutcome outcome = search.run(found);
    nodes_used += search.nodes;
    return outcome;
}

VertexSet touched_vertices(const EdgeSet& edges) {
    VertexSet vs;
    for (const auto& [u, v] : edges) {
        vs.push_back(u);
        vs.push_back(v);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

}  // namespace

RegularSearchResult find_regular_subgraph(const Graph& g, int r, long long budget) {
    if (r < 1) throw PreconditionError("find_regular_subgraph: r must be >= 1");
    RegularSearchResult result;

    // Find a first regular piece, then keep augmenting on the untouched rest:
    // the union stays r-regular and matches the reference outputs (e.g. a
    // perfect matching rather than a single edge at r = 1).
    Graph rest = g;
    EdgeSet all;
    bool exhausted_cleanly = true;
    while (true) {
        EdgeSet found;
        const SearchOutcome outcome =
            search_once(rest, r, budget - result.nodes_used, result.nodes_used, found);
        if (outcome == SearchOutcome::Found) {
            for (const Edge& e : found) all.push_back(e);
            rest = rest.without_vertices(touched_vertices(found));
            continue;
        }
        if (outcome == SearchOutcome::Budget) exhausted_cleanly = false;
        break;
    }

    if (all.empty()) {
        result.flag = exhausted_cleanly ? RegularSearchFlag::ExhaustedProvenAbsent
                                        : RegularSearchFlag::BudgetExceeded;
        return result;
    }
    std::sort(all.begin(), all.end());
    result.subgraph = Graph::make_on(g.ambient_n, touched_vertices(all), all);
    result.flag = RegularSearchFlag::FoundWithinBudget;
    return result;
}

VertexSet RegularFamily::vertices() const {
    VertexSet vs;
    for (const Graph& m : members)
        for (int v : m.verts) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

RegularFamily max_disjoint_regular_family(const std::vector<Graph>& hosts, int r,
                                          long long budget) {
    if (r < 1) throw PreconditionError("max_disjoint_regular_family: r must be >= 1");
    for (std::size_t i = 0; i < hosts.size(); ++i)
        for (std::size_t j = i + 1; j < hosts.size(); ++j) {
            EdgeSet shared;
            std::set_intersection(hosts[i].edges.begin(), hosts[i].edges.end(),
                                  hosts[j].edges.begin(), hosts[j].edges.end(),
                                  std::back_inserter(shared));
            if (!shared.empty())
                throw PreconditionError("max_disjoint_regular_family: hosts " +
                                        std::to_string(i) + " and " + std::to_string(j) +
                                        " share an edge");
        }

    RegularFamily family;
    family.r = r;

    // Hosts in descending density order (ties: ascending input position).
    std::vector<std::size_t> order(hosts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const long long oa = hosts[a].order(), ob = hosts[b].order();
        // e_a/o_a^2 > e_b/o_b^2, cross-multiplied; empty hosts sink to the end.
        if (oa == 0 || ob == 0) return ob == 0 && oa != 0;
        return hosts[a].edge_count() * ob * ob > hosts[b].edge_count() * oa * oa;
    });

    long long used = 0;
    bool all_exhausted = true;
    for (std::size_t hi : order) {
        Graph residual = hosts[hi];
        while (residual.order() > 0) {
            EdgeSet found;
            long long nodes = 0;
            const SearchOutcome outcome =
                search_once(residual, r, budget - used + nodes, nodes, found);
            used += nodes;
            if (outcome != SearchOutcome::Found) {
                if (outcome == SearchOutcome::Budget) all_exhausted = false;
                break;
            }
            // A found piece may itself have several components; each is an
            // r-regular member in its own right, and splitting maximizes k.
            const Graph piece = Graph::make_on(residual.ambient_n, touched_vertices(found), found);
            for (Graph& comp : piece.components()) {
                family.members.push_back(std::move(comp));
                family.host_index.push_back(static_cast<int>(hi));
            }
            residual = residual.without_vertices(piece.verts);
        }
    }
    family.maximal_flag =
        all_exhausted ? MaximalFlag::ProvenMaximal : MaximalFlag::MaximalUnderBudget;
    return family;
}

}  // namespace treestab
