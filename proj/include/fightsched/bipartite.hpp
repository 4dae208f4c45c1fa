#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fightsched {

/// Simple bipartite graph over 0-based left/right vertex indices. Parallel
/// edges are rejected; adjacency lists are kept sorted by neighbour index so
/// every algorithm below is deterministic for a fixed edge insertion order.
class BipartiteGraph {
public:
    BipartiteGraph(int left_count, int right_count)
        : adj_left_(left_count), adj_right_(right_count) {}

    int left_count() const { return static_cast<int>(adj_left_.size()); }
    int right_count() const { return static_cast<int>(adj_right_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    int add_edge(int left, int right) {
        if (left < 0 || left >= left_count() || right < 0 || right >= right_count())
            throw std::invalid_argument("edge endpoint out of range");
        for (int e : adj_left_[left])
            if (edges_[e].second == right) throw std::invalid_argument("parallel edge");
        int id = edge_count();
        edges_.emplace_back(left, right);
        insert_sorted(adj_left_[left], id, true);
        insert_sorted(adj_right_[right], id, false);
        return id;
    }

    std::pair<int, int> edge(int id) const { return edges_[id]; }

    /// Edge ids incident to a left vertex, sorted by right endpoint.
    const std::vector<int>& edges_at_left(int u) const { return adj_left_[u]; }
    /// Edge ids incident to a right vertex, sorted by left endpoint.
    const std::vector<int>& edges_at_right(int v) const { return adj_right_[v]; }

    int degree_left(int u) const { return static_cast<int>(adj_left_[u].size()); }
    int degree_right(int v) const { return static_cast<int>(adj_right_[v].size()); }

    int max_degree() const {
        int d = 0;
        for (const auto& a : adj_left_) d = std::max(d, static_cast<int>(a.size()));
        for (const auto& a : adj_right_) d = std::max(d, static_cast<int>(a.size()));
        return d;
    }

private:
    void insert_sorted(std::vector<int>& list, int id, bool by_right) {
        auto key = [&](int e) { return by_right ? edges_[e].second : edges_[e].first; };
        auto it = std::lower_bound(list.begin(), list.end(), id,
                                   [&](int a, int b) { return key(a) < key(b); });
        list.insert(it, id);
    }

    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_left_, adj_right_;
};

/// A matching as the set of chosen edge ids plus per-vertex lookups
/// (edge id or -1).
struct Matching {
    std::vector<int> edges;
    std::vector<int> left_match, right_match;
    int size() const { return static_cast<int>(edges.size()); }
};

/// Maximum-cardinality bipartite matching (Hopcroft-Karp). Deterministic:
/// phases scan free left vertices in index order and augmenting paths follow
/// the sorted adjacency lists.
inline Matching max_matching(const BipartiteGraph& g) {
    const int nl = g.left_count(), nr = g.right_count();
    constexpr int INF = std::numeric_limits<int>::max();
    std::vector<int> match_l(nl, -1), match_r(nr, -1);  // matched edge id
    std::vector<int> dist(nl);

    auto partner_of_right = [&](int v) { return match_r[v] < 0 ? -1 : g.edge(match_r[v]).first; };

    auto bfs = [&]() {
        std::queue<int> q;
        bool reachable_free = false;
        for (int u = 0; u < nl; ++u) {
            dist[u] = match_l[u] < 0 ? 0 : INF;
            if (dist[u] == 0) q.push(u);
        }
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e : g.edges_at_left(u)) {
                int v = g.edge(e).second;
                int w = partner_of_right(v);
                if (w < 0) {
                    reachable_free = true;
                } else if (dist[w] == INF) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        return reachable_free;
    };

    std::function<bool(int)> try_augment = [&](int u) {
        for (int e : g.edges_at_left(u)) {
            int v = g.edge(e).second;
            int w = partner_of_right(v);
            if (w < 0 || (dist[w] == dist[u] + 1 && try_augment(w))) {
                match_l[u] = e;
                match_r[v] = e;
                return true;
            }
        }
        dist[u] = INF;
        return false;
    };

    while (bfs())
        for (int u = 0; u < nl; ++u)
            if (match_l[u] < 0) try_augment(u);

    Matching m;
    m.left_match = std::move(match_l);
    m.right_match = std::move(match_r);
    for (int u = 0; u < nl; ++u)
        if (m.left_match[u] >= 0) m.edges.push_back(m.left_match[u]);
    return m;
}

/// Proper edge coloring; colors are 0-based.
struct EdgeColoring {
    std::vector<int> color;  // per edge id
    int color_count = 0;
};

inline bool is_proper_coloring(const BipartiteGraph& g, const EdgeColoring& c) {
    for (int u = 0; u < g.left_count(); ++u) {
        const auto& inc = g.edges_at_left(u);
        for (size_t a = 0; a < inc.size(); ++a)
            for (size_t b = a + 1; b < inc.size(); ++b)
                if (c.color[inc[a]] == c.color[inc[b]]) return false;
    }
    for (int v = 0; v < g.right_count(); ++v) {
        const auto& inc = g.edges_at_right(v);
        for (size_t a = 0; a < inc.size(); ++a)
            for (size_t b = a + 1; b < inc.size(); ++b)
                if (c.color[inc[a]] == c.color[inc[b]]) return false;
    }
    return true;
}

/// Proper edge coloring with exactly max_degree(g) colors, which is optimal
/// for bipartite graphs. Edges are taken in id order and get the smallest
/// color free at both endpoints; when the smallest free colors a (at the left
/// end u) and b (at the right end v) differ and a is taken at v, the a/b
/// alternating chain starting at v is flipped first. In a bipartite graph
/// that chain is a path which cannot reach u, so afterwards a is free at both
/// ends.
inline EdgeColoring konig_edge_coloring(const BipartiteGraph& g) {
    const int delta = g.max_degree();
    EdgeColoring result;
    result.color.assign(g.edge_count(), -1);
    result.color_count = g.edge_count() == 0 ? 0 : delta;
    if (g.edge_count() == 0) return result;

    // slot[vertex][color] = incident edge with that color, or -1
    std::vector<std::vector<int>> at_left(g.left_count(), std::vector<int>(delta, -1));
    std::vector<std::vector<int>> at_right(g.right_count(), std::vector<int>(delta, -1));

    auto first_free = [&](const std::vector<int>& slots) {
        for (int c = 0; c < delta; ++c)
            if (slots[c] < 0) return c;
        throw std::logic_error("no free color at a vertex of degree <= max degree");
    };

    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edge(e);
        int a = first_free(at_left[u]);
        int b = first_free(at_right[v]);
        if (a != b && at_right[v][a] >= 0) {
            // collect the alternating a/b path starting at v
            std::vector<int> path;
            bool on_right = true;
            int vertex = v;
            int col = a;
            while (true) {
                int next = (on_right ? at_right[vertex] : at_left[vertex])[col];
                if (next < 0) break;
                path.push_back(next);
                vertex = on_right ? g.edge(next).first : g.edge(next).second;
                on_right = !on_right;
                col = col == a ? b : a;
            }
            for (int pe : path) {
                auto [pu, pv] = g.edge(pe);
                at_left[pu][result.color[pe]] = -1;
                at_right[pv][result.color[pe]] = -1;
            }
            for (int pe : path) {
                int nc = result.color[pe] == a ? b : a;
                result.color[pe] = nc;
                auto [pu, pv] = g.edge(pe);
                at_left[pu][nc] = pe;
                at_right[pv][nc] = pe;
            }
        }
        result.color[e] = a;
        at_left[u][a] = e;
        at_right[v][a] = e;
    }
    return result;
}

/// One edge per line, "left right", for external visualization tools.
inline std::string dump_edges(const BipartiteGraph& g) {
    std::ostringstream out;
    for (int e = 0; e < g.edge_count(); ++e)
        out << g.edge(e).first << ' ' << g.edge(e).second << "\n";
    return out.str();
}

}  // namespace fightsched
