#ifndef CHAINORDER_CLIQUE_HPP
#define CHAINORDER_CLIQUE_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitset.hpp"

namespace chainorder {

/// Simple undirected graph on at most 128 vertices, adjacency stored as bit rows.
class Graph {
  public:
    static constexpr int max_vertices = VertexSet128::capacity;

    explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(check_size(n))) {}

    int size() const noexcept { return n_; }

    void add_edge(int u, int v) {
        if (u == v) throw std::invalid_argument("Graph: self-loop " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("Graph: vertex out of range");
        adj_[u].set(v);
        adj_[v].set(u);
    }

    bool adjacent(int u, int v) const { return adj_[u].test(v); }
    const VertexSet128& neighbours(int v) const { return adj_[v]; }

    std::size_t edge_count() const {
        std::size_t m = 0;
        for (const auto& row : adj_) m += static_cast<std::size_t>(row.count());
        return m / 2;
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n_; ++u)
            adj_[u].for_each([&](int v) {
                if (u < v) out.emplace_back(u, v);
            });
        return out;
    }

    Graph complement() const {
        Graph g(n_);
        auto all = VertexSet128::first_n(n_);
        for (int v = 0; v < n_; ++v) {
            g.adj_[v] = all - adj_[v];
            g.adj_[v].reset(v);
        }
        return g;
    }

  private:
    static int check_size(int n) {
        if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
        if (n > max_vertices)
            throw std::length_error("Graph: " + std::to_string(n) + " vertices exceed the supported maximum of " +
                                    std::to_string(max_vertices));
        return n;
    }

    int n_;
    std::vector<VertexSet128> adj_;
};

namespace detail {

// Bron–Kerbosch with Tomita pivoting: the pivot maximises |P ∩ N(u)|.
template <class Emit>
void bron_kerbosch(const Graph& g, VertexSet128 r, VertexSet128 p, VertexSet128 x, Emit& emit) {
    if (p.empty() && x.empty()) {
        emit(r);
        return;
    }
    int pivot = -1;
    int best = -1;
    (p | x).for_each([&](int u) {
        int c = (p & g.neighbours(u)).count();
        if (c > best) {
            best = c;
            pivot = u;
        }
    });
    auto candidates = p - g.neighbours(pivot);
    candidates.for_each([&](int v) {
        auto rv = r;
        rv.set(v);
        bron_kerbosch(g, rv, p & g.neighbours(v), x & g.neighbours(v), emit);
        p.reset(v);
        x.set(v);
    });
}

}  // namespace detail

/// All inclusion-maximal cliques of g; each sorted, the list sorted lexicographically.
inline std::vector<std::vector<int>> maximal_cliques(const Graph& g) {
    std::vector<std::vector<int>> out;
    if (g.size() == 0) {
        out.emplace_back();
        return out;
    }
    auto emit = [&](const VertexSet128& s) { out.push_back(s.indices()); };
    detail::bron_kerbosch(g, VertexSet128{}, VertexSet128::first_n(g.size()), VertexSet128{}, emit);
    std::sort(out.begin(), out.end());
    return out;
}

/// Maximal independent sets, computed as maximal cliques of the complement graph.
inline std::vector<std::vector<int>> maximal_independent_sets(const Graph& g) {
    return maximal_cliques(g.complement());
}

}  // namespace chainorder

#endif  // CHAINORDER_CLIQUE_HPP
