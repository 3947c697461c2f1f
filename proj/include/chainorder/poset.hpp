#ifndef CHAINORDER_POSET_HPP
#define CHAINORDER_POSET_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "clique.hpp"

namespace chainorder {

/// Rank sizes (tau_1, ..., tau_l) of a maximal ranked poset.
struct Tau {
    std::vector<int> parts;

    int length() const noexcept { return static_cast<int>(parts.size()); }
    int total() const noexcept { return std::accumulate(parts.begin(), parts.end(), 0); }
    /// Size of rank i, 1-based.
    int operator[](int i) const { return parts.at(static_cast<std::size_t>(i - 1)); }

    auto operator<=>(const Tau&) const = default;

    void validate() const {
        if (parts.empty()) throw std::invalid_argument("tau must have at least one part");
        for (int t : parts)
            if (t < 1) throw std::invalid_argument("tau parts must be positive, got " + std::to_string(t));
    }

    std::string to_string(char sep = ',') const {
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += sep;
            s += std::to_string(parts[i]);
        }
        return s;
    }

    /// Parses "5,2,1,4,2,3".
    static Tau parse(const std::string& text) {
        Tau tau;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t pos = 0;
            int v = 0;
            try {
                v = std::stoi(item, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("tau: cannot parse '" + item + "'");
            }
            if (pos != item.size()) throw std::invalid_argument("tau: cannot parse '" + item + "'");
            tau.parts.push_back(v);
        }
        tau.validate();
        return tau;
    }
};

/// Index arithmetic for the elements y^i_t of P_tau (rank-major, then index).
struct RankLayout {
    Tau tau;
    std::vector<int> offset;  // offset[i-1] = index of y^i_1

    explicit RankLayout(Tau t) : tau(std::move(t)) {
        tau.validate();
        int acc = 0;
        for (int s : tau.parts) {
            offset.push_back(acc);
            acc += s;
        }
    }

    int ranks() const noexcept { return tau.length(); }
    int size() const noexcept { return tau.total(); }
    int rank_size(int i) const { return tau[i]; }
    /// Index of y^i_t, both 1-based.
    int index(int i, int t) const { return offset.at(static_cast<std::size_t>(i - 1)) + t - 1; }
    int rank_of(int idx) const {
        auto it = std::upper_bound(offset.begin(), offset.end(), idx);
        return static_cast<int>(it - offset.begin());
    }
    int position_in_rank(int idx) const { return idx - offset[static_cast<std::size_t>(rank_of(idx) - 1)] + 1; }
};

/// Finite poset stored by its covering relation. Immutable after construction.
class Poset {
  public:
    Poset() = default;

    /// Validates DAG-ness, transitive reduction and (if given) rank consistency.
    static Poset make(std::vector<std::string> elements, std::vector<std::pair<int, int>> covers,
                      std::optional<std::vector<int>> rank_of = std::nullopt) {
        Poset p;
        p.elements_ = std::move(elements);
        p.covers_ = std::move(covers);
        p.rank_of_ = std::move(rank_of);
        p.build(true);
        return p;
    }

    /// Builds a poset from arbitrary strict-order generating pairs (closure, then reduction).
    static Poset from_relation(std::vector<std::string> elements, const std::vector<std::pair<int, int>>& pairs) {
        const int n = static_cast<int>(elements.size());
        std::vector<DynamicBitset> above(static_cast<std::size_t>(n), DynamicBitset(static_cast<std::size_t>(n)));
        for (auto [a, b] : pairs) {
            check_index(a, n);
            check_index(b, n);
            above[a].set(static_cast<std::size_t>(b));
        }
        // Warshall closure
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                if (above[i].test(static_cast<std::size_t>(k))) above[i] |= above[k];
        for (int i = 0; i < n; ++i)
            if (above[i].test(static_cast<std::size_t>(i)))
                throw std::invalid_argument("relation contains a cycle through '" + elements[i] + "'");
        std::vector<std::pair<int, int>> covers;
        for (int a = 0; a < n; ++a) {
            above[a].for_each([&](std::size_t bb) {
                int b = static_cast<int>(bb);
                bool direct = true;
                above[a].for_each([&](std::size_t c) {
                    if (direct && static_cast<int>(c) != b && above[c].test(bb)) direct = false;
                });
                if (direct) covers.emplace_back(a, b);
            });
        }
        Poset p;
        p.elements_ = std::move(elements);
        p.covers_ = std::move(covers);
        p.build(false);
        return p;
    }

    int size() const noexcept { return static_cast<int>(elements_.size()); }
    const std::vector<std::string>& elements() const noexcept { return elements_; }
    const std::string& element(int i) const { return elements_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::pair<int, int>>& covers() const noexcept { return covers_; }
    const std::optional<std::vector<int>>& rank_of() const noexcept { return rank_of_; }
    const std::vector<int>& upper_covers(int i) const { return upper_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& lower_covers(int i) const { return lower_[static_cast<std::size_t>(i)]; }

    /// Strict order p < q.
    bool less(int p, int q) const { return above_[static_cast<std::size_t>(p)].test(static_cast<std::size_t>(q)); }
    bool comparable(int p, int q) const { return less(p, q) || less(q, p); }
    /// Elements strictly above p.
    const DynamicBitset& strictly_above(int p) const { return above_[static_cast<std::size_t>(p)]; }

    bool is_minimal(int p) const { return lower_[static_cast<std::size_t>(p)].empty(); }
    bool is_maximal(int p) const { return upper_[static_cast<std::size_t>(p)].empty(); }

    int index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw std::out_of_range("unknown poset element '" + id + "'");
        return it->second;
    }

    /// Up-set generated by the given elements.
    DynamicBitset filter_of(const std::vector<int>& gens) const {
        DynamicBitset f(elements_.size());
        for (int g : gens) {
            f.set(static_cast<std::size_t>(g));
            f |= above_[static_cast<std::size_t>(g)];
        }
        return f;
    }

    /// Induced subposet on the given elements (in the given order).
    Poset induced(const std::vector<int>& subset) const {
        std::vector<std::string> ids;
        std::vector<std::pair<int, int>> rel;
        for (int a : subset) ids.push_back(element(a));
        for (std::size_t i = 0; i < subset.size(); ++i)
            for (std::size_t j = 0; j < subset.size(); ++j)
                if (less(subset[i], subset[j])) rel.emplace_back(static_cast<int>(i), static_cast<int>(j));
        return from_relation(std::move(ids), rel);
    }

  private:
    static void check_index(int i, int n) {
        if (i < 0 || i >= n) throw std::invalid_argument("poset element index " + std::to_string(i) + " out of range");
    }

    void build(bool check_reduced) {
        const int n = size();
        index_.clear();
        for (int i = 0; i < n; ++i)
            if (!index_.emplace(elements_[i], i).second)
                throw std::invalid_argument("duplicate poset element id '" + elements_[i] + "'");
        std::sort(covers_.begin(), covers_.end());
        if (std::adjacent_find(covers_.begin(), covers_.end()) != covers_.end())
            throw std::invalid_argument("duplicate cover pair");
        upper_.assign(static_cast<std::size_t>(n), {});
        lower_.assign(static_cast<std::size_t>(n), {});
        for (auto [a, b] : covers_) {
            check_index(a, n);
            check_index(b, n);
            if (a == b) throw std::invalid_argument("cover pair is a self-loop at '" + elements_[a] + "'");
            upper_[a].push_back(b);
            lower_[b].push_back(a);
        }
        // Kahn's algorithm gives a topological order or detects a cycle.
        std::vector<int> indeg(static_cast<std::size_t>(n), 0), order;
        for (auto [a, b] : covers_) ++indeg[b];
        for (int i = 0; i < n; ++i)
            if (indeg[i] == 0) order.push_back(i);
        for (std::size_t h = 0; h < order.size(); ++h)
            for (int b : upper_[order[h]])
                if (--indeg[b] == 0) order.push_back(b);
        if (static_cast<int>(order.size()) != n) throw std::invalid_argument("cover relation contains a directed cycle");

        above_.assign(static_cast<std::size_t>(n), DynamicBitset(static_cast<std::size_t>(n)));
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            for (int b : upper_[*it]) {
                above_[*it].set(static_cast<std::size_t>(b));
                above_[*it] |= above_[b];
            }
        if (check_reduced) {
            for (auto [a, b] : covers_)
                for (int c : upper_[a])
                    if (c != b && above_[c].test(static_cast<std::size_t>(b)))
                        throw std::invalid_argument("cover relation is not transitively reduced: '" + elements_[a] +
                                                    "' < '" + elements_[c] + "' < '" + elements_[b] + "'");
        }
        if (rank_of_) {
            if (static_cast<int>(rank_of_->size()) != n) throw std::invalid_argument("rank map size mismatch");
            for (int r : *rank_of_)
                if (r < 1) throw std::invalid_argument("ranks must be positive");
            for (auto [a, b] : covers_)
                if ((*rank_of_)[b] != (*rank_of_)[a] + 1)
                    throw std::invalid_argument("rank map inconsistent with cover '" + elements_[a] + "' < '" +
                                                elements_[b] + "'");
        }
    }

    std::vector<std::string> elements_;
    std::vector<std::pair<int, int>> covers_;
    std::optional<std::vector<int>> rank_of_;
    std::vector<std::vector<int>> upper_, lower_;
    std::vector<DynamicBitset> above_;
    std::unordered_map<std::string, int> index_;
};

/// Id of y^i_t in P_tau.
inline std::string ranked_element_id(int rank, int t) { return "y" + std::to_string(rank) + "_" + std::to_string(t); }

/// P_tau: tau_i elements in rank i, every element covers every element of the rank below.
inline Poset make_maximal_ranked(const Tau& tau) {
    tau.validate();
    RankLayout layout(tau);
    std::vector<std::string> ids;
    std::vector<int> ranks;
    for (int i = 1; i <= tau.length(); ++i)
        for (int t = 1; t <= tau[i]; ++t) {
            ids.push_back(ranked_element_id(i, t));
            ranks.push_back(i);
        }
    std::vector<std::pair<int, int>> covers;
    for (int i = 1; i < tau.length(); ++i)
        for (int a = 1; a <= tau[i]; ++a)
            for (int b = 1; b <= tau[i + 1]; ++b) covers.emplace_back(layout.index(i, a), layout.index(i + 1, b));
    return Poset::make(std::move(ids), std::move(covers), std::move(ranks));
}

/// Random poset on n elements "p0".."p{n-1}": each pair i < j is related with the given probability,
/// then closed transitively. Deterministic for a fixed seed.
inline Poset random_poset(int n, double density, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("random_poset: negative size");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(density);
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    std::vector<std::pair<int, int>> rel;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) rel.emplace_back(i, j);
    return Poset::from_relation(std::move(ids), rel);
}

/// P together with an adjoined bottom 0^ and top 1^.
struct ExtendedPoset {
    Poset base;
    Poset hat;   // base elements keep their indices; then bottom, then top
    int bottom;  // index in hat
    int top;     // index in hat
};

inline constexpr const char* bottom_id = "0^";
inline constexpr const char* top_id = "1^";

inline ExtendedPoset extend_poset(const Poset& p) {
    const int n = p.size();
    auto ids = p.elements();
    ids.emplace_back(bottom_id);
    ids.emplace_back(top_id);
    auto covers = p.covers();
    for (int i = 0; i < n; ++i) {
        if (p.is_minimal(i)) covers.emplace_back(n, i);
        if (p.is_maximal(i)) covers.emplace_back(i, n + 1);
    }
    if (n == 0) covers.emplace_back(0, 1);
    std::optional<std::vector<int>> ranks;
    if (p.rank_of()) {
        // Shift by one so the bottom gets rank 1; only keep it when consistent.
        std::vector<int> r;
        int top_rank = 0;
        for (int x : *p.rank_of()) {
            r.push_back(x + 1);
            top_rank = std::max(top_rank, x + 2);
        }
        r.push_back(1);
        r.push_back(top_rank);
        bool ok = true;
        for (auto [a, b] : covers)
            if (r[b] != r[a] + 1) ok = false;
        if (ok) ranks = std::move(r);
    }
    Poset hat = Poset::make(std::move(ids), std::move(covers), std::move(ranks));
    return ExtendedPoset{p, std::move(hat), n, n + 1};
}

/// Every maximal chain of the base poset, as lists of base indices, in lexicographic order.
inline std::vector<std::vector<int>> maximal_chains(const ExtendedPoset& ep) {
    std::vector<std::vector<int>> out;
    if (ep.base.size() == 0) return out;
    std::vector<int> path;
    // Iterative DFS over the Hasse diagram of hat starting at bottom.
    struct Frame {
        int node;
        std::size_t next;
    };
    std::vector<Frame> stack{{ep.bottom, 0}};
    while (!stack.empty()) {
        auto& fr = stack.back();
        const auto& ups = ep.hat.upper_covers(fr.node);
        if (fr.next == ups.size()) {
            stack.pop_back();
            if (!path.empty() && !stack.empty()) path.pop_back();
            continue;
        }
        int nxt = ups[fr.next++];
        if (nxt == ep.top) {
            out.push_back(path);
            continue;
        }
        path.push_back(nxt);
        stack.push_back({nxt, 0});
    }
    return out;
}

/// Undirected graph of comparable pairs.
inline Graph comparability_graph(const Poset& p) {
    Graph g(p.size());
    for (int a = 0; a < p.size(); ++a) p.strictly_above(a).for_each([&](std::size_t b) { g.add_edge(a, static_cast<int>(b)); });
    return g;
}

/// Partition of a ground set {0, ..., N-1} into blocks.
struct Partition {
    std::vector<std::vector<int>> blocks;

    /// Sorts each block and orders blocks by smallest element.
    Partition& canonicalize() {
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        std::sort(blocks.begin(), blocks.end());
        return *this;
    }
    Partition canonical() const {
        Partition p = *this;
        return p.canonicalize();
    }

    std::size_t block_count() const noexcept { return blocks.size(); }

    /// block id per element; throws if the blocks do not partition {0..n-1}.
    std::vector<int> block_of(int n) const {
        std::vector<int> id(static_cast<std::size_t>(n), -1);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (blocks[b].empty()) throw std::invalid_argument("partition has an empty block");
            for (int x : blocks[b]) {
                if (x < 0 || x >= n) throw std::invalid_argument("partition element " + std::to_string(x) + " out of range");
                if (id[x] != -1) throw std::invalid_argument("partition blocks overlap at element " + std::to_string(x));
                id[x] = static_cast<int>(b);
            }
        }
        for (int x = 0; x < n; ++x)
            if (id[x] == -1) throw std::invalid_argument("partition misses element " + std::to_string(x));
        return id;
    }

    static Partition singletons(int n) {
        Partition p;
        for (int i = 0; i < n; ++i) p.blocks.push_back({i});
        return p;
    }

    auto operator<=>(const Partition&) const = default;
};

enum class FacePartitionViolation { none, bottom_top_together, disconnected_block, incompatible };

struct FacePartitionVerdict {
    bool valid = true;
    FacePartitionViolation reason = FacePartitionViolation::none;
    std::string message;
};

namespace detail {

// Connectivity of a block in the Hasse diagram of the induced subposet.
inline bool block_connected(const Poset& p, const std::vector<int>& block) {
    if (block.size() <= 1) return true;
    const std::size_t m = block.size();
    std::vector<std::vector<int>> adj(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (!p.less(block[i], block[j])) continue;
            bool cover = true;
            for (std::size_t r = 0; r < m && cover; ++r)
                if (p.less(block[i], block[r]) && p.less(block[r], block[j])) cover = false;
            if (cover) {
                adj[i].push_back(static_cast<int>(j));
                adj[j].push_back(static_cast<int>(i));
            }
        }
    std::vector<char> seen(m, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
    }
    return reached == m;
}

// Block digraph B -> C when some p in B lies below some q in C; returns true when acyclic.
inline bool block_relation_acyclic(const Poset& p, const Partition& pi, const std::vector<int>& block_of) {
    const std::size_t nb = pi.blocks.size();
    std::vector<std::vector<char>> edge(nb, std::vector<char>(nb, 0));
    for (const auto& [a, b] : p.covers()) {
        int ba = block_of[a], bb = block_of[b];
        if (ba != bb) edge[ba][bb] = 1;
    }
    // Covers generate the relation; a cycle among blocks exists iff one exists in this digraph.
    std::vector<int> state(nb, 0);
    for (std::size_t s = 0; s < nb; ++s) {
        if (state[s]) continue;
        std::vector<std::pair<int, int>> st{{static_cast<int>(s), 0}};
        state[s] = 1;
        while (!st.empty()) {
            auto& [u, nx] = st.back();
            if (nx == static_cast<int>(nb)) {
                state[u] = 2;
                st.pop_back();
                continue;
            }
            int v = nx++;
            if (!edge[u][v]) continue;
            if (state[v] == 1) return false;
            if (state[v] == 0) {
                state[v] = 1;
                st.emplace_back(v, 0);
            }
        }
    }
    return true;
}

}  // namespace detail

/// Checks whether pi (over the elements of ep.hat) is a face partition of the order polytope.
inline FacePartitionVerdict validate_face_partition(const ExtendedPoset& ep, const Partition& pi) {
    auto block_of = pi.block_of(ep.hat.size());
    if (block_of[ep.bottom] == block_of[ep.top])
        return {false, FacePartitionViolation::bottom_top_together, "0^ and 1^ lie in the same block"};
    for (const auto& block : pi.blocks)
        if (!detail::block_connected(ep.hat, block)) {
            std::string ids;
            for (int x : block) ids += (ids.empty() ? "" : ",") + ep.hat.element(x);
            return {false, FacePartitionViolation::disconnected_block, "block {" + ids + "} is not connected"};
        }
    if (!detail::block_relation_acyclic(ep.hat, pi, block_of))
        return {false, FacePartitionViolation::incompatible, "block relation is not antisymmetric"};
    return {};
}

/// Quotient poset on the blocks of a compatible partition of p.
inline Poset quotient_by_partition(const Poset& p, const Partition& pi) {
    auto block_of = pi.block_of(p.size());
    if (!detail::block_relation_acyclic(p, pi, block_of))
        throw std::invalid_argument("quotient: partition is not compatible with the order");
    std::vector<std::string> ids;
    for (const auto& block : pi.blocks) {
        if (block.size() == 1) {
            ids.push_back(p.element(block[0]));
            continue;
        }
        std::string s = "{";
        for (std::size_t i = 0; i < block.size(); ++i) s += (i ? "," : "") + p.element(block[i]);
        ids.push_back(s + "}");
    }
    std::vector<std::pair<int, int>> rel;
    for (auto [a, b] : p.covers())
        if (block_of[a] != block_of[b]) rel.emplace_back(block_of[a], block_of[b]);
    return Poset::from_relation(std::move(ids), rel);
}

/// If p is isomorphic to some P_tau, returns tau.
inline std::optional<Tau> recognize_maximal_ranked(const Poset& p) {
    const int n = p.size();
    if (n == 0) return std::nullopt;
    // Height of each element = longest chain from a minimal element.
    std::vector<int> height(static_cast<std::size_t>(n), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [a, b] : p.covers())
            if (height[b] < height[a] + 1) {
                height[b] = height[a] + 1;
                changed = true;
            }
    }
    int levels = *std::max_element(height.begin(), height.end()) + 1;
    Tau tau;
    tau.parts.assign(static_cast<std::size_t>(levels), 0);
    for (int h : height) ++tau.parts[static_cast<std::size_t>(h)];
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (height[a] < height[b] && !p.less(a, b)) return std::nullopt;
            if (height[a] == height[b] && a != b && p.comparable(a, b)) return std::nullopt;
        }
    return tau;
}

/// True iff some element has at least two lower and two upper covers.
inline bool has_hl_pattern(const Poset& p) {
    for (int c = 0; c < p.size(); ++c)
        if (p.lower_covers(c).size() >= 2 && p.upper_covers(c).size() >= 2) return true;
    return false;
}

/// Split of P_tau at rank k: ranks 1..k form the chain part, ranks k+1..l the order part.
struct KDecomposition {
    Tau tau;
    int k;
    std::vector<int> chain_part;
    std::vector<int> order_part;
};

inline KDecomposition make_k_decomposition(const Tau& tau, int k) {
    tau.validate();
    if (k < 0 || k > tau.length())
        throw std::invalid_argument("k = " + std::to_string(k) + " outside [0, " + std::to_string(tau.length()) + "]");
    RankLayout layout(tau);
    KDecomposition d{tau, k, {}, {}};
    for (int i = 1; i <= tau.length(); ++i)
        for (int t = 1; t <= tau[i]; ++t) (i <= k ? d.chain_part : d.order_part).push_back(layout.index(i, t));
    return d;
}

}  // namespace chainorder

#endif  // CHAINORDER_POSET_HPP
