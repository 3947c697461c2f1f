#ifndef CHAINORDER_POLYTOPE_HPP
#define CHAINORDER_POLYTOPE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clique.hpp"
#include "exact.hpp"
#include "poset.hpp"

namespace chainorder {

/// Thrown when a computation would exceed its configured size budget.
class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// coeffs . x <= rhs (inequality) or coeffs . x == rhs (equation).
struct LinearRow {
    std::vector<std::int64_t> coeffs;
    std::int64_t rhs = 0;

    std::int64_t eval(const std::vector<std::int64_t>& x) const {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * x[i];
        return s;
    }
    auto operator<=>(const LinearRow&) const = default;
};

struct HRep {
    std::vector<std::string> vars;
    std::vector<LinearRow> ineqs;
    std::vector<LinearRow> eqs;

    std::size_t dim() const noexcept { return vars.size(); }

    bool contains(const std::vector<std::int64_t>& x) const {
        for (const auto& r : ineqs)
            if (r.eval(x) > r.rhs) return false;
        for (const auto& r : eqs)
            if (r.eval(x) != r.rhs) return false;
        return true;
    }
};

using Point = std::vector<std::int64_t>;

struct VRep {
    std::vector<Point> vertices;

    VRep& canonicalize() {
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        return *this;
    }
    std::size_t size() const noexcept { return vertices.size(); }
    bool operator==(const VRep&) const = default;
};

struct DoubleDescription {
    VRep vrep;
    HRep hrep;
};

namespace detail {

inline LinearRow unit_row(std::size_t n, std::initializer_list<std::pair<int, std::int64_t>> terms, std::int64_t rhs) {
    LinearRow r{std::vector<std::int64_t>(n, 0), rhs};
    for (auto [i, c] : terms) r.coeffs[static_cast<std::size_t>(i)] += c;
    return r;
}

// Calls f(S) for every subset S of every maximal antichain of p.
template <class F>
void for_each_antichain_subset(const Poset& p, F&& f) {
    for (const auto& antichain : maximal_independent_sets(comparability_graph(p))) {
        if (antichain.size() > 30) throw BudgetExceeded("maximal antichain too large for subset enumeration");
        const std::uint64_t total = std::uint64_t{1} << antichain.size();
        std::vector<int> subset;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            subset.clear();
            for (std::size_t j = 0; j < antichain.size(); ++j)
                if ((mask >> j) & 1U) subset.push_back(antichain[j]);
            f(subset);
        }
    }
}

inline Point characteristic_vector(const DynamicBitset& s) {
    Point v(s.size(), 0);
    s.for_each([&](std::size_t i) { v[i] = 1; });
    return v;
}

}  // namespace detail

/// Vertices are the characteristic vectors of all filters; facets from the Hasse arcs of the extended poset.
inline DoubleDescription order_polytope_dd(const Poset& p) {
    const auto n = static_cast<std::size_t>(p.size());
    std::set<DynamicBitset> filters;
    detail::for_each_antichain_subset(p, [&](const std::vector<int>& s) { filters.insert(p.filter_of(s)); });
    DoubleDescription dd;
    for (const auto& f : filters) dd.vrep.vertices.push_back(detail::characteristic_vector(f));
    dd.vrep.canonicalize();

    dd.hrep.vars = p.elements();
    for (int a = 0; a < p.size(); ++a)
        if (p.is_minimal(a)) dd.hrep.ineqs.push_back(detail::unit_row(n, {{a, -1}}, 0));
    for (auto [a, b] : p.covers()) dd.hrep.ineqs.push_back(detail::unit_row(n, {{a, 1}, {b, -1}}, 0));
    for (int a = 0; a < p.size(); ++a)
        if (p.is_maximal(a)) dd.hrep.ineqs.push_back(detail::unit_row(n, {{a, 1}}, 1));
    return dd;
}

/// Vertices are the characteristic vectors of all antichains; one sum inequality per maximal chain.
inline DoubleDescription chain_polytope_dd(const Poset& p) {
    const auto n = static_cast<std::size_t>(p.size());
    std::set<DynamicBitset> antichains;
    detail::for_each_antichain_subset(p, [&](const std::vector<int>& s) {
        DynamicBitset b(n);
        for (int x : s) b.set(static_cast<std::size_t>(x));
        antichains.insert(b);
    });
    DoubleDescription dd;
    for (const auto& a : antichains) dd.vrep.vertices.push_back(detail::characteristic_vector(a));
    dd.vrep.canonicalize();

    dd.hrep.vars = p.elements();
    for (int a = 0; a < p.size(); ++a) dd.hrep.ineqs.push_back(detail::unit_row(n, {{a, -1}}, 0));
    for (const auto& chain : maximal_chains(extend_poset(p))) {
        LinearRow r{std::vector<std::int64_t>(n, 0), 1};
        for (int x : chain) r.coeffs[static_cast<std::size_t>(x)] = 1;
        dd.hrep.ineqs.push_back(std::move(r));
    }
    return dd;
}

/// Facet description of the chain-order polytope of P_tau for the k-decomposition,
/// with the bottom fixed to 0 and the top fixed to 1.
inline HRep chain_order_hrep(const Tau& tau, int k, std::uint64_t max_rows = 10'000'000) {
    tau.validate();
    const int ell = tau.length();
    if (k < 0 || k > ell) throw std::invalid_argument("chain_order_hrep: k = " + std::to_string(k) + " outside [0, " +
                                                      std::to_string(ell) + "]");
    RankLayout layout(tau);
    const auto n = static_cast<std::size_t>(layout.size());
    std::uint64_t tuples = 1;
    for (int i = 1; i <= std::min(k + 1, ell); ++i) tuples *= static_cast<std::uint64_t>(tau[i]);
    if (tuples > max_rows) throw BudgetExceeded("chain_order_hrep: too many chain inequalities");

    HRep h;
    h.vars = make_maximal_ranked(tau).elements();
    for (int i = 1; i <= k; ++i)
        for (int t = 1; t <= tau[i]; ++t) h.ineqs.push_back(detail::unit_row(n, {{layout.index(i, t), -1}}, 0));

    // Chain inequalities x_{p_1} + ... + x_{p_k} <= x_{q_{k+1}} (right side 1 when k = l),
    // enumerated as an odometer over Y^1 x ... x Y^{min(k+1, l)}.
    const int last = std::min(k + 1, ell);
    std::vector<int> choice(static_cast<std::size_t>(last), 1);
    for (std::uint64_t c = 0; c < tuples; ++c) {
        LinearRow r{std::vector<std::int64_t>(n, 0), k == ell ? 1 : 0};
        for (int i = 1; i <= k; ++i) r.coeffs[static_cast<std::size_t>(layout.index(i, choice[i - 1]))] = 1;
        if (k < ell) r.coeffs[static_cast<std::size_t>(layout.index(k + 1, choice[k]))] = -1;
        h.ineqs.push_back(std::move(r));
        for (int i = last; i >= 1; --i) {
            if (++choice[i - 1] <= tau[i]) break;
            choice[i - 1] = 1;
        }
    }

    for (int i = k + 1; i < ell; ++i)
        for (int a = 1; a <= tau[i]; ++a)
            for (int b = 1; b <= tau[i + 1]; ++b)
                h.ineqs.push_back(detail::unit_row(n, {{layout.index(i, a), 1}, {layout.index(i + 1, b), -1}}, 0));
    if (k < ell)
        for (int t = 1; t <= tau[ell]; ++t) h.ineqs.push_back(detail::unit_row(n, {{layout.index(ell, t), 1}}, 1));
    return h;
}

namespace detail {

struct SparseRow {
    std::vector<std::pair<int, std::int64_t>> terms;
    std::int64_t rhs;
};

inline std::vector<SparseRow> sparse_rows(const std::vector<LinearRow>& rows) {
    std::vector<SparseRow> out;
    for (const auto& r : rows) {
        SparseRow s{{}, r.rhs};
        for (std::size_t i = 0; i < r.coeffs.size(); ++i)
            if (r.coeffs[i] != 0) s.terms.emplace_back(static_cast<int>(i), r.coeffs[i]);
        out.push_back(std::move(s));
    }
    return out;
}

inline std::int64_t eval_mask(const SparseRow& r, std::uint64_t mask) {
    std::int64_t s = 0;
    for (auto [i, c] : r.terms)
        if ((mask >> i) & 1U) s += c;
    return s;
}

}  // namespace detail

/// All 0/1 points of h at which the tight rows have full rank, i.e. the 0/1 vertices.
inline VRep zero_one_vertices(const HRep& h, std::uint64_t max_points = std::uint64_t{1} << 30) {
    const std::size_t n = h.dim();
    if (n > 30) throw BudgetExceeded("zero_one_vertices: " + std::to_string(n) + " variables exceed the limit of 30");
    const std::uint64_t total = std::uint64_t{1} << n;
    if (total > max_points) throw BudgetExceeded("zero_one_vertices: 2^" + std::to_string(n) + " points exceed budget");
    auto ineqs = detail::sparse_rows(h.ineqs);
    auto eqs = detail::sparse_rows(h.eqs);
    VRep out;
    IntMatrix tight;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        bool feasible = true;
        for (const auto& r : eqs)
            if (detail::eval_mask(r, mask) != r.rhs) {
                feasible = false;
                break;
            }
        if (!feasible) continue;
        tight.clear();
        for (std::size_t j = 0; j < ineqs.size() && feasible; ++j) {
            auto v = detail::eval_mask(ineqs[j], mask);
            if (v > ineqs[j].rhs) feasible = false;
            else if (v == ineqs[j].rhs) tight.push_back(h.ineqs[j].coeffs);
        }
        if (!feasible) continue;
        for (const auto& r : h.eqs) tight.push_back(r.coeffs);
        if (tight.size() < n || integer_rank(tight) != n) continue;
        Point p(n, 0);
        for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::int64_t>((mask >> i) & 1U);
        out.vertices.push_back(std::move(p));
    }
    out.canonicalize();
    return out;
}

namespace detail {

inline std::uint64_t binomial_capped(std::uint64_t m, std::uint64_t r, std::uint64_t cap) {
    if (r > m) return 0;
    r = std::min(r, m - r);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        acc = acc * (m - r + i) / i;
        if (acc > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(acc);
}

// Reduces row against an echelon basis; returns true when it stays nonzero (and appends it).
inline bool extend_basis(std::vector<std::pair<std::size_t, std::vector<std::int64_t>>>& basis, std::vector<std::int64_t> row) {
    for (const auto& [pc, b] : basis) {
        if (row[pc] == 0) continue;
        std::int64_t g = std::gcd(b[pc], row[pc]);
        std::int64_t fa = b[pc] / g, fb = row[pc] / g;
        for (std::size_t j = 0; j < row.size(); ++j) row[j] = checked_sub(checked_mul(fa, row[j]), checked_mul(fb, b[j]));
        normalize_row(row);
    }
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0) {
            basis.emplace_back(j, std::move(row));
            return true;
        }
    return false;
}

}  // namespace detail

/// Brute-force vertex enumeration: solve every nonsingular n-subset of rows exactly,
/// keep feasible solutions. Independent of the 0/1 assumption.
inline std::vector<RationalPoint> vertex_enum_exact(const HRep& h, std::uint64_t max_subsets = 10'000'000) {
    const std::size_t n = h.dim();
    const std::size_t need = n >= h.eqs.size() ? n - h.eqs.size() : 0;
    if (detail::binomial_capped(h.ineqs.size(), need, max_subsets) > max_subsets)
        throw BudgetExceeded("vertex_enum_exact: C(" + std::to_string(h.ineqs.size()) + ", " + std::to_string(need) +
                             ") row subsets exceed budget");
    std::set<RationalPoint> found;
    auto feasible = [&](const RationalPoint& p) {
        auto value = [&](const LinearRow& r) {
            std::int64_t s = 0;
            for (std::size_t i = 0; i < n; ++i) s = s + detail::checked_mul(r.coeffs[i], p.num[i]);
            return s;
        };
        for (const auto& r : h.ineqs)
            if (value(r) > detail::checked_mul(r.rhs, p.den)) return false;
        for (const auto& r : h.eqs)
            if (value(r) != detail::checked_mul(r.rhs, p.den)) return false;
        return true;
    };

    using Basis = std::vector<std::pair<std::size_t, std::vector<std::int64_t>>>;
    Basis base;
    for (const auto& e : h.eqs)
        if (!detail::extend_basis(base, e.coeffs)) return {};  // dependent equations: no vertex basis of this form
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, const Basis&)> dfs = [&](std::size_t start, const Basis& basis) {
        if (chosen.size() == need) {
            IntMatrix a;
            std::vector<std::int64_t> b;
            for (const auto& e : h.eqs) {
                a.push_back(e.coeffs);
                b.push_back(e.rhs);
            }
            for (auto j : chosen) {
                a.push_back(h.ineqs[j].coeffs);
                b.push_back(h.ineqs[j].rhs);
            }
            if (auto p = solve_exact(a, b); p && feasible(*p)) found.insert(*p);
            return;
        }
        for (std::size_t j = start; j + (need - chosen.size()) <= h.ineqs.size(); ++j) {
            Basis next = basis;
            if (!detail::extend_basis(next, h.ineqs[j].coeffs)) continue;
            chosen.push_back(j);
            dfs(j + 1, next);
            chosen.pop_back();
        }
    };
    if (n == 0) return {RationalPoint{{}, 1}};
    dfs(0, base);
    return {found.begin(), found.end()};
}

/// Number of integer points in the t-th dilate of h (points of {0..t}^n satisfying h scaled by t).
inline std::uint64_t lattice_point_count(const HRep& h, int t, std::uint64_t max_points = 100'000'000) {
    if (t < 1) throw std::invalid_argument("lattice_point_count: dilation must be positive");
    const std::size_t n = h.dim();
    unsigned __int128 total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= static_cast<unsigned>(t + 1);
        if (total > max_points) throw BudgetExceeded("lattice_point_count: (t+1)^n exceeds budget");
    }
    // Each row is checked as soon as its last variable is assigned.
    std::vector<std::vector<std::pair<const LinearRow*, bool>>> due(n + 1);
    auto schedule = [&](const LinearRow& r, bool eq) {
        std::size_t last = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (r.coeffs[i] != 0) last = i + 1;
        due[last].emplace_back(&r, eq);
    };
    for (const auto& r : h.ineqs) schedule(r, false);
    for (const auto& r : h.eqs) schedule(r, true);
    for (auto [r, eq] : due[0])
        if (eq ? r->rhs != 0 : r->rhs < 0) return 0;

    std::vector<std::int64_t> x(n, 0);
    std::uint64_t count = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            ++count;
            return;
        }
        for (int v = 0; v <= t; ++v) {
            x[i] = v;
            bool ok = true;
            for (auto [r, eq] : due[i + 1]) {
                std::int64_t s = 0;
                for (std::size_t j = 0; j <= i; ++j) s += r->coeffs[j] * x[j];
                if (eq ? s != t * r->rhs : s > t * r->rhs) {
                    ok = false;
                    break;
                }
            }
            if (ok) rec(i + 1);
        }
        x[i] = 0;
    };
    rec(0);
    return count;
}

}  // namespace chainorder

#endif  // CHAINORDER_POLYTOPE_HPP
