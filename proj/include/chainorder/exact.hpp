#ifndef CHAINORDER_EXACT_HPP
#define CHAINORDER_EXACT_HPP

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace chainorder {

using BigInt = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in elimination");
    return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in elimination");
    return r;
}
inline BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt checked_sub(const BigInt& a, const BigInt& b) { return a - b; }

inline std::int64_t abs_gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
inline BigInt abs_gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

template <class Int>
void normalize_row(std::vector<Int>& row) {
    Int g = 0;
    for (const auto& v : row) g = abs_gcd(g, v);
    if (g > 1)
        for (auto& v : row) v /= g;
}

// Integer row echelon form; rows are divided by their content after each step.
template <class Int>
std::size_t integer_rank_impl(std::vector<std::vector<Int>> m) {
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[rank], m[piv]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            Int a = m[rank][c], b = m[r][c];
            Int g = abs_gcd(a, b);
            Int fa = a / g, fb = b / g;
            for (std::size_t j = c; j < cols; ++j) m[r][j] = checked_sub(checked_mul(fa, m[r][j]), checked_mul(fb, m[rank][j]));
            normalize_row(m[r]);
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

/// Exact rank of an integer matrix.
inline std::size_t integer_rank(const IntMatrix& m) {
    try {
        return detail::integer_rank_impl(m);
    } catch (const std::overflow_error&) {
        std::vector<std::vector<BigInt>> big;
        for (const auto& row : m) big.emplace_back(row.begin(), row.end());
        return detail::integer_rank_impl(std::move(big));
    }
}

/// Exact rational point with a common positive denominator, reduced.
struct RationalPoint {
    std::vector<std::int64_t> num;
    std::int64_t den = 1;

    bool integral() const noexcept { return den == 1; }
    auto operator<=>(const RationalPoint&) const = default;
};

namespace detail {

// Cramer-style solution of a square system via Bareiss elimination on [A | b].
// Returns nullopt when A is singular.
template <class Int>
std::optional<std::pair<std::vector<Int>, Int>> bareiss_solve(std::vector<std::vector<Int>> m) {
    const std::size_t n = m.size();
    Int prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m[piv][k] == 0) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != k) {
            std::swap(m[piv], m[k]);
            for (auto& v : m[k]) v = -v;  // keep the determinant sign
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j <= n; ++j)
                m[i][j] = checked_sub(checked_mul(m[k][k], m[i][j]), checked_mul(m[i][k], m[k][j])) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    // Upper-triangular with det = m[n-1][n-1]; back-substitute x_i * det.
    Int det = m[n - 1][n - 1];
    std::vector<Int> x(n, 0);
    for (std::size_t ii = n; ii-- > 0;) {
        Int acc = checked_mul(m[ii][n], det);
        for (std::size_t j = ii + 1; j < n; ++j) acc = checked_sub(acc, checked_mul(m[ii][j], x[j]));
        if (acc % m[ii][ii] != 0) throw std::logic_error("Bareiss back-substitution is not integral");
        x[ii] = acc / m[ii][ii];
    }
    return std::make_pair(std::move(x), det);
}

template <class Int>
std::int64_t to_int64(const Int& v) {
    if constexpr (std::is_same_v<Int, std::int64_t>) {
        return v;
    } else {
        if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
            throw std::overflow_error("rational coordinate does not fit in int64");
        return static_cast<std::int64_t>(v);
    }
}

template <class Int>
RationalPoint reduce_point(const std::vector<Int>& x, Int det) {
    if (det < 0) {
        det = -det;
        std::vector<Int> y = x;
        for (auto& v : y) v = -v;
        return reduce_point(y, det);
    }
    Int g = det;
    for (const auto& v : x) g = abs_gcd(g, v);
    RationalPoint p;
    p.den = to_int64<Int>(det / g);
    for (const auto& v : x) p.num.push_back(to_int64<Int>(v / g));
    return p;
}

}  // namespace detail

/// Solves A x = b exactly for square A; nullopt when A is singular.
inline std::optional<RationalPoint> solve_exact(const IntMatrix& a, const std::vector<std::int64_t>& b) {
    IntMatrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    try {
        auto s = detail::bareiss_solve(aug);
        if (!s) return std::nullopt;
        return detail::reduce_point(s->first, s->second);
    } catch (const std::overflow_error&) {
        std::vector<std::vector<BigInt>> big;
        for (const auto& row : aug) big.emplace_back(row.begin(), row.end());
        auto s = detail::bareiss_solve(std::move(big));
        if (!s) return std::nullopt;
        return detail::reduce_point(s->first, s->second);
    }
}

/// Dimension of the affine span of the points (0 for a single point).
inline std::size_t affine_rank(const std::vector<std::vector<std::int64_t>>& points) {
    if (points.empty()) throw std::invalid_argument("affine_rank: empty point list");
    IntMatrix diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        std::vector<std::int64_t> d(points[i].size());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] = detail::checked_sub(points[i][j], points[0][j]);
        diffs.push_back(std::move(d));
    }
    return integer_rank(diffs);
}

}  // namespace chainorder

#endif  // CHAINORDER_EXACT_HPP
