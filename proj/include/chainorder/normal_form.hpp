#ifndef CHAINORDER_NORMAL_FORM_HPP
#define CHAINORDER_NORMAL_FORM_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "polytope.hpp"
#include "poset.hpp"

namespace chainorder {

/// Combinatorial description of a face of the chain-order polytope of P_tau at split k.
///
/// Ground elements are P_tau indices (rank-major) and the top 1^ is encoded as n = |tau|.
/// zero_sets[i-1] and eq_sets[i-1] are bit masks over Y^i (bit t-1 for y^i_t).
/// eq_sets has k+1 entries; when k = l the last one is the top (bit 0).
/// chain_tight records that some chain inequality is tight, which the masks alone
/// cannot express once every rank of the chain part is entirely zero.
struct FaceNormalForm {
    Partition pi;
    std::vector<std::uint64_t> zero_sets;
    std::vector<std::uint64_t> eq_sets;
    bool chain_tight = false;

    auto operator<=>(const FaceNormalForm&) const = default;
};

struct NormalFormVerdict {
    bool valid = true;
    std::string message;
    explicit operator bool() const noexcept { return valid; }
};

namespace detail {

inline std::uint64_t low_bits(int m) { return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1; }

// Shape information for one (tau, k).
struct NfShape {
    Tau tau;
    int k;
    int ell;
    int n;
    RankLayout layout;

    NfShape(const Tau& t, int kk) : tau(t), k(kk), ell(t.length()), n(t.total()), layout(t) {
        tau.validate();
        if (k < 0 || k > ell)
            throw std::invalid_argument("k = " + std::to_string(k) + " outside [0, " + std::to_string(ell) + "]");
        for (int p : tau.parts)
            if (p > 63) throw std::invalid_argument("rank sizes above 63 are not supported by the normal form");
    }

    int top() const noexcept { return n; }
    int rank(int x) const { return x == n ? ell + 1 : layout.rank_of(x); }
    int size(int r) const { return r == ell + 1 ? 1 : tau[r]; }
    std::uint64_t full(int r) const { return low_bits(size(r)); }
    int element(int r, int bit) const { return r == ell + 1 ? n : layout.index(r, bit + 1); }
    int bit_of(int x) const { return x == n ? 0 : layout.position_in_rank(x) - 1; }
    bool in_order_part(int x) const { return x == n || (x >= 0 && x < n && layout.rank_of(x) > k); }

    std::vector<int> elements(int r, std::uint64_t mask) const {
        std::vector<int> out;
        for (int b = 0; b < size(r); ++b)
            if ((mask >> b) & 1U) out.push_back(element(r, b));
        return out;
    }
    std::string id(int x) const { return x == n ? std::string(top_id) : ranked_element_id(rank(x), bit_of(x) + 1); }
};

inline int block_height(const NfShape& s, const std::vector<int>& block) {
    int lo = s.ell + 2, hi = -1;
    for (int x : block) {
        lo = std::min(lo, s.rank(x));
        hi = std::max(hi, s.rank(x));
    }
    return hi - lo;
}

// Singleton mask of pi inside Y^{k+1}, and the non-singleton block meeting Y^{k+1} (if any).
struct FirstRank {
    std::uint64_t singletons = 0;
    const std::vector<int>* block = nullptr;
};

inline FirstRank first_rank_info(const NfShape& s, const Partition& pi) {
    FirstRank fr;
    const int r = s.k + 1;
    for (const auto& b : pi.blocks)
        for (int x : b)
            if (s.rank(x) == r) {
                if (b.size() == 1) fr.singletons |= std::uint64_t{1} << s.bit_of(x);
                else fr.block = &b;
            }
    return fr;
}

// The chain endpoint is pinned to 1 when every element of Y^{k+1} shares the top's block (or k = l).
inline bool endpoint_forced(const NfShape& s, const Partition& pi) {
    if (s.k == s.ell) return true;
    auto fr = first_rank_info(s, pi);
    if (fr.singletons != 0 || fr.block == nullptr) return false;
    return std::find(fr.block->begin(), fr.block->end(), s.top()) != fr.block->end();
}

inline bool chain_part_all_zero(const NfShape& s, const FaceNormalForm& nf) {
    for (int i = 1; i <= s.k; ++i)
        if (nf.zero_sets[static_cast<std::size_t>(i - 1)] != s.full(i)) return false;
    return true;
}

}  // namespace detail

/// Checks every condition of a normal form; the message names the first violated one.
inline NormalFormVerdict validate_normal_form(const FaceNormalForm& nf, const Tau& tau, int k) {
    detail::NfShape s(tau, k);
    auto fail = [](std::string m) { return NormalFormVerdict{false, std::move(m)}; };
    if (nf.zero_sets.size() != static_cast<std::size_t>(k)) return fail("expected " + std::to_string(k) + " zero sets");
    if (nf.eq_sets.size() != static_cast<std::size_t>(k + 1)) return fail("expected " + std::to_string(k + 1) + " eq sets");
    for (int i = 1; i <= k + 1; ++i) {
        const int r = i;
        if (nf.eq_sets[static_cast<std::size_t>(i - 1)] & ~s.full(r)) return fail("eq set " + std::to_string(i) + " out of range");
        if (i <= k && (nf.zero_sets[static_cast<std::size_t>(i - 1)] & ~s.full(r)))
            return fail("zero set " + std::to_string(i) + " out of range");
    }

    // pi must partition O and the top.
    std::vector<int> ground;
    for (int x = 0; x <= s.n; ++x)
        if (s.in_order_part(x)) ground.push_back(x);
    std::vector<int> seen;
    for (const auto& b : nf.pi.blocks) {
        if (b.empty()) return fail("pi has an empty block");
        for (int x : b) {
            if (!s.in_order_part(x)) return fail("pi contains an element outside the order part");
            seen.push_back(x);
        }
    }
    std::sort(seen.begin(), seen.end());
    if (seen != ground) return fail("pi is not a partition of the order part and the top");

    if (k < s.ell) {
        // Face partition of the extended order part, with the bottom as a singleton.
        Tau rest{std::vector<int>(tau.parts.begin() + k, tau.parts.end())};
        auto ep = extend_poset(make_maximal_ranked(rest));
        const int shift = s.layout.offset[static_cast<std::size_t>(k)];
        Partition local;
        for (const auto& b : nf.pi.blocks) {
            std::vector<int> lb;
            for (int x : b) lb.push_back(x == s.n ? ep.top : x - shift);
            local.blocks.push_back(std::move(lb));
        }
        local.blocks.push_back({ep.bottom});
        auto v = validate_face_partition(ep, local);
        if (!v.valid) return fail("pi is not a face partition: " + v.message);
    }

    for (int i = 1; i <= k; ++i)
        if (nf.eq_sets[static_cast<std::size_t>(i - 1)] & nf.zero_sets[static_cast<std::size_t>(i - 1)])
            return fail("eq set " + std::to_string(i) + " meets the zero set");

    if (!nf.chain_tight) {
        for (auto e : nf.eq_sets)
            if (e) return fail("eq sets are nonempty but no chain is tight");
        return {};
    }
    for (int i = 1; i <= k; ++i) {
        auto free = s.full(i) & ~nf.zero_sets[static_cast<std::size_t>(i - 1)];
        if (free && !nf.eq_sets[static_cast<std::size_t>(i - 1)])
            return fail("rank " + std::to_string(i) + " has nonzero elements but no eq set");
    }
    const auto last = nf.eq_sets[static_cast<std::size_t>(k)];
    if (k == s.ell) {
        if (last != 1) return fail("a tight chain must end at the top");
    } else {
        auto fr = detail::first_rank_info(s, nf.pi);
        if (last & ~fr.singletons) return fail("eq set " + std::to_string(k + 1) + " contains a merged element");
        if (fr.singletons && !last) return fail("eq set " + std::to_string(k + 1) + " is empty");
    }
    if (detail::chain_part_all_zero(s, nf) && detail::endpoint_forced(s, nf.pi))
        return fail("tight chain of zeros ending at 1 gives the empty face");
    return {};
}

/// Codimension of the face: merged-block reduction, zero count and tight-chain contribution.
inline int codimension(const FaceNormalForm& nf, const Tau& tau, int k) {
    if (auto v = validate_normal_form(nf, tau, k); !v) throw std::invalid_argument("codimension: " + v.message);
    int c = 0;
    for (const auto& b : nf.pi.blocks) c += static_cast<int>(b.size()) - 1;
    for (auto z : nf.zero_sets) c += std::popcount(z);
    if (nf.chain_tight) {
        c += 1;
        for (auto e : nf.eq_sets)
            if (e) c += std::popcount(e) - 1;
    }
    return c;
}

/// Calls f(pi) for every face partition of the order part of P_tau at split k, together with
/// the top. Blocks are convex rank intervals: a nonempty bottom subset, full middle ranks
/// and a nonempty top subset; consecutive blocks may share only an end rank.
template <class F>
void for_each_face_partition(const Tau& tau, int k, F&& f) {
    detail::NfShape s(tau, k);
    Partition cur;
    std::vector<int> open;

    std::function<void(int)> rec;
    auto append = [](std::vector<int>& v, const std::vector<int>& w) { v.insert(v.end(), w.begin(), w.end()); };

    // Places rest as singletons, or starts a new block with a nonempty part of it.
    auto place_rest = [&](int r, std::uint64_t rest) {
        const std::size_t mark = cur.blocks.size();
        for (int x : s.elements(r, rest)) cur.blocks.push_back({x});
        rec(r + 1);
        cur.blocks.resize(mark);
        if (r > s.ell) return;
        for (std::uint64_t sub = rest; sub; sub = (sub - 1) & rest) {
            open = s.elements(r, sub);
            for (int x : s.elements(r, rest & ~sub)) cur.blocks.push_back({x});
            rec(r + 1);
            cur.blocks.resize(mark);
            open.clear();
        }
    };

    rec = [&](int r) {
        if (r == s.ell + 2) {
            if (open.empty()) f(cur.canonical());
            return;
        }
        const std::uint64_t full = s.full(r);
        if (open.empty()) {
            place_rest(r, full);
            return;
        }
        const std::vector<int> saved = open;
        if (r <= s.ell) {
            append(open, s.elements(r, full));
            rec(r + 1);
            open = saved;
        }
        for (std::uint64_t top = full; top; top = (top - 1) & full) {
            std::vector<int> block = saved;
            append(block, s.elements(r, top));
            cur.blocks.push_back(std::move(block));
            open.clear();
            place_rest(r, full & ~top);
            cur.blocks.pop_back();
            open = saved;
        }
    };
    rec(s.k + 1);
}

/// Every valid normal form for (tau, k), in canonical order.
inline std::vector<FaceNormalForm> enumerate_normal_forms(const Tau& tau, int k, std::uint64_t budget = 20'000'000) {
    detail::NfShape s(tau, k);
    std::vector<FaceNormalForm> out;
    auto push = [&](FaceNormalForm nf) {
        if (out.size() >= budget)
            throw BudgetExceeded("enumerate_normal_forms: more than " + std::to_string(budget) + " normal forms");
        out.push_back(std::move(nf));
    };

    for_each_face_partition(tau, k, [&](const Partition& pi) {
        const bool forced = detail::endpoint_forced(s, pi);
        const std::uint64_t ends = k == s.ell ? 1 : detail::first_rank_info(s, pi).singletons;
        FaceNormalForm nf;
        nf.pi = pi;
        nf.zero_sets.assign(static_cast<std::size_t>(k), 0);
        nf.eq_sets.assign(static_cast<std::size_t>(k + 1), 0);

        // Odometer over eq choices: each rank takes a nonempty subset of its free part (or nothing).
        std::function<void(int)> eqs = [&](int i) {
            if (i == k + 1) {
                if (ends == 0 || k == s.ell) {
                    nf.eq_sets[static_cast<std::size_t>(k)] = k == s.ell ? 1 : 0;
                    push(nf);
                } else {
                    for (std::uint64_t e = ends; e; e = (e - 1) & ends) {
                        nf.eq_sets[static_cast<std::size_t>(k)] = e;
                        push(nf);
                    }
                }
                nf.eq_sets[static_cast<std::size_t>(k)] = 0;
                return;
            }
            const auto free = s.full(i) & ~nf.zero_sets[static_cast<std::size_t>(i - 1)];
            if (!free) {
                eqs(i + 1);
                return;
            }
            for (std::uint64_t e = free; e; e = (e - 1) & free) {
                nf.eq_sets[static_cast<std::size_t>(i - 1)] = e;
                eqs(i + 1);
            }
            nf.eq_sets[static_cast<std::size_t>(i - 1)] = 0;
        };

        std::function<void(int)> zeros = [&](int i) {
            if (i == k + 1) {
                nf.chain_tight = false;
                push(nf);
                if (!(forced && detail::chain_part_all_zero(s, nf))) {
                    nf.chain_tight = true;
                    eqs(1);
                    nf.chain_tight = false;
                }
                return;
            }
            const auto full = s.full(i);
            for (std::uint64_t z = 0;; z = (z - full) & full) {
                nf.zero_sets[static_cast<std::size_t>(i - 1)] = z;
                zeros(i + 1);
                if (z == full) break;
            }
            nf.zero_sets[static_cast<std::size_t>(i - 1)] = 0;
        };
        zeros(1);
    });
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

using Poly = std::vector<std::uint64_t>;

inline std::uint64_t checked_add_u(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("face count overflows 64 bits");
    return r;
}
inline std::uint64_t checked_mul_u(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("face count overflows 64 bits");
    return r;
}

inline void poly_add(Poly& a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = checked_add_u(a[i], b[i]);
}
inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = checked_add_u(c[i + j], checked_mul_u(a[i], b[j]));
    return c;
}
inline Poly monomial(std::uint64_t c, std::size_t deg) {
    Poly p(deg + 1, 0);
    p[deg] = c;
    return p;
}
inline std::uint64_t binom(int m, int r) {
    if (r < 0 || r > m) return 0;
    std::uint64_t acc = 1;
    for (int i = 1; i <= r; ++i) acc = acc * static_cast<std::uint64_t>(m - r + i) / static_cast<std::uint64_t>(i);
    return acc;
}
// sum_{e=1..m} C(m,e) x^{e-1}; 1 when m = 0.
inline Poly nonempty_choice(int m) {
    if (m == 0) return {1};
    Poly p(static_cast<std::size_t>(m), 0);
    for (int e = 1; e <= m; ++e) p[static_cast<std::size_t>(e - 1)] = binom(m, e);
    return p;
}

}  // namespace detail

/// f-vector from normal-form counting. A transfer matrix over the ranks of the order part
/// counts face partitions by merged size; the chain part contributes closed-form factors.
inline std::vector<std::uint64_t> f_vector_normal_form(const Tau& tau, int k) {
    using namespace detail;
    NfShape s(tau, k);

    // Groups keyed by (singletons in Y^{k+1}, endpoint forced) -> polynomial in merged size.
    std::map<std::pair<int, bool>, Poly> groups;
    if (k == s.ell) {
        groups[{0, true}] = {1};
    } else {
        enum { none = 0, open_first = 1, open_other = 2 };
        const int m1 = tau[k + 1];
        for (int a = 0; a <= m1; ++a) {
            std::vector<Poly> dp(3);
            if (a == 0) dp[none] = {1};
            else dp[open_first] = monomial(binom(m1, a), static_cast<std::size_t>(a - 1));
            for (int r = k + 2; r <= s.ell; ++r) {
                const int m = tau[r];
                std::vector<Poly> nx(3);
                // Nothing open: all singletons, or start a block.
                poly_add(nx[none], dp[none]);
                for (int b = 1; b <= m; ++b)
                    poly_add(nx[open_other], poly_mul(dp[none], monomial(binom(m, b), static_cast<std::size_t>(b - 1))));
                for (int st : {open_first, open_other}) {
                    if (dp[st].empty()) continue;
                    poly_add(nx[st], poly_mul(dp[st], monomial(1, static_cast<std::size_t>(m))));
                    for (int t = 1; t <= m; ++t) {
                        Poly closed = poly_mul(dp[st], monomial(binom(m, t), static_cast<std::size_t>(t)));
                        poly_add(nx[none], closed);
                        for (int b = 1; b <= m - t; ++b)
                            poly_add(nx[open_other], poly_mul(closed, monomial(binom(m - t, b), static_cast<std::size_t>(b - 1))));
                    }
                }
                dp = std::move(nx);
            }
            // The top closes whatever is open.
            const int sing = m1 - a;
            poly_add(groups[{sing, false}], dp[none]);
            poly_add(groups[{sing, false}], poly_mul(dp[open_other], {0, 1}));
            if (!dp[open_first].empty()) poly_add(groups[{sing, sing == 0}], poly_mul(dp[open_first], {0, 1}));
        }
    }

    Poly no_chain{1}, chain{1};
    std::size_t c_size = 0;
    for (int i = 1; i <= k; ++i) {
        const int m = tau[i];
        Poly binom_row(static_cast<std::size_t>(m + 1), 0), rank_chain;
        for (int z = 0; z <= m; ++z) {
            binom_row[static_cast<std::size_t>(z)] = binom(m, z);
            poly_add(rank_chain, poly_mul(monomial(binom(m, z), static_cast<std::size_t>(z)), nonempty_choice(m - z)));
        }
        no_chain = poly_mul(no_chain, binom_row);
        chain = poly_mul(chain, rank_chain);
        c_size += static_cast<std::size_t>(m);
    }

    Poly total;
    for (const auto& [key, merged] : groups) {
        const auto [sing, forced] = key;
        Poly part = no_chain;
        Poly with_chain = poly_mul(poly_mul(chain, nonempty_choice(sing)), {0, 1});
        if (forced) {
            // Remove the chain made of zeros ending at 1.
            if (with_chain.size() <= c_size + 1 || with_chain[c_size + 1] == 0)
                throw std::logic_error("f_vector_normal_form: missing forced-empty term");
            --with_chain[c_size + 1];
        }
        poly_add(part, with_chain);
        poly_add(total, poly_mul(merged, part));
    }

    const auto n = static_cast<std::size_t>(s.n);
    if (total.size() > n + 1) {
        for (std::size_t c = n + 1; c < total.size(); ++c)
            if (total[c] != 0) throw std::logic_error("f_vector_normal_form: codimension above the dimension");
    }
    total.resize(n + 1, 0);
    std::vector<std::uint64_t> f(n, 0);
    for (std::size_t i = 0; i < n; ++i) f[i] = total[n - i];
    return f;
}

/// Per-codimension counts of explicit normal forms (index = codimension).
inline std::vector<std::uint64_t> codim_counts(const std::vector<FaceNormalForm>& forms, const Tau& tau, int k) {
    std::vector<std::uint64_t> c(static_cast<std::size_t>(tau.total() + 1), 0);
    for (const auto& nf : forms) ++c.at(static_cast<std::size_t>(codimension(nf, tau, k)));
    return c;
}

/// f-vector from explicitly enumerated normal forms.
inline std::vector<std::uint64_t> f_vector_from_forms(const std::vector<FaceNormalForm>& forms, const Tau& tau, int k) {
    auto c = codim_counts(forms, tau, k);
    const auto n = static_cast<std::size_t>(tau.total());
    std::vector<std::uint64_t> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = c[n - i];
    return f;
}

namespace detail {

inline Partition with_singletons(const NfShape& s, std::vector<std::vector<int>> blocks) {
    std::vector<char> covered(static_cast<std::size_t>(s.n + 1), 0);
    for (const auto& b : blocks)
        for (int x : b) covered[static_cast<std::size_t>(x)] = 1;
    for (int x = 0; x <= s.n; ++x)
        if (s.in_order_part(x) && !covered[static_cast<std::size_t>(x)]) blocks.push_back({x});
    Partition p{std::move(blocks)};
    return p.canonicalize();
}

// Minimal-position element of Y^r that is a singleton in pi; the top when r = l + 1.
inline std::optional<int> first_singleton(const NfShape& s, const Partition& pi, int r) {
    std::optional<int> best;
    for (const auto& b : pi.blocks)
        if (b.size() == 1 && s.rank(b[0]) == r && (!best || s.bit_of(b[0]) < s.bit_of(*best))) best = b[0];
    return best;
}

inline std::uint64_t mask_of(const NfShape& s, const std::vector<int>& xs, int r) {
    std::uint64_t m = 0;
    for (int x : xs)
        if (s.rank(x) == r) m |= std::uint64_t{1} << s.bit_of(x);
    return m;
}

inline std::uint64_t lowest_bit(std::uint64_t m) { return m & (~m + 1); }

}  // namespace detail

/// The injection from faces at split k to faces at split k+1 (codimension at least 2).
inline FaceNormalForm psi_map(const FaceNormalForm& nf, const Tau& tau, int k) {
    using namespace detail;
    NfShape s(tau, k);
    if (k >= s.ell) throw std::invalid_argument("psi_map: k must be below the length of tau");
    const int c = codimension(nf, tau, k);
    if (c < 2) throw std::invalid_argument("psi_map: codimension " + std::to_string(c) + " is below 2");
    NfShape s2(tau, k + 1);
    const int r1 = k + 1, r2 = k + 2;

    // Cut off rank k+1; blocks living in ranks k+1 and k+2 only dissolve.
    std::vector<std::vector<int>> kept;
    for (const auto& b : nf.pi.blocks) {
        bool tall = false;
        for (int x : b)
            if (s.rank(x) > r2) tall = true;
        if (!tall) continue;
        std::vector<int> nb;
        for (int x : b)
            if (s.rank(x) != r1) nb.push_back(x);
        kept.push_back(std::move(nb));
    }
    FaceNormalForm img;
    img.pi = with_singletons(s2, std::move(kept));
    img.zero_sets = nf.zero_sets;
    img.zero_sets.push_back(0);
    img.eq_sets = nf.eq_sets;
    img.eq_sets.push_back(0);
    img.chain_tight = nf.chain_tight;
    if (!nf.chain_tight) img.eq_sets.assign(static_cast<std::size_t>(k + 2), 0);

    auto fr = first_rank_info(s, nf.pi);
    const std::uint64_t a_mask = s.full(r1) & ~fr.singletons;
    const auto yr = first_singleton(s2, img.pi, r2);
    const std::uint64_t yr_mask = yr ? std::uint64_t{1} << s.bit_of(*yr) : 0;
    auto& zero_new = img.zero_sets.back();
    auto& eq_new = img.eq_sets.back();

    if (a_mask == 0) {
        if (nf.chain_tight) eq_new = yr_mask;
        return img;
    }
    const auto& kblock = *fr.block;
    const int height = block_height(s, kblock);
    const std::uint64_t b_mask = mask_of(s, kblock, r2);
    if (nf.chain_tight) {
        zero_new = a_mask;
        if (height == 1) eq_new = b_mask;
        return img;
    }
    if (height >= 2 || b_mask == yr_mask) {
        zero_new = a_mask;
        return img;
    }
    // Height one and B is not the first free singleton: trade the block for a tight chain.
    img.chain_tight = true;
    for (int i = 1; i <= k; ++i)
        img.eq_sets[static_cast<std::size_t>(i - 1)] = lowest_bit(s.full(i) & ~nf.zero_sets[static_cast<std::size_t>(i - 1)]);
    img.eq_sets[static_cast<std::size_t>(k)] = a_mask;
    eq_new = b_mask;
    return img;
}

/// Left inverse of psi_map on its image.
inline FaceNormalForm psi_inverse(const FaceNormalForm& img, const Tau& tau, int k) {
    using namespace detail;
    NfShape s(tau, k);
    if (k >= s.ell) throw std::invalid_argument("psi_inverse: k must be below the length of tau");
    if (auto v = validate_normal_form(img, tau, k + 1); !v) throw std::invalid_argument("psi_inverse: " + v.message);
    NfShape s2(tau, k + 1);
    const int r1 = k + 1, r2 = k + 2;

    FaceNormalForm nf;
    nf.zero_sets.assign(img.zero_sets.begin(), img.zero_sets.begin() + k);
    nf.eq_sets.assign(static_cast<std::size_t>(k + 1), 0);
    const std::uint64_t z = img.zero_sets.back();
    const std::uint64_t eq_last = img.eq_sets.back();
    const auto yr = first_singleton(s2, img.pi, r2);
    const std::uint64_t yr_mask = yr ? std::uint64_t{1} << s.bit_of(*yr) : 0;

    auto copy_chain = [&] {
        nf.chain_tight = img.chain_tight;
        if (img.chain_tight) std::copy(img.eq_sets.begin(), img.eq_sets.begin() + k + 1, nf.eq_sets.begin());
    };
    auto rebuild = [&](const std::vector<int>* grow, std::vector<int> extra) {
        std::vector<std::vector<int>> blocks;
        for (const auto& b : img.pi.blocks) {
            if (b.size() == 1) continue;
            if (grow && &b == grow) continue;
            blocks.push_back(b);
        }
        if (!extra.empty()) {
            if (grow) extra.insert(extra.end(), grow->begin(), grow->end());
            blocks.push_back(std::move(extra));
        }
        nf.pi = with_singletons(s, std::move(blocks));
    };

    if (z == 0) {
        if (img.chain_tight && eq_last && eq_last != yr_mask) {
            auto kb = s.elements(r1, img.eq_sets[static_cast<std::size_t>(k)]);
            auto top = s.elements(r2, eq_last);
            kb.insert(kb.end(), top.begin(), top.end());
            nf.chain_tight = false;
            rebuild(nullptr, std::move(kb));
        } else {
            copy_chain();
            rebuild(nullptr, {});
        }
        return nf;
    }

    auto zs = s.elements(r1, z);
    copy_chain();
    const std::vector<int>* spanning = nullptr;
    if (r2 <= s.ell)
        for (const auto& b : img.pi.blocks)
            if (b.size() > 1 && mask_of(s, b, r2) == s.full(r2)) spanning = &b;
    if (spanning) {
        rebuild(spanning, std::move(zs));
    } else if (img.chain_tight) {
        auto top = s.elements(r2, eq_last);
        zs.insert(zs.end(), top.begin(), top.end());
        rebuild(nullptr, std::move(zs));
    } else {
        if (!yr) throw std::invalid_argument("psi_inverse: no free singleton to attach the zero block to");
        zs.push_back(*yr);
        rebuild(nullptr, std::move(zs));
    }
    return nf;
}

/// Vertex set (as indices into vrep) of the face selected by the normal form, cut out by its
/// tight inequalities of chain_order_hrep(tau, k).
inline DynamicBitset vertices_of(const FaceNormalForm& nf, const Tau& tau, int k, const VRep& vrep) {
    detail::NfShape s(tau, k);
    if (auto v = validate_normal_form(nf, tau, k); !v) throw std::invalid_argument("vertices_of: " + v.message);
    const auto n = static_cast<std::size_t>(s.n);
    std::vector<LinearRow> rows;

    for (int i = 1; i <= k; ++i)
        for (int x : s.elements(i, nf.zero_sets[static_cast<std::size_t>(i - 1)]))
            rows.push_back(detail::unit_row(n, {{x, -1}}, 0));
    for (const auto& b : nf.pi.blocks) {
        if (b.size() == 1) continue;
        for (int x : b)
            for (int y : b) {
                if (x == s.n || y == s.n || s.rank(y) != s.rank(x) + 1) continue;
                rows.push_back(detail::unit_row(n, {{x, 1}, {y, -1}}, 0));
            }
        if (std::find(b.begin(), b.end(), s.n) != b.end())
            for (int x : b)
                if (x != s.n && s.rank(x) == s.ell) rows.push_back(detail::unit_row(n, {{x, 1}}, 1));
    }
    if (nf.chain_tight) {
        // Tight chain tuples: eq choices per rank, any element on fully zero ranks.
        std::vector<std::vector<int>> choices;
        for (int i = 1; i <= k; ++i) {
            auto e = nf.eq_sets[static_cast<std::size_t>(i - 1)];
            choices.push_back(s.elements(i, e ? e : s.full(i)));
        }
        if (k < s.ell) {
            auto e = nf.eq_sets[static_cast<std::size_t>(k)];
            choices.push_back(s.elements(k + 1, e ? e : s.full(k + 1)));
        }
        std::vector<std::size_t> at(choices.size(), 0);
        while (true) {
            LinearRow r{std::vector<std::int64_t>(n, 0), k == s.ell ? 1 : 0};
            for (std::size_t i = 0; i < choices.size(); ++i)
                r.coeffs[static_cast<std::size_t>(choices[i][at[i]])] = (k < s.ell && i + 1 == choices.size()) ? -1 : 1;
            rows.push_back(std::move(r));
            std::size_t i = choices.size();
            while (i > 0 && ++at[i - 1] == choices[i - 1].size()) at[--i] = 0;
            if (i == 0) break;
        }
    }

    DynamicBitset out(vrep.size());
    for (std::size_t v = 0; v < vrep.size(); ++v) {
        bool tight = true;
        for (const auto& r : rows)
            if (r.eval(vrep.vertices[v]) != r.rhs) {
                tight = false;
                break;
            }
        if (tight) out.set(v);
    }
    return out;
}

/// Readable rendering with element ids, e.g. "pi={y4_2,y5_1} F0[2]={y2_2} Feq[1]={y1_2} chain".
inline std::string to_string(const FaceNormalForm& nf, const Tau& tau, int k) {
    detail::NfShape s(tau, k);
    auto set_str = [&](const std::vector<int>& xs) {
        std::string out = "{";
        for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + s.id(xs[i]);
        return out + "}";
    };
    std::string out = "pi=";
    bool any = false;
    for (const auto& b : nf.pi.blocks)
        if (b.size() > 1) {
            out += (any ? "|" : "") + set_str(b);
            any = true;
        }
    if (!any) out += "trivial";
    for (int i = 1; i <= k; ++i)
        if (auto z = nf.zero_sets[static_cast<std::size_t>(i - 1)])
            out += " F0[" + std::to_string(i) + "]=" + set_str(s.elements(i, z));
    for (int i = 1; i <= k + 1; ++i)
        if (auto e = nf.eq_sets[static_cast<std::size_t>(i - 1)])
            out += " Feq[" + std::to_string(i) + "]=" + set_str(s.elements(i, e));
    if (nf.chain_tight) out += " chain";
    return out;
}

struct InjectionReport {
    Tau tau;
    int k = 0;
    std::vector<std::uint64_t> source_counts;  // faces at k, by codimension
    std::vector<std::uint64_t> image_counts;   // images of psi, by codimension
    std::vector<std::uint64_t> target_counts;  // faces at k+1, by codimension
    bool injective = true;
    bool codim_preserved = true;
    bool images_valid = true;
    bool inverse_ok = true;
    std::vector<std::string> failures;  // first few offending faces

    bool passed() const noexcept { return injective && codim_preserved && images_valid && inverse_ok; }
};

/// Applies psi to every face of codimension at least 2 and checks the injection exhaustively.
inline InjectionReport verify_injection(const Tau& tau, int k, std::uint64_t budget = 20'000'000) {
    detail::NfShape s(tau, k);
    if (k >= s.ell) throw std::invalid_argument("verify_injection: k must be below the length of tau");
    InjectionReport rep;
    rep.tau = tau;
    rep.k = k;
    const auto n = static_cast<std::size_t>(s.n);
    rep.source_counts.assign(n + 1, 0);
    rep.image_counts.assign(n + 1, 0);
    rep.target_counts.assign(n + 1, 0);
    auto note = [&](const std::string& m) {
        if (rep.failures.size() < 20) rep.failures.push_back(m);
    };

    for (const auto& nf : enumerate_normal_forms(tau, k + 1, budget))
        ++rep.target_counts[static_cast<std::size_t>(codimension(nf, tau, k + 1))];
    std::set<FaceNormalForm> images;
    for (const auto& nf : enumerate_normal_forms(tau, k, budget)) {
        const int c = codimension(nf, tau, k);
        ++rep.source_counts[static_cast<std::size_t>(c)];
        if (c < 2) continue;
        auto img = psi_map(nf, tau, k);
        const std::string where = to_string(nf, tau, k);
        if (auto v = validate_normal_form(img, tau, k + 1); !v) {
            rep.images_valid = false;
            note("invalid image of " + where + ": " + v.message);
            continue;
        }
        const int c2 = codimension(img, tau, k + 1);
        ++rep.image_counts[static_cast<std::size_t>(c2)];
        if (c2 != c) {
            rep.codim_preserved = false;
            note("codimension " + std::to_string(c) + " -> " + std::to_string(c2) + " at " + where);
        }
        if (!images.insert(img).second) {
            rep.injective = false;
            note("repeated image " + to_string(img, tau, k + 1) + " from " + where);
        }
        try {
            if (psi_inverse(img, tau, k) != nf) {
                rep.inverse_ok = false;
                note("inverse does not recover " + where);
            }
        } catch (const std::invalid_argument& e) {
            rep.inverse_ok = false;
            note("inverse fails at " + where + ": " + e.what());
        }
    }
    return rep;
}

struct MonotoneReport {
    Tau tau;
    std::vector<std::vector<std::uint64_t>> f;  // f[k] for k = 0..l
    bool monotone = true;
    std::vector<std::string> failures;
};

/// f-vectors for every split and componentwise monotonicity in k.
inline MonotoneReport verify_monotone(const Tau& tau) {
    MonotoneReport rep;
    rep.tau = tau;
    for (int k = 0; k <= tau.length(); ++k) rep.f.push_back(f_vector_normal_form(tau, k));
    for (std::size_t k = 0; k + 1 < rep.f.size(); ++k)
        for (std::size_t i = 0; i < rep.f[k].size(); ++i)
            if (rep.f[k][i] > rep.f[k + 1][i]) {
                rep.monotone = false;
                rep.failures.push_back("f_" + std::to_string(i) + " drops from k=" + std::to_string(k) + " (" +
                                       std::to_string(rep.f[k][i]) + ") to k=" + std::to_string(k + 1) + " (" +
                                       std::to_string(rep.f[k + 1][i]) + ")");
            }
    return rep;
}

}  // namespace chainorder

#endif  // CHAINORDER_NORMAL_FORM_HPP
