#ifndef CHAINORDER_BITSET_HPP
#define CHAINORDER_BITSET_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace chainorder {

/// Runtime-sized bitset used for vertex sets, facet sets and reachability rows.
class DynamicBitset {
  public:
    DynamicBitset() = default;
    explicit DynamicBitset(std::size_t nbits, bool value = false)
        : nbits_(nbits), words_((nbits + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        trim();
    }

    std::size_t size() const noexcept { return nbits_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void set_all() {
        std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
        trim();
    }
    void reset_all() { std::fill(words_.begin(), words_.end(), 0); }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool any() const noexcept {
        return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
    }
    bool none() const noexcept { return !any(); }

    bool is_subset_of(const DynamicBitset& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    DynamicBitset& operator&=(const DynamicBitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    DynamicBitset& operator|=(const DynamicBitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    /// Set difference.
    DynamicBitset& operator-=(const DynamicBitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend DynamicBitset operator&(DynamicBitset a, const DynamicBitset& b) { return a &= b; }
    friend DynamicBitset operator|(DynamicBitset a, const DynamicBitset& b) { return a |= b; }
    friend DynamicBitset operator-(DynamicBitset a, const DynamicBitset& b) { return a -= b; }

    bool operator==(const DynamicBitset&) const = default;
    /// Orders by bit position: the set whose smallest differing element is present sorts first.
    std::strong_ordering operator<=>(const DynamicBitset& o) const {
        if (nbits_ != o.nbits_) return nbits_ <=> o.nbits_;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] == o.words_[i]) continue;
            auto diff = words_[i] ^ o.words_[i];
            auto low = diff & (~diff + 1);
            return (words_[i] & low) ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            auto w = words_[i];
            while (w) {
                auto b = static_cast<std::size_t>(std::countr_zero(w));
                f(i * 64 + b);
                w &= w - 1;
            }
        }
    }

    std::vector<int> indices() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(static_cast<int>(i)); });
        return out;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ nbits_;
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

  private:
    void trim() {
        if (nbits_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (nbits_ % 64)) - 1;
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct DynamicBitsetHash {
    std::size_t operator()(const DynamicBitset& b) const noexcept { return b.hash(); }
};

/// Fixed 128-bit vertex set for the clique enumerator.
class VertexSet128 {
  public:
    static constexpr int capacity = 128;

    constexpr bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1U; }
    constexpr void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    constexpr void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    constexpr bool empty() const { return (w_[0] | w_[1]) == 0; }
    constexpr int count() const { return std::popcount(w_[0]) + std::popcount(w_[1]); }

    static constexpr VertexSet128 first_n(int n) {
        VertexSet128 s;
        for (int i = 0; i < n; ++i) s.set(i);
        return s;
    }

    constexpr VertexSet128& operator&=(const VertexSet128& o) {
        w_[0] &= o.w_[0];
        w_[1] &= o.w_[1];
        return *this;
    }
    constexpr VertexSet128& operator|=(const VertexSet128& o) {
        w_[0] |= o.w_[0];
        w_[1] |= o.w_[1];
        return *this;
    }
    constexpr VertexSet128& operator-=(const VertexSet128& o) {
        w_[0] &= ~o.w_[0];
        w_[1] &= ~o.w_[1];
        return *this;
    }
    friend constexpr VertexSet128 operator&(VertexSet128 a, const VertexSet128& b) { return a &= b; }
    friend constexpr VertexSet128 operator|(VertexSet128 a, const VertexSet128& b) { return a |= b; }
    friend constexpr VertexSet128 operator-(VertexSet128 a, const VertexSet128& b) { return a -= b; }
    constexpr bool operator==(const VertexSet128&) const = default;

    template <class F>
    constexpr void for_each(F&& f) const {
        for (int i = 0; i < 2; ++i) {
            auto w = w_[i];
            while (w) {
                f(i * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
    }

    std::vector<int> indices() const {
        std::vector<int> out;
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

  private:
    std::array<std::uint64_t, 2> w_{0, 0};
};

}  // namespace chainorder

#endif  // CHAINORDER_BITSET_HPP
