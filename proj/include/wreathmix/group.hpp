#pragma once

#include "wreathmix/exact.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace wreathmix {

// Parameters of the colored permutation group G_{n,p} = C_p wr S_n.
struct GroupParams
{
    int n = 1;  // cards
    int p = 1;  // colors

    GroupParams() = default;
    GroupParams(int n_, int p_);

    BigInt order() const;  // p^n * n!
    BigRational uniform_mass() const { return BigRational(1, order()); }

    // |A_u| = C(n,u) p^(n-u) (n-u)!
    BigInt nested_set_size(int u) const;

    // |supp(B_m)| = (n)_m p^m
    BigInt increment_support_size(int m) const;

    friend bool operator==(GroupParams const&, GroupParams const&) = default;
};

// Element (s, sigma) in the positional word model: perm[t] is the label
// (1-based) in position t, colors[t] is the color of the card in position t.
struct ColoredPermutation
{
    std::vector<int> colors;
    std::vector<int> perm;

    int size() const { return static_cast<int>(perm.size()); }

    // sigma^{-1}: position (0-based) of each label, indexed by label - 1.
    std::vector<int> positions() const;

    friend bool operator==(ColoredPermutation const&, ColoredPermutation const&)
        = default;
};

// Throws std::invalid_argument unless x is an element of G_{n,p}.
void validate(ColoredPermutation const& x, GroupParams const& g);

ColoredPermutation identity(GroupParams const& g);

// (t,tau)(s,sigma) = (sigma t + s, tau sigma), (sigma t)_i = t_{sigma(i)}.
ColoredPermutation
multiply(ColoredPermutation const& x, ColoredPermutation const& y, GroupParams const& g);

ColoredPermutation inverse(ColoredPermutation const& x, GroupParams const& g);

// x in A_u: labels n-u+1..n appear in increasing position order with color 0.
bool in_nested_set(ColoredPermutation const& x, int u, GroupParams const& g);

// L_p(x) = max{u : x in A_u}.
int level(ColoredPermutation const& x, GroupParams const& g);

// Uniform draw from supp(B_m): labels 1..m get uniformly chosen distinct
// positions (in uniform order) and uniform colors; labels m+1..n fill the
// remaining positions in increasing order with color 0.
ColoredPermutation
sample_increment(int m, GroupParams const& g, std::mt19937_64& rng);

//---------------------------------------------------------------------------//
// Enumeration

inline constexpr std::uint64_t default_enumeration_cap = 10'000'000;

// Cap from WREATHMIX_BUDGET when set, otherwise the default.
std::uint64_t enumeration_cap();

class BudgetExceeded : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Bijection between G_{n,p} and [0, |G|). Order is lexicographic in the
// permutation, then in the color vector.
class ElementIndexer
{
  public:
    explicit ElementIndexer(GroupParams const& g,
                            std::uint64_t cap = enumeration_cap());

    GroupParams const& group() const { return group_; }
    std::uint64_t size() const { return size_; }

    std::uint64_t index_of(ColoredPermutation const& x) const;
    ColoredPermutation element(std::uint64_t index) const;

  private:
    GroupParams group_;
    std::uint64_t size_ = 0;
    std::uint64_t color_count_ = 1;  // p^n
    std::vector<std::uint64_t> factorials_;
};

// Single-pass generator over G_{n,p} in indexer order.
class Enumeration
{
  public:
    explicit Enumeration(GroupParams const& g,
                         std::uint64_t cap = enumeration_cap());

    class iterator
    {
      public:
        using value_type = ColoredPermutation;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        ColoredPermutation const& operator*() const { return current_; }
        ColoredPermutation const* operator->() const { return &current_; }
        iterator& operator++();
        bool operator==(iterator const& other) const
        {
            return done_ == other.done_;
        }

      private:
        friend class Enumeration;
        iterator(GroupParams const& g, bool done);

        GroupParams group_;
        ColoredPermutation current_;
        bool done_ = true;
    };

    iterator begin() const { return iterator(group_, false); }
    iterator end() const { return iterator(group_, true); }
    std::uint64_t size() const { return size_; }

  private:
    GroupParams group_;
    std::uint64_t size_ = 0;
};

inline Enumeration enumerate(GroupParams const& g,
                             std::uint64_t cap = enumeration_cap())
{
    return Enumeration(g, cap);
}

}  // namespace wreathmix
