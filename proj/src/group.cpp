#include "wreathmix/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

namespace wreathmix {

GroupParams::GroupParams(int n_, int p_) : n(n_), p(p_)
{
    if (n < 1 || p < 1)
        throw std::invalid_argument("GroupParams: need n >= 1 and p >= 1");
}

BigInt GroupParams::order() const
{
    return power(BigInt(p), n) * factorial(n);
}

BigInt GroupParams::nested_set_size(int u) const
{
    if (u < 0 || u > n)
        throw std::out_of_range("nested_set_size: u outside [0, n]");
    return binomial(n, u) * power(BigInt(p), n - u) * factorial(n - u);
}

BigInt GroupParams::increment_support_size(int m) const
{
    if (m < 0 || m > n)
        throw std::out_of_range("increment_support_size: m outside [0, n]");
    return falling_factorial(n, m) * power(BigInt(p), m);
}

std::vector<int> ColoredPermutation::positions() const
{
    std::vector<int> pos(perm.size());
    for (std::size_t t = 0; t < perm.size(); ++t)
        pos[perm[t] - 1] = static_cast<int>(t);
    return pos;
}

void validate(ColoredPermutation const& x, GroupParams const& g)
{
    if (x.size() != g.n || static_cast<int>(x.colors.size()) != g.n)
        throw std::invalid_argument("colored permutation has wrong length");
    std::vector<char> seen(g.n, 0);
    for (int t = 0; t < g.n; ++t)
    {
        int label = x.perm[t];
        if (label < 1 || label > g.n || seen[label - 1])
            throw std::invalid_argument("perm is not a permutation of 1..n");
        seen[label - 1] = 1;
        if (x.colors[t] < 0 || x.colors[t] >= g.p)
            throw std::invalid_argument("color outside [0, p)");
    }
}

ColoredPermutation identity(GroupParams const& g)
{
    ColoredPermutation e;
    e.colors.assign(g.n, 0);
    e.perm.resize(g.n);
    std::iota(e.perm.begin(), e.perm.end(), 1);
    return e;
}

ColoredPermutation
multiply(ColoredPermutation const& x, ColoredPermutation const& y, GroupParams const& g)
{
    if (x.size() != g.n || y.size() != g.n)
        throw std::invalid_argument("multiply: dimension mismatch");
    ColoredPermutation out;
    out.perm.resize(g.n);
    out.colors.resize(g.n);
    for (int i = 0; i < g.n; ++i)
    {
        int const j = y.perm[i] - 1;
        out.perm[i] = x.perm[j];
        out.colors[i] = (x.colors[j] + y.colors[i]) % g.p;
    }
    return out;
}

ColoredPermutation inverse(ColoredPermutation const& x, GroupParams const& g)
{
    if (x.size() != g.n)
        throw std::invalid_argument("inverse: dimension mismatch");
    ColoredPermutation out;
    out.perm = x.positions();
    for (int& label : out.perm)
        ++label;
    out.colors.resize(g.n);
    for (int i = 0; i < g.n; ++i)
        out.colors[i] = (g.p - x.colors[out.perm[i] - 1]) % g.p;
    return out;
}

bool in_nested_set(ColoredPermutation const& x, int u, GroupParams const& g)
{
    if (u < 0 || u > g.n)
        throw std::out_of_range("in_nested_set: u outside [0, n]");
    auto const pos = x.positions();
    for (int label = g.n - u + 1; label <= g.n; ++label)
    {
        int const at = pos[label - 1];
        if (x.colors[at] != 0)
            return false;
        if (label < g.n && at > pos[label])
            return false;
    }
    return true;
}

int level(ColoredPermutation const& x, GroupParams const& g)
{
    auto const pos = x.positions();
    int u = 0;
    int prev = g.n;
    for (int label = g.n; label >= 1; --label)
    {
        int const at = pos[label - 1];
        if (x.colors[at] != 0 || at >= prev)
            break;
        prev = at;
        ++u;
    }
    return u;
}

ColoredPermutation
sample_increment(int m, GroupParams const& g, std::mt19937_64& rng)
{
    if (m < 1 || m > g.n)
        throw std::out_of_range("sample_increment: m outside [1, n]");
    std::vector<int> slots(g.n);
    std::iota(slots.begin(), slots.end(), 0);
    ColoredPermutation x;
    x.perm.assign(g.n, 0);
    x.colors.assign(g.n, 0);
    std::uniform_int_distribution<int> color(0, g.p - 1);
    for (int i = 0; i < m; ++i)
    {
        std::uniform_int_distribution<int> pick(i, g.n - 1);
        std::swap(slots[i], slots[pick(rng)]);
        x.perm[slots[i]] = i + 1;
        x.colors[slots[i]] = color(rng);
    }
    int next = m + 1;
    for (int t = 0; t < g.n; ++t)
    {
        if (x.perm[t] == 0)
            x.perm[t] = next++;
    }
    return x;
}

//---------------------------------------------------------------------------//

std::uint64_t enumeration_cap()
{
    if (char const* env = std::getenv("WREATHMIX_BUDGET"))
    {
        try
        {
            return std::stoull(env);
        }
        catch (std::exception const&)
        {
            throw std::invalid_argument("WREATHMIX_BUDGET is not an integer");
        }
    }
    return default_enumeration_cap;
}

namespace {

std::uint64_t checked_order(GroupParams const& g, std::uint64_t cap)
{
    BigInt const order = g.order();
    if (order > BigInt(std::to_string(cap)))
    {
        throw BudgetExceeded("group order " + order.get_str()
                             + " exceeds enumeration cap "
                             + std::to_string(cap));
    }
    return std::stoull(order.get_str());
}

}  // namespace

ElementIndexer::ElementIndexer(GroupParams const& g, std::uint64_t cap)
    : group_(g), size_(checked_order(g, cap))
{
    for (int i = 0; i < g.n; ++i)
        color_count_ *= static_cast<std::uint64_t>(g.p);
    factorials_.assign(g.n + 1, 1);
    for (int i = 1; i <= g.n; ++i)
        factorials_[i] = factorials_[i - 1] * static_cast<std::uint64_t>(i);
}

std::uint64_t ElementIndexer::index_of(ColoredPermutation const& x) const
{
    int const n = group_.n;
    std::uint64_t rank = 0;
    for (int i = 0; i < n; ++i)
    {
        std::uint64_t smaller = 0;
        for (int j = i + 1; j < n; ++j)
            smaller += x.perm[j] < x.perm[i];
        rank += smaller * factorials_[n - 1 - i];
    }
    std::uint64_t code = 0;
    for (int t = 0; t < n; ++t)
        code = code * static_cast<std::uint64_t>(group_.p) + x.colors[t];
    return rank * color_count_ + code;
}

ColoredPermutation ElementIndexer::element(std::uint64_t index) const
{
    int const n = group_.n;
    ColoredPermutation x;
    x.colors.assign(n, 0);
    std::uint64_t code = index % color_count_;
    for (int t = n - 1; t >= 0; --t)
    {
        x.colors[t] = static_cast<int>(code % group_.p);
        code /= group_.p;
    }
    std::uint64_t rank = index / color_count_;
    std::vector<int> remaining(n);
    std::iota(remaining.begin(), remaining.end(), 1);
    x.perm.resize(n);
    for (int i = 0; i < n; ++i)
    {
        std::uint64_t const f = factorials_[n - 1 - i];
        auto const digit = static_cast<std::size_t>(rank / f);
        rank %= f;
        x.perm[i] = remaining[digit];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return x;
}

Enumeration::Enumeration(GroupParams const& g, std::uint64_t cap)
    : group_(g), size_(checked_order(g, cap))
{
}

Enumeration::iterator::iterator(GroupParams const& g, bool done)
    : group_(g), current_(identity(g)), done_(done)
{
}

Enumeration::iterator& Enumeration::iterator::operator++()
{
    for (int t = group_.n - 1; t >= 0; --t)
    {
        if (++current_.colors[t] < group_.p)
            return *this;
        current_.colors[t] = 0;
    }
    if (!std::next_permutation(current_.perm.begin(), current_.perm.end()))
        done_ = true;
    return *this;
}

}  // namespace wreathmix
