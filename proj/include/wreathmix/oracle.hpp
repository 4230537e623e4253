#pragma once

#include "wreathmix/distances.hpp"
#include "wreathmix/group.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace wreathmix {

inline constexpr std::uint64_t default_oracle_cap = 10'000;

// Enumerated group with a precomputed multiplication-ready element table.
class GroupTable
{
  public:
    explicit GroupTable(GroupParams const& g, std::uint64_t cap = default_oracle_cap);

    GroupParams const& group() const { return indexer_.group(); }
    std::uint64_t size() const { return indexer_.size(); }
    ColoredPermutation const& element(std::uint64_t i) const { return elements_[i]; }
    std::uint64_t index_of(ColoredPermutation const& x) const { return indexer_.index_of(x); }
    std::uint64_t identity_index() const { return identity_; }
    int level_of(std::uint64_t i) const { return levels_[i]; }

  private:
    ElementIndexer indexer_;
    std::vector<ColoredPermutation> elements_;
    std::vector<int> levels_;
    std::uint64_t identity_ = 0;
};

// Exact pmf over G_{n,p} in enumeration order.
struct GroupDistribution
{
    std::shared_ptr<GroupTable const> table;
    std::vector<BigRational> mass;

    BigRational total() const;
    std::size_t support_size() const;
};

std::shared_ptr<GroupTable const>
make_group_table(GroupParams const& g, std::uint64_t cap = default_oracle_cap);

GroupDistribution delta_identity(std::shared_ptr<GroupTable const> table);
GroupDistribution uniform_distribution(std::shared_ptr<GroupTable const> table);

// Uniform law on supp(B_m) = A_{n-m}.
GroupDistribution one_step_law(int m, std::shared_ptr<GroupTable const> table);

// Uniform law on A_u.
GroupDistribution nested_uniform(int u, std::shared_ptr<GroupTable const> table);

// (M * N)(z) = sum_u M(z u^{-1}) N(u): the law of GH for G ~ M, H ~ N.
GroupDistribution convolve(GroupDistribution const& left, GroupDistribution const& right);

// M^{*k}, with M^{*0} = delta_e.
GroupDistribution power(GroupDistribution const& law, int k);

// x -> M(x^{-1})
GroupDistribution reversed(GroupDistribution const& law);

// Every distance by summation over the whole group.
DistanceReport direct_distances(GroupDistribution const& law, std::span<double const> q_list);

struct CertifyFailure
{
    int k = 0;
    std::int64_t element = -1;  // -1 when the check is not per element
    std::string what;
    std::string expected;
    std::string actual;
};

struct CertifyReport
{
    GroupParams group;
    int m = 1;
    int k_max = 0;
    std::size_t checks = 0;
    std::vector<CertifyFailure> failures;

    bool passed() const { return failures.empty(); }
};

// For k = 0..k_max: brute-force convolution power versus the occupancy
// mixture atom by atom, density ratio versus S_mu(L_p(x)), and every distance
// formula versus its direct sum (exact for rationals, 1e-12 relative for
// KL and L^q).
CertifyReport mixture_certify(int n, int p, int m, int k_max,
                              std::uint64_t cap = default_oracle_cap);

struct LevelHistogram
{
    int n = 0;
    std::vector<std::uint64_t> counts;  // counts[l] = #{walks ending with L_p = l}
    std::uint64_t reps = 0;

    double frequency(int l) const;
};

// reps independent walks X_k = G_1 ... G_k from the identity, each G_t a
// uniform draw from supp(B_m); records L_p(X_k).
LevelHistogram
simulate_chain(int n, int p, int m, int k, std::uint64_t reps, std::mt19937_64& rng);

// One walk step x <- x * G with G drawn exactly as sample_increment draws it
// (same random stream consumption), without materializing G.
void step_in_place(ColoredPermutation& x, int m, GroupParams const& g, std::mt19937_64& rng);

// Plug-in TV between an empirical L_p law and the uniform L_p law.
double plugin_tv(LevelHistogram const& hist, GroupParams const& g);

}  // namespace wreathmix
