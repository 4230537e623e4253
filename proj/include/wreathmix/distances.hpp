#pragma once

#include "wreathmix/exact.hpp"
#include "wreathmix/group.hpp"
#include "wreathmix/occupancy.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace wreathmix {

// Nested-set mixture sum_a mu(a) * (uniform law on supp(B_a)) over G_{n,p}.
struct MixtureSpec
{
    GroupParams group;
    OccupancyWeights mu;

    MixtureSpec(GroupParams g, OccupancyWeights weights);

    // mu(n - u): weight of the component uniform on A_u.
    BigRational const& level_weight_of(int u) const { return mu.never_chosen(u); }

    // r_mu = max{u : mu(n - u) > 0}
    int top_level() const;
};

// S_mu(l) = sum_{u <= l} mu(n-u) u! p^u for l = 0..n. The mixture's density
// against uniform at x is S_mu(L_p(x)).
struct LikelihoodProfile
{
    std::vector<BigRational> values;

    BigRational const& at(int level) const { return values.at(level); }
    int max_level() const { return static_cast<int>(values.size()) - 1; }
};

LikelihoodProfile likelihood_profile(MixtureSpec const& spec);

// U{L_p = l}
BigRational u_level_mass(GroupParams const& g, int level);

struct TvResult
{
    BigRational tv;
    std::optional<int> w_mu;  // absent when the mixture is uniform
};

TvResult tv_exact(MixtureSpec const& spec);
BigRational sep_exact(MixtureSpec const& spec);
BigRational linfty_exact(MixtureSpec const& spec);

// The density ratio is maximal exactly on A_u for the returned u.
inline int linfty_maximizer_level(MixtureSpec const& spec) { return spec.top_level(); }

// sum_l U{L_p = l} phi(S_mu(l)) in double precision. phi must be finite at
// every S_mu(l); a non-finite value throws std::domain_error.
double phi_functional(MixtureSpec const& spec, std::function<double(double)> const& phi);

// q-th power of the L^q(U) norm of the density minus one.
double lq_exact(MixtureSpec const& spec, double q);
// Same, exactly, for integer q >= 1.
BigRational lq_exact_rational(MixtureSpec const& spec, int q);

// sum_{u,v} mu(n-u) mu(n-v) min(u,v)! p^min(u,v) - 1
BigRational chi2_exact(MixtureSpec const& spec);

// mass log(mass/base) - (mass - base) >= 0. Summed over a partition these
// terms give the relative entropy with no cancellation, since the linear
// parts add up to zero.
double relative_entropy_term(BigRational const& mass, BigRational const& base);

// Relative entropy D(mixture || U).
double kl_exact(MixtureSpec const& spec);

struct DistanceReport
{
    BigRational tv;
    BigRational sep;
    BigRational linfty;
    BigRational chi2;
    double kl = 0.0;
    std::map<double, double> lq;
    std::optional<int> w_mu;
};

DistanceReport distance_report(MixtureSpec const& spec, std::span<double const> q_list);

}  // namespace wreathmix
