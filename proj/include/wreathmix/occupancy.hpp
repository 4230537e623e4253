#pragma once

#include "wreathmix/exact.hpp"

#include <random>
#include <span>
#include <vector>

namespace wreathmix {

// Exact pmf of the occupied count A over {0, ..., n}. weights[a] = P(A = a);
// the never-chosen count E = n - A has P(E = u) = weights[n - u].
struct OccupancyWeights
{
    int n = 0;
    std::vector<BigRational> weights;

    BigRational const& occupied(int a) const { return weights.at(a); }
    BigRational const& never_chosen(int u) const { return weights.at(n - u); }
    BigRational total() const;

    // Point mass on a single occupied count.
    static OccupancyWeights point_mass(int n, int a);
};

// Throws std::invalid_argument on negative weights, wrong length, or a total
// different from 1.
void validate(OccupancyWeights const& mu);

// k rounds, each choosing a uniform m-subset of [n].
struct SamplingParams
{
    int n = 1;
    int m = 1;
    int k = 0;

    SamplingParams() = default;
    SamplingParams(int n_, int m_, int k_);
};

BigInt stirling2(unsigned long k, unsigned long a);

// S_m(k,a) = (1/a!) sum_j (-1)^j C(a,j) (a-j)_m^k. Integer valued; zero for
// a < m when k >= 1.
BigRational gen_stirling(unsigned long k, unsigned long a, unsigned long m);

// Occupied-count law after k uniform balls in n boxes.
OccupancyWeights mu_balls(int n, int k);

// Occupied-count law of the m-subset sampling model, by inclusion-exclusion
// over the common denominator (n)_m^k.
OccupancyWeights mu_subsets(SamplingParams const& params);

// Floating evaluation of the same law through the forward recursion on the
// occupied count. Approximate; intended for n beyond exact reach.
std::vector<double> mu_subsets_approx(SamplingParams const& params);

// E[(E)_u] = (n)_u ((n-u)_m / (n)_m)^k.
BigRational factorial_moment(SamplingParams const& params, int u);

double poisson_pmf(double lambda, int u);

// Never-chosen count after the given rounds (labels are 1-based).
int never_chosen_count(int n, std::span<std::vector<int> const> rounds);

// Simulates the sampling model directly and returns E.
int sample_occupancy(SamplingParams const& params, std::mt19937_64& rng);

}  // namespace wreathmix
