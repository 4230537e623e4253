#include "wreathmix/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wreathmix {

BigRational OccupancyWeights::total() const
{
    BigRational sum = 0;
    for (auto const& w : weights)
        sum += w;
    return sum;
}

OccupancyWeights OccupancyWeights::point_mass(int n, int a)
{
    if (n < 1 || a < 0 || a > n)
        throw std::out_of_range("point_mass: need 0 <= a <= n, n >= 1");
    OccupancyWeights mu{n, std::vector<BigRational>(n + 1, BigRational(0))};
    mu.weights[a] = 1;
    return mu;
}

void validate(OccupancyWeights const& mu)
{
    if (mu.n < 1 || static_cast<int>(mu.weights.size()) != mu.n + 1)
        throw std::invalid_argument("occupancy weights must have n + 1 entries");
    for (auto const& w : mu.weights)
    {
        if (sgn(w) < 0)
            throw std::invalid_argument("occupancy weights must be nonnegative");
    }
    if (mu.total() != 1)
        throw std::invalid_argument("occupancy weights must sum to 1");
}

SamplingParams::SamplingParams(int n_, int m_, int k_) : n(n_), m(m_), k(k_)
{
    if (n < 1 || m < 1 || m > n || k < 0)
        throw std::invalid_argument("SamplingParams: need 1 <= m <= n, k >= 0");
}

BigInt stirling2(unsigned long k, unsigned long a)
{
    if (a > k)
        return 0;
    // Row-by-row recurrence {j,b} = {j-1,b-1} + b {j-1,b}, truncated at a.
    std::vector<BigInt> row(a + 1, BigInt(0));
    row[0] = 1;
    for (unsigned long j = 1; j <= k; ++j)
    {
        for (unsigned long b = std::min(j, a); b >= 1; --b)
            row[b] = row[b - 1] + BigInt(b) * row[b];
        row[0] = 0;
    }
    return row[a];
}

namespace {

// sum_{j=0}^{a} (-1)^j C(a,j) powers[a-j]
BigInt alternating_sum(unsigned long a, std::vector<BigInt> const& powers)
{
    BigInt sum = 0;
    BigInt c = 1;
    for (unsigned long j = 0; j <= a; ++j)
    {
        if (sgn(powers[a - j]) != 0)
        {
            if (j % 2 == 0)
                sum += c * powers[a - j];
            else
                sum -= c * powers[a - j];
        }
        c = c * (a - j) / (j + 1);
    }
    return sum;
}

std::vector<BigInt> falling_powers(unsigned long top, unsigned long m, unsigned long k)
{
    std::vector<BigInt> out(top + 1);
    for (unsigned long x = 0; x <= top; ++x)
        out[x] = power(falling_factorial(x, m), k);
    return out;
}

}  // namespace

BigRational gen_stirling(unsigned long k, unsigned long a, unsigned long m)
{
    if (k == 0)
        return a == 0 ? 1 : 0;
    if (a < m)
        return 0;
    BigRational out(alternating_sum(a, falling_powers(a, m, k)), factorial(a));
    out.canonicalize();
    return out;
}

OccupancyWeights mu_balls(int n, int k)
{
    if (n < 1 || k < 0)
        throw std::invalid_argument("mu_balls: need n >= 1, k >= 0");
    if (k == 0)
        return OccupancyWeights::point_mass(n, 0);
    OccupancyWeights mu{n, std::vector<BigRational>(n + 1)};
    BigInt const den = power(BigInt(n), k);
    for (int a = 0; a <= n; ++a)
    {
        mu.weights[a] = BigRational(binomial(n, a) * stirling2(k, a) * factorial(a), den);
        mu.weights[a].canonicalize();
    }
    return mu;
}

OccupancyWeights mu_subsets(SamplingParams const& params)
{
    int const n = params.n;
    if (params.k == 0)
        return OccupancyWeights::point_mass(n, 0);
    auto const pw = falling_powers(n, params.m, params.k);
    OccupancyWeights mu{n, std::vector<BigRational>(n + 1)};
    for (int a = 0; a <= n; ++a)
    {
        mu.weights[a] = BigRational(binomial(n, a) * alternating_sum(a, pw), pw[n]);
        mu.weights[a].canonicalize();
    }
    return mu;
}

std::vector<double> mu_subsets_approx(SamplingParams const& params)
{
    int const n = params.n;
    int const m = params.m;
    // Hypergeometric step: from a occupied, a round adds j new indices with
    // probability C(n-a, j) C(a, m-j) / C(n, m).
    auto log_choose = [](int top, int j) {
        return std::lgamma(top + 1.0) - std::lgamma(j + 1.0) - std::lgamma(top - j + 1.0);
    };
    double const log_total = log_choose(n, m);
    std::vector<double> cur(n + 1, 0.0), next(n + 1);
    cur[0] = 1.0;
    for (int round = 0; round < params.k; ++round)
    {
        std::fill(next.begin(), next.end(), 0.0);
        for (int a = 0; a <= n; ++a)
        {
            if (cur[a] == 0.0)
                continue;
            for (int j = std::max(0, m - a); j <= std::min(m, n - a); ++j)
            {
                double const step = std::exp(log_choose(n - a, j) + log_choose(a, m - j) - log_total);
                next[a + j] += cur[a] * step;
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

BigRational factorial_moment(SamplingParams const& params, int u)
{
    if (u < 0 || u > params.n)
        throw std::out_of_range("factorial_moment: u outside [0, n]");
    BigRational ratio(falling_factorial(params.n - u, params.m),
                      falling_factorial(params.n, params.m));
    ratio.canonicalize();
    BigRational out(falling_factorial(params.n, u));
    BigRational ratio_pow;
    mpz_pow_ui(ratio_pow.get_num_mpz_t(), ratio.get_num_mpz_t(), params.k);
    mpz_pow_ui(ratio_pow.get_den_mpz_t(), ratio.get_den_mpz_t(), params.k);
    ratio_pow.canonicalize();
    return out * ratio_pow;
}

double poisson_pmf(double lambda, int u)
{
    if (!(lambda > 0.0))
        throw std::invalid_argument("poisson_pmf: lambda must be positive");
    if (u < 0)
        return 0.0;
    return std::exp(-lambda + u * std::log(lambda) - std::lgamma(u + 1.0));
}

int never_chosen_count(int n, std::span<std::vector<int> const> rounds)
{
    std::vector<char> chosen(n, 0);
    for (auto const& round : rounds)
    {
        for (int label : round)
        {
            if (label < 1 || label > n)
                throw std::out_of_range("never_chosen_count: label outside [1, n]");
            chosen[label - 1] = 1;
        }
    }
    return n - static_cast<int>(std::count(chosen.begin(), chosen.end(), 1));
}

int sample_occupancy(SamplingParams const& params, std::mt19937_64& rng)
{
    int const n = params.n;
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    std::vector<char> chosen(n, 0);
    int never = n;
    for (int round = 0; round < params.k; ++round)
    {
        // Partial Fisher-Yates: the first m entries form a uniform m-subset.
        for (int i = 0; i < params.m; ++i)
        {
            std::uniform_int_distribution<int> pick(i, n - 1);
            std::swap(labels[i], labels[pick(rng)]);
            if (!chosen[labels[i]])
            {
                chosen[labels[i]] = 1;
                --never;
            }
        }
    }
    return never;
}

}  // namespace wreathmix
