#include "wreathmix/distances.hpp"

#include <cmath>
#include <stdexcept>

namespace wreathmix {

MixtureSpec::MixtureSpec(GroupParams g, OccupancyWeights weights)
    : group(g), mu(std::move(weights))
{
    validate(mu);
    if (mu.n != group.n)
        throw std::invalid_argument("MixtureSpec: weights and group disagree on n");
}

int MixtureSpec::top_level() const
{
    for (int u = group.n; u >= 0; --u)
    {
        if (sgn(level_weight_of(u)) > 0)
            return u;
    }
    throw std::logic_error("MixtureSpec: weights are identically zero");
}

LikelihoodProfile likelihood_profile(MixtureSpec const& spec)
{
    int const n = spec.group.n;
    LikelihoodProfile out;
    out.values.reserve(n + 1);
    BigRational acc = 0;
    BigInt weight = 1;  // u! p^u
    for (int u = 0; u <= n; ++u)
    {
        if (u > 0)
            weight *= u * spec.group.p;
        acc += spec.level_weight_of(u) * weight;
        out.values.push_back(acc);
    }
    return out;
}

BigRational u_level_mass(GroupParams const& g, int level)
{
    if (level < 0 || level > g.n)
        throw std::out_of_range("u_level_mass: level outside [0, n]");
    BigRational tail(1, level_weight(level, g.p));
    if (level == g.n)
        return tail;
    BigRational const next(1, level_weight(level + 1, g.p));
    return tail - next;
}

namespace {

std::vector<BigRational> level_masses(GroupParams const& g)
{
    std::vector<BigRational> out;
    out.reserve(g.n + 1);
    for (int l = 0; l <= g.n; ++l)
        out.push_back(u_level_mass(g, l));
    return out;
}

int min_level(GroupParams const& g)
{
    return g.p == 1 ? 1 : 0;
}

}  // namespace

TvResult tv_exact(MixtureSpec const& spec)
{
    auto const s = likelihood_profile(spec);
    int w = -1;
    for (int l = 0; l <= s.max_level(); ++l)
    {
        if (s.at(l) > 1)
        {
            w = l;
            break;
        }
    }
    if (w < 0)
        return {BigRational(0), std::nullopt};

    BigRational below = 0;
    for (int u = 0; u < w; ++u)
        below += spec.level_weight_of(u);
    BigRational tv = 1 - below + (s.at(w - 1) - 1) / BigRational(level_weight(w, spec.group.p));
    return {tv, w};
}

BigRational sep_exact(MixtureSpec const& spec)
{
    return 1 - likelihood_profile(spec).at(min_level(spec.group));
}

BigRational linfty_exact(MixtureSpec const& spec)
{
    return likelihood_profile(spec).values.back() - 1;
}

double phi_functional(MixtureSpec const& spec, std::function<double(double)> const& phi)
{
    auto const s = likelihood_profile(spec);
    auto const mass = level_masses(spec.group);
    double sum = 0.0;
    for (int l = 0; l <= s.max_level(); ++l)
    {
        double const value = phi(to_double(s.at(l)));
        if (!std::isfinite(value))
            throw std::domain_error("phi_functional: phi is not finite at S_mu("
                                    + std::to_string(l) + ")");
        sum += to_double(mass[l]) * value;
    }
    return sum;
}

double lq_exact(MixtureSpec const& spec, double q)
{
    if (!(q >= 1.0) || !std::isfinite(q))
        throw std::invalid_argument("lq_exact: need 1 <= q < infinity");
    auto const s = likelihood_profile(spec);
    auto const mass = level_masses(spec.group);
    double sum = 0.0;
    for (int l = 0; l <= s.max_level(); ++l)
    {
        BigRational dev = s.at(l) - 1;
        if (sgn(dev) == 0 || sgn(mass[l]) == 0)
            continue;
        dev = abs(dev);
        // Weight and deviation may each overflow a double; combine in logs.
        sum += std::exp(log_of(mass[l]) + q * log_of(dev));
    }
    return sum;
}

BigRational lq_exact_rational(MixtureSpec const& spec, int q)
{
    if (q < 1)
        throw std::invalid_argument("lq_exact_rational: need integer q >= 1");
    auto const s = likelihood_profile(spec);
    auto const mass = level_masses(spec.group);
    BigRational sum = 0;
    for (int l = 0; l <= s.max_level(); ++l)
    {
        BigRational const dev = abs(BigRational(s.at(l) - 1));
        BigRational term = 1;
        for (int i = 0; i < q; ++i)
            term *= dev;
        sum += mass[l] * term;
    }
    return sum;
}

BigRational chi2_exact(MixtureSpec const& spec)
{
    int const n = spec.group.n;
    // Group the double sum by j = min(u, v): the diagonal contributes
    // w_j^2 and each off-diagonal pair (j, v > j) appears twice.
    std::vector<BigRational> tail(n + 2, BigRational(0));
    for (int u = n; u >= 0; --u)
        tail[u] = tail[u + 1] + spec.level_weight_of(u);
    BigRational sum = 0;
    BigInt weight = 1;
    for (int j = 0; j <= n; ++j)
    {
        if (j > 0)
            weight *= j * spec.group.p;
        BigRational const& wj = spec.level_weight_of(j);
        if (sgn(wj) == 0)
            continue;
        sum += weight * wj * (wj + 2 * tail[j + 1]);
    }
    return sum - 1;
}

double relative_entropy_term(BigRational const& mass, BigRational const& base)
{
    if (sgn(base) <= 0)
        throw std::domain_error("relative_entropy_term: base must be positive");
    if (sgn(mass) == 0)
        return to_double(base);
    double const d = to_double(BigRational(mass / base - 1));
    if (std::abs(d) < 0.1)
    {
        // (1+d) log(1+d) - d = sum_{j>=2} (-1)^j d^j / (j(j-1))
        double sum = 0.0, power = -d;
        for (int j = 2; j < 60; ++j)
        {
            power *= -d;
            double const term = power / (j * (j - 1.0));
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum))
                break;
        }
        return to_double(base) * sum;
    }
    if (std::abs(d) < 0.5)
        return to_double(base) * ((1 + d) * std::log1p(d) - d);
    return to_double(mass) * log_of(BigRational(mass / base)) - to_double(BigRational(mass - base));
}

double kl_exact(MixtureSpec const& spec)
{
    auto const s = likelihood_profile(spec);
    auto const mass = level_masses(spec.group);
    double sum = 0.0;
    for (int l = 0; l <= s.max_level(); ++l)
    {
        if (sgn(mass[l]) == 0)
            continue;
        sum += relative_entropy_term(BigRational(mass[l] * s.at(l)), mass[l]);
    }
    return sum;
}

DistanceReport distance_report(MixtureSpec const& spec, std::span<double const> q_list)
{
    DistanceReport report;
    auto tv = tv_exact(spec);
    report.tv = tv.tv;
    report.w_mu = tv.w_mu;
    report.sep = sep_exact(spec);
    report.linfty = linfty_exact(spec);
    report.chi2 = chi2_exact(spec);
    report.kl = kl_exact(spec);
    for (double q : q_list)
        report.lq[q] = lq_exact(spec, q);
    return report;
}

}  // namespace wreathmix
