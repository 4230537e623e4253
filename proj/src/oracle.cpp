#include "wreathmix/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace wreathmix {

GroupTable::GroupTable(GroupParams const& g, std::uint64_t cap) : indexer_(g, cap)
{
    elements_.reserve(indexer_.size());
    levels_.reserve(indexer_.size());
    for (auto const& x : enumerate(g, cap))
    {
        elements_.push_back(x);
        levels_.push_back(level(x, g));
    }
    identity_ = indexer_.index_of(identity(g));
}

std::shared_ptr<GroupTable const> make_group_table(GroupParams const& g, std::uint64_t cap)
{
    return std::make_shared<GroupTable const>(g, cap);
}

BigRational GroupDistribution::total() const
{
    BigRational sum = 0;
    for (auto const& w : mass)
        sum += w;
    return sum;
}

std::size_t GroupDistribution::support_size() const
{
    std::size_t count = 0;
    for (auto const& w : mass)
        count += sgn(w) != 0;
    return count;
}

namespace {

GroupDistribution zeros(std::shared_ptr<GroupTable const> table)
{
    GroupDistribution out{table, {}};
    out.mass.assign(table->size(), BigRational(0));
    return out;
}

void require_same_group(GroupDistribution const& a, GroupDistribution const& b)
{
    if (!(a.table->group() == b.table->group()))
        throw std::invalid_argument("distributions live on different groups");
}

}  // namespace

GroupDistribution delta_identity(std::shared_ptr<GroupTable const> table)
{
    auto out = zeros(table);
    out.mass[table->identity_index()] = 1;
    return out;
}

GroupDistribution uniform_distribution(std::shared_ptr<GroupTable const> table)
{
    GroupDistribution out{table, {}};
    out.mass.assign(table->size(), table->group().uniform_mass());
    return out;
}

GroupDistribution nested_uniform(int u, std::shared_ptr<GroupTable const> table)
{
    auto const& g = table->group();
    if (u < 0 || u > g.n)
        throw std::out_of_range("nested_uniform: u outside [0, n]");
    BigRational const atom(1, g.nested_set_size(u));
    auto out = zeros(table);
    for (std::uint64_t i = 0; i < table->size(); ++i)
    {
        if (table->level_of(i) >= u)
            out.mass[i] = atom;
    }
    return out;
}

GroupDistribution one_step_law(int m, std::shared_ptr<GroupTable const> table)
{
    auto const& g = table->group();
    if (m < 1 || m > g.n)
        throw std::out_of_range("one_step_law: m outside [1, n]");
    BigRational const atom(1, g.increment_support_size(m));
    auto out = zeros(table);
    for (std::uint64_t i = 0; i < table->size(); ++i)
    {
        if (in_nested_set(table->element(i), g.n - m, g))
            out.mass[i] = atom;
    }
    return out;
}

GroupDistribution convolve(GroupDistribution const& left, GroupDistribution const& right)
{
    require_same_group(left, right);
    auto const& table = *left.table;
    auto const& g = table.group();
    auto out = zeros(left.table);
    // Sum over the (sparse) right factor: z = y u receives M(y) N(u).
    for (std::uint64_t u = 0; u < table.size(); ++u)
    {
        if (sgn(right.mass[u]) == 0)
            continue;
        for (std::uint64_t y = 0; y < table.size(); ++y)
        {
            if (sgn(left.mass[y]) == 0)
                continue;
            auto const z = table.index_of(multiply(table.element(y), table.element(u), g));
            out.mass[z] += left.mass[y] * right.mass[u];
        }
    }
    return out;
}

GroupDistribution power(GroupDistribution const& law, int k)
{
    if (k < 0)
        throw std::invalid_argument("power: k must be nonnegative");
    auto out = delta_identity(law.table);
    for (int i = 0; i < k; ++i)
        out = convolve(out, law);
    return out;
}

GroupDistribution reversed(GroupDistribution const& law)
{
    auto const& table = *law.table;
    auto out = zeros(law.table);
    for (std::uint64_t i = 0; i < table.size(); ++i)
        out.mass[table.index_of(inverse(table.element(i), table.group()))] = law.mass[i];
    return out;
}

DistanceReport direct_distances(GroupDistribution const& law, std::span<double const> q_list)
{
    auto const& table = *law.table;
    BigRational const u_mass = table.group().uniform_mass();
    BigRational const order = BigRational(table.group().order());

    DistanceReport report;
    BigRational abs_sum = 0;
    BigRational min_ratio = -1;
    BigRational max_dev = 0;
    BigRational chi2 = 0;
    for (auto const& q : q_list)
        report.lq[q] = 0.0;
    for (std::uint64_t i = 0; i < table.size(); ++i)
    {
        BigRational const& mass = law.mass[i];
        BigRational const ratio = mass * order;
        BigRational const dev = ratio - 1;
        abs_sum += abs(BigRational(mass - u_mass));
        if (min_ratio < 0 || ratio < min_ratio)
            min_ratio = ratio;
        if (abs(dev) > max_dev)
            max_dev = abs(dev);
        chi2 += u_mass * dev * dev;
        report.kl += relative_entropy_term(mass, u_mass);
        for (auto const& q : q_list)
            report.lq[q] += to_double(u_mass) * std::pow(std::abs(to_double(dev)), q);
    }
    report.tv = abs_sum / 2;
    report.sep = 1 - min_ratio;
    report.linfty = max_dev;
    report.chi2 = chi2;
    return report;
}

namespace {

bool close_relative(double expected, double actual, double tol)
{
    double const scale = std::max(std::abs(expected), std::abs(actual));
    return std::abs(expected - actual) <= tol * scale;
}

std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

CertifyReport mixture_certify(int n, int p, int m, int k_max, std::uint64_t cap)
{
    GroupParams const g(n, p);
    if (m < 1 || m > n || k_max < 0)
        throw std::invalid_argument("mixture_certify: need 1 <= m <= n, k_max >= 0");
    auto const table = make_group_table(g, cap);
    CertifyReport report{g, m, k_max, 0, {}};

    std::vector<GroupDistribution> components;
    for (int u = 0; u <= n; ++u)
        components.push_back(nested_uniform(u, table));

    std::vector<double> const qs{1.0, 1.5, 2.0, 3.0};
    auto const step = one_step_law(m, table);
    auto law = delta_identity(table);
    BigRational const order(g.order());

    auto fail = [&](int k, std::int64_t x, std::string what, std::string expected, std::string actual) {
        report.failures.push_back({k, x, std::move(what), std::move(expected), std::move(actual)});
    };

    for (int k = 0; k <= k_max; ++k)
    {
        if (k > 0)
            law = convolve(law, step);

        ++report.checks;
        if (law.total() != 1)
            fail(k, -1, "normalization", "1", to_string(law.total()));

        MixtureSpec const spec(g, mu_subsets(SamplingParams(n, m, k)));
        auto const s = likelihood_profile(spec);

        // (a) atom-by-atom mixture identity; (b) density ratio through L_p.
        for (std::uint64_t i = 0; i < table->size(); ++i)
        {
            BigRational mixture = 0;
            for (int u = 0; u <= n; ++u)
                mixture += spec.level_weight_of(u) * components[u].mass[i];
            report.checks += 2;
            if (mixture != law.mass[i])
                fail(k, static_cast<std::int64_t>(i), "mixture atom", to_string(mixture),
                     to_string(law.mass[i]));
            BigRational const ratio = law.mass[i] * order;
            if (ratio != s.at(table->level_of(i)))
                fail(k, static_cast<std::int64_t>(i), "density ratio S_mu(L_p(x))",
                     to_string(s.at(table->level_of(i))), to_string(ratio));
        }

        // (c) formula distances versus direct sums.
        auto const direct = direct_distances(law, qs);
        auto const formula = distance_report(spec, qs);
        auto check_exact = [&](char const* what, BigRational const& expected, BigRational const& actual) {
            ++report.checks;
            if (expected != actual)
                fail(k, -1, what, to_string(expected), to_string(actual));
        };
        check_exact("tv", direct.tv, formula.tv);
        check_exact("sep", direct.sep, formula.sep);
        check_exact("linfty", direct.linfty, formula.linfty);
        check_exact("chi2", direct.chi2, formula.chi2);
        ++report.checks;
        if (!close_relative(direct.kl, formula.kl, 1e-12))
            fail(k, -1, "kl", fmt_double(direct.kl), fmt_double(formula.kl));
        for (double q : qs)
        {
            ++report.checks;
            if (!close_relative(direct.lq.at(q), formula.lq.at(q), 1e-12))
                fail(k, -1, "lq q=" + fmt_double(q), fmt_double(direct.lq.at(q)),
                     fmt_double(formula.lq.at(q)));
        }
    }
    return report;
}

double LevelHistogram::frequency(int l) const
{
    return reps == 0 ? 0.0 : static_cast<double>(counts.at(l)) / static_cast<double>(reps);
}

void step_in_place(ColoredPermutation& x, int m, GroupParams const& g, std::mt19937_64& rng)
{
    if (m < 1 || m > g.n)
        throw std::out_of_range("step_in_place: m outside [1, n]");
    // Right multiplication by (s, sigma): position i receives the card from
    // position sigma(i) with color s_i added. Labels 1..m of the increment
    // sit in the sampled slots; the rest read positions m..n-1 in order.
    thread_local std::vector<int> slots, perm, colors;
    thread_local std::vector<std::pair<int, int>> moved;  // (target slot, top card)
    thread_local std::vector<int> added;
    slots.resize(g.n);
    std::iota(slots.begin(), slots.end(), 0);
    moved.resize(m);
    added.resize(m);
    std::uniform_int_distribution<int> color(0, g.p - 1);
    for (int i = 0; i < m; ++i)
    {
        std::uniform_int_distribution<int> pick(i, g.n - 1);
        std::swap(slots[i], slots[pick(rng)]);
        moved[i] = {slots[i], i};
        added[i] = color(rng);
    }
    std::sort(moved.begin(), moved.end());
    perm.resize(g.n);
    colors.resize(g.n);
    // Copy the untouched cards in runs between the targets of the top m.
    int src = m, dst = 0;
    for (auto const& [slot, card] : moved)
    {
        int const run = slot - dst;
        std::copy_n(x.perm.begin() + src, run, perm.begin() + dst);
        std::copy_n(x.colors.begin() + src, run, colors.begin() + dst);
        src += run;
        perm[slot] = x.perm[card];
        colors[slot] = (x.colors[card] + added[card]) % g.p;
        dst = slot + 1;
    }
    std::copy_n(x.perm.begin() + src, g.n - dst, perm.begin() + dst);
    std::copy_n(x.colors.begin() + src, g.n - dst, colors.begin() + dst);
    x.perm.swap(perm);
    x.colors.swap(colors);
}

LevelHistogram
simulate_chain(int n, int p, int m, int k, std::uint64_t reps, std::mt19937_64& rng)
{
    GroupParams const g(n, p);
    if (m < 1 || m > n || k < 0)
        throw std::invalid_argument("simulate_chain: need 1 <= m <= n, k >= 0");
    LevelHistogram hist{n, std::vector<std::uint64_t>(n + 1, 0), reps};
    auto const start = identity(g);
    ColoredPermutation x;
    for (std::uint64_t rep = 0; rep < reps; ++rep)
    {
        x = start;
        for (int t = 0; t < k; ++t)
            step_in_place(x, m, g, rng);
        ++hist.counts[level(x, g)];
    }
    return hist;
}

double plugin_tv(LevelHistogram const& hist, GroupParams const& g)
{
    if (hist.n != g.n)
        throw std::invalid_argument("plugin_tv: histogram and group disagree on n");
    double sum = 0.0;
    for (int l = 0; l <= g.n; ++l)
        sum += std::abs(hist.frequency(l) - to_double(u_level_mass(g, l)));
    return sum / 2;
}

}  // namespace wreathmix
