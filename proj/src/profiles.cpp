#include "wreathmix/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wreathmix {

SeriesNotConverged::SeriesNotConverged(double partial_sum, double tail_bound, int terms)
    : std::runtime_error("series did not reach tolerance after " + std::to_string(terms)
                         + " terms (partial sum " + std::to_string(partial_sum)
                         + ", tail bound " + std::to_string(tail_bound) + ")")
    , partial_(partial_sum)
    , bound_(tail_bound)
    , terms_(terms)
{
}

namespace {

constexpr double huge_lambda = 1.0e6;
constexpr double saturation_lambda = 1.0e4;

void check_p(int p)
{
    if (p < 1)
        throw std::invalid_argument("profile: need p >= 1");
}

double log_add(double a, double b)
{
    if (a < b)
        std::swap(a, b);
    if (b == -INFINITY)
        return a;
    return a + std::log1p(std::exp(b - a));
}

// log of the Poisson(lambda) mass at u
double log_poisson(double lambda, int u)
{
    return -lambda + u * std::log(lambda) - std::lgamma(u + 1.0);
}

// log(l! p^l)
double log_level_weight(int l, int p)
{
    return std::lgamma(l + 1.0) + l * std::log(static_cast<double>(p));
}

// Partial sums s(l) = e^{-lambda} sum_{u<=l} r^u, tracked in logs.
class LikelihoodLimit
{
  public:
    LikelihoodLimit(double lambda, int p)
        : lambda_(lambda), log_r_(std::log(static_cast<double>(p)) + std::log(lambda))
    {
    }

    int level() const { return level_; }
    double log_s() const { return -lambda_ + log_sum_; }

    void advance()
    {
        ++level_;
        log_sum_ = log_add(log_sum_, level_ * log_r_);
    }

  private:
    double lambda_;
    double log_r_;
    int level_ = 0;
    double log_sum_ = 0.0;  // log sum_{u<=level} r^u
};

// log |s - 1| given log s; -inf when s == 1.
double log_abs_dev(double log_s)
{
    if (log_s > 0.0)
        return log_s + std::log(-std::expm1(-log_s));
    if (log_s < 0.0)
        return std::log(-std::expm1(log_s));
    return -INFINITY;
}

// sum_l a_l * phi(s(l)), where term(log_a, log_s) returns a_l * phi(s(l)).
// |phi(s)| <= max(1, s)^envelope_q drives the truncation bound.
template<class Term>
double level_series(double c, int p, double envelope_q, SeriesControl const& ctrl, Term term)
{
    check_p(p);
    if (!(ctrl.tol > 0.0))
        throw std::invalid_argument("SeriesControl: tol must be positive");
    double const lambda = std::exp(-c);
    double const big_r = std::max(1.0, p * lambda);
    double const log_p = std::log(static_cast<double>(p));
    LikelihoodLimit s(lambda, p);
    double sum = 0.0;
    double tail = INFINITY;
    for (int l = 0; l < ctrl.max_terms; ++l)
    {
        if (l > 0)
            s.advance();
        double const next_share = 1.0 / ((l + 1.0) * p);
        double value = 0.0;
        if (next_share < 1.0)
        {
            double const log_a = -log_level_weight(l, p) + std::log1p(-next_share);
            value = term(log_a, s.log_s());
        }
        sum += value;
        if (!std::isfinite(sum))
            return sum;

        // Envelope b_l = max(1, e^{-lambda}(l+1)R^l)^q / (l! p^l); consecutive
        // ratios are at most rho_l, which decreases in l.
        double const log_x = -lambda + std::log(l + 1.0) + l * std::log(big_r);
        double const log_b = envelope_q * std::max(0.0, log_x) - std::lgamma(l + 1.0) - l * log_p;
        double const rho = std::pow(big_r * (l + 2.0) / (l + 1.0), envelope_q) / ((l + 1.0) * p);
        if (rho < 1.0)
        {
            tail = std::exp(log_b) * rho / (1.0 - rho);
            if (std::abs(value) < ctrl.tol && tail < ctrl.tol)
                return sum;
        }
    }
    throw SeriesNotConverged(sum, tail, ctrl.max_terms);
}

}  // namespace

ProfilePoint profile_point(double c, int p)
{
    check_p(p);
    ProfilePoint pt;
    pt.c = c;
    pt.p = p;
    pt.lambda = std::exp(-c);
    pt.r = p * pt.lambda;
    pt.w_star = w_star(c, p);
    return pt;
}

long k_window(int n, int m, double c)
{
    if (n < 1 || m < 1)
        throw std::invalid_argument("k_window: need n, m >= 1");
    double const k = std::floor(static_cast<double>(n) / m * (std::log(static_cast<double>(n)) + c));
    return std::max(0L, static_cast<long>(k));
}

int w_star(double c, int p)
{
    check_p(p);
    // The scan is linear in w*, which grows like lambda / log(p lambda).
    if (std::exp(-c) > huge_lambda)
        return w_star_closed_form(c, p);
    LikelihoodLimit s(std::exp(-c), p);
    while (s.log_s() <= 0.0)
        s.advance();
    return s.level();
}

int w_star_closed_form(double c, int p)
{
    check_p(p);
    double const lambda = std::exp(-c);
    double const r = p * lambda;
    if (std::abs(r - 1.0) < 1e-12)
        return static_cast<int>(std::floor(std::exp(lambda)));
    double log_num;
    if (r > 1.0)
        log_num = lambda + std::log(r - 1.0) + std::log1p(std::exp(-lambda) / (r - 1.0));
    else
        log_num = std::log1p(std::exp(lambda) * (r - 1.0));
    return static_cast<int>(std::floor(log_num / std::log(r)));
}

namespace {

struct FParts
{
    double lower_cdf;   // e^{-lambda} sum_{u<w} lambda^u/u!
    double upper_tail;  // 1 - lower_cdf
    double deficit;     // (1 - s(w-1)) / (w! p^w) >= 0
};

FParts f_parts(double c, int p)
{
    check_p(p);
    double const lambda = std::exp(-c);
    FParts out;
    if (lambda > saturation_lambda)
    {
        // 1 - f_p(c) < e^{-lambda/4} here, far below the smallest double.
        out.lower_cdf = 0.0;
        out.upper_tail = 1.0;
        out.deficit = 0.0;
        return out;
    }
    int const w = w_star(c, p);
    LikelihoodLimit s(lambda, p);
    for (int l = 1; l < w; ++l)
        s.advance();
    out.deficit = -std::expm1(s.log_s()) * std::exp(-log_level_weight(w, p));

    double lower = 0.0;
    for (int u = 0; u < w; ++u)
        lower += std::exp(log_poisson(lambda, u));
    out.lower_cdf = lower;
    if (lower < 0.5)
    {
        out.upper_tail = 1.0 - lower;
    }
    else
    {
        // Terms beyond the mode decrease; sum until they vanish.
        double upper = 0.0;
        for (int u = w;; ++u)
        {
            double const t = std::exp(log_poisson(lambda, u));
            upper += t;
            if (u > lambda && t <= upper * 1e-18)
                break;
        }
        out.upper_tail = upper;
    }
    return out;
}

}  // namespace

double f_profile(double c, int p)
{
    auto const parts = f_parts(c, p);
    return parts.upper_tail - parts.deficit;
}

double one_minus_f_profile(double c, int p)
{
    auto const parts = f_parts(c, p);
    return parts.lower_cdf + parts.deficit;
}

double f_profile_extended(double c, int p)
{
    check_p(p);
    double const lambda = std::exp(-c);
    if (lambda > saturation_lambda)
        return 1.0;
    int const w = w_star(c, p);
    LikelihoodLimit s(lambda, p);
    for (int l = 1; l <= w; ++l)
        s.advance();
    double cdf = 0.0;
    for (int u = 0; u <= w; ++u)
        cdf += std::exp(log_poisson(lambda, u));
    return 1.0 - cdf + std::expm1(s.log_s()) * std::exp(-log_level_weight(w, p));
}

double f_series(double c, int p, SeriesControl const& ctrl)
{
    return level_series(c, p, 1.0, ctrl, [](double log_a, double log_s) {
        return log_s > 0.0 ? std::exp(log_a + log_abs_dev(log_s)) : 0.0;
    });
}

double sep_profile(double c, int p)
{
    check_p(p);
    double const lambda = std::exp(-c);
    if (p == 1)
        return 1.0 - std::exp(-lambda) * (1.0 + lambda);
    return -std::expm1(-lambda);
}

double chi2_profile(double c, int p)
{
    check_p(p);
    double const lambda = std::exp(-c);
    double const r = p * lambda;
    // ((r+1) e^{-lambda(2-r)} - 2 e^{-lambda}) / (r-1) - 1, rewritten with
    // x = lambda (r-1) so nothing cancels near r = 1. At r = 1 this is
    // (2 lambda + 1) e^{-lambda} - 1.
    double const x = lambda * (r - 1.0);
    double const expm1_ratio = x == 0.0 ? 1.0 : std::expm1(x) / x;
    return std::exp(-lambda) * (std::exp(x) + 2.0 * lambda * expm1_ratio) - 1.0;
}

double lq_profile(double c, int p, double q, SeriesControl const& ctrl)
{
    if (!(q >= 1.0) || !std::isfinite(q))
        throw std::invalid_argument("lq_profile: need 1 <= q < infinity");
    return level_series(c, p, q, ctrl, [q](double log_a, double log_s) {
        return std::exp(log_a + q * log_abs_dev(log_s));
    });
}

double kl_profile(double c, int p, SeriesControl const& ctrl)
{
    return level_series(c, p, 2.0, ctrl, [](double log_a, double log_s) {
        if (log_s == 0.0)
            return 0.0;
        double const mag = std::exp(log_a + log_s + std::log(std::abs(log_s)));
        return log_s > 0.0 ? mag : -mag;
    });
}

double linfty_profile(double c, int p)
{
    check_p(p);
    double const lambda = std::exp(-c);
    double const r = p * lambda;
    if (r >= 1.0)
        return infinite_profile;
    return std::exp(-lambda) / (1.0 - r) - 1.0;
}

double sep_mixing_time(double eps, int n, int m, int p)
{
    if (p < 2)
        throw std::invalid_argument("sep_mixing_time: only p >= 2 is supported");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("sep_mixing_time: need 0 < eps < 1");
    if (n < 1 || m < 1)
        throw std::invalid_argument("sep_mixing_time: need n, m >= 1");
    return static_cast<double>(n) / m
           * (std::log(static_cast<double>(n)) - std::log(-std::log1p(-eps)));
}

DoublyExpReport doubly_exp_check(std::span<double const> c_grid, int p)
{
    check_p(p);
    DoublyExpReport report;
    report.p = p;
    for (double c : c_grid)
    {
        DoublyExpRow row;
        row.c = c;
        row.f = f_profile(c, p);
        double const omf = one_minus_f_profile(c, p);
        row.saturated = !(omf > 0.0) || row.f >= 1.0;
        row.ratio = row.saturated ? std::nan("") : -std::log(omf) / std::exp(-c);
        report.rows.push_back(row);
    }
    std::vector<DoublyExpRow> ordered;
    for (auto const& row : report.rows)
    {
        if (!row.saturated)
            ordered.push_back(row);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](auto const& a, auto const& b) { return a.c > b.c; });
    for (std::size_t i = 1; i < ordered.size(); ++i)
    {
        if (std::abs(ordered[i].ratio - 1.0) > std::abs(ordered[i - 1].ratio - 1.0))
            report.monotone_approach = false;
    }
    return report;
}

}  // namespace wreathmix
