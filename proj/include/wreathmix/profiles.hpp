#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace wreathmix {

// Window point c with lambda = e^{-c}, r = p lambda, and the threshold w*.
struct ProfilePoint
{
    double c = 0.0;
    int p = 1;
    double lambda = 1.0;
    double r = 1.0;
    int w_star = 1;
};

ProfilePoint profile_point(double c, int p);

struct SeriesControl
{
    double tol = 1e-12;
    int max_terms = 10000;
};

class SeriesNotConverged : public std::runtime_error
{
  public:
    SeriesNotConverged(double partial_sum, double tail_bound, int terms);

    double partial_sum() const { return partial_; }
    double tail_bound() const { return bound_; }
    int terms() const { return terms_; }

  private:
    double partial_;
    double bound_;
    int terms_;
};

inline constexpr double infinite_profile = std::numeric_limits<double>::infinity();

// Time index floor((n/m)(log n + c)).
long k_window(int n, int m, double c);

// First l with s(l) = e^{-lambda} sum_{u<=l} r^u > 1, by direct scan.
int w_star(double c, int p);
// floor(log(1 + e^lambda (r-1)) / log r), or floor(e^lambda) at r = 1.
int w_star_closed_form(double c, int p);

// Limiting TV profile f_p(c).
double f_profile(double c, int p);
// Same profile with the inner sums running to w* instead of w* - 1.
double f_profile_extended(double c, int p);
// 1 - f_p(c), evaluated without cancellation for very negative c.
double one_minus_f_profile(double c, int p);
// sum_l a_l (s(l) - 1)_+ with a_l = U-limit mass of {L_p = l}.
double f_series(double c, int p, SeriesControl const& ctrl = {});

// Limiting separation profile s_p(c).
double sep_profile(double c, int p);

// Limiting chi-square profile g_p(c) in closed form.
double chi2_profile(double c, int p);

// H_{q,p}(c) = sum_l a_l |s(l) - 1|^q.
double lq_profile(double c, int p, double q, SeriesControl const& ctrl = {});

// h_p(c) = sum_l a_l s(l) log s(l).
double kl_profile(double c, int p, SeriesControl const& ctrl = {});

// H_{inf,p}(c) = e^{-lambda}/(1-r) - 1 for r < 1, infinite_profile otherwise.
double linfty_profile(double c, int p);

// (n/m)(log n - log(-log(1-eps))), leading order of the separation mixing
// time; defined for p >= 2 only.
double sep_mixing_time(double eps, int n, int m, int p);

struct DoublyExpRow
{
    double c = 0.0;
    double f = 0.0;
    double ratio = 0.0;  // -log(1 - f_p(c)) / e^{-c}
    bool saturated = false;
};

struct DoublyExpReport
{
    int p = 1;
    std::vector<DoublyExpRow> rows;
    // |ratio - 1| shrinks as c decreases along the (unsaturated) grid.
    bool monotone_approach = true;
};

DoublyExpReport doubly_exp_check(std::span<double const> c_grid, int p);

}  // namespace wreathmix
