#include "wreathmix/cli.hpp"

#include "wreathmix/distances.hpp"
#include "wreathmix/occupancy.hpp"
#include "wreathmix/oracle.hpp"
#include "wreathmix/profiles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace wreathmix::cli {

namespace {

class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string num(BigRational const& q, bool exact)
{
    return exact ? to_string(q) : num(to_double(q));
}

std::string q_label(double q)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", q);
    return buf;
}

// RFC-4180 style row writer: comma separated, LF terminated.
class CsvWriter
{
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void row(std::vector<std::string> const& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                os_ << ',';
            os_ << quote(cells[i]);
        }
        os_ << '\n';
    }

  private:
    static std::string quote(std::string const& cell)
    {
        if (cell.find_first_of(",\"\n") == std::string::npos)
            return cell;
        std::string out = "\"";
        for (char ch : cell)
        {
            if (ch == '"')
                out += '"';
            out += ch;
        }
        return out + "\"";
    }

    std::ostream& os_;
};

std::vector<double> c_grid(RunConfig const& cfg)
{
    double const lo = cfg.c_min.value_or(-2.0);
    double const hi = cfg.c_max.value_or(lo);
    if (!(cfg.c_step > 0.0))
        throw UsageError("--c-step must be positive");
    if (hi < lo)
        throw UsageError("--c-max must not be below --c-min");
    auto const steps = static_cast<long>(std::floor((hi - lo) / cfg.c_step + 1e-9));
    std::vector<double> grid;
    for (long i = 0; i <= steps; ++i)
        grid.push_back(lo + static_cast<double>(i) * cfg.c_step);
    return grid;
}

void require_group(RunConfig const& cfg)
{
    if (cfg.n < 1 || cfg.p < 1)
        throw UsageError("need --n >= 1 and --p >= 1");
    if (cfg.m < 1 || cfg.m > cfg.n)
        throw UsageError("need 1 <= --m <= --n");
}

std::vector<long> k_values(RunConfig const& cfg)
{
    if (cfg.k)
    {
        if (*cfg.k < 0)
            throw UsageError("--k must be nonnegative");
        return {*cfg.k};
    }
    long const lo = cfg.k_min.value_or(0);
    long const hi = cfg.k_max.value_or(lo);
    if (lo < 0 || hi < lo)
        throw UsageError("need 0 <= --k-min <= --k-max");
    std::vector<long> out;
    for (long k = lo; k <= hi; ++k)
        out.push_back(k);
    return out;
}

}  // namespace

int cmd_profile(RunConfig const& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.p < 1)
        throw UsageError("need --p >= 1");
    auto const grid = c_grid(cfg);
    SeriesControl const ctrl{cfg.tol, 10000};
    CsvWriter csv(out);

    std::vector<std::string> header{"c", "lambda", "r", "w_star", "f_p", "s_p", "g_p", "h_p"};
    for (double q : cfg.q_list)
        header.push_back("H_" + q_label(q));
    header.push_back("H_inf");
    csv.row(header);

    auto series_cell = [&](double c, char const* name, auto&& eval) -> std::string {
        try
        {
            return num(eval());
        }
        catch (SeriesNotConverged const& e)
        {
            err << "warning: " << name << " at c=" << num(c) << ": " << e.what() << '\n';
            return "";
        }
    };

    for (double c : grid)
    {
        auto const pt = profile_point(c, cfg.p);
        std::vector<std::string> row{num(c), num(pt.lambda), num(pt.r), std::to_string(pt.w_star),
                                     num(f_profile(c, cfg.p)), num(sep_profile(c, cfg.p)),
                                     num(chi2_profile(c, cfg.p))};
        row.push_back(series_cell(c, "h_p", [&] { return kl_profile(c, cfg.p, ctrl); }));
        for (double q : cfg.q_list)
            row.push_back(series_cell(c, "H_q", [&] { return lq_profile(c, cfg.p, q, ctrl); }));
        double const h_inf = linfty_profile(c, cfg.p);
        row.push_back(std::isinf(h_inf) ? "" : num(h_inf));
        csv.row(row);
    }
    return exit_ok;
}

int cmd_exact(RunConfig const& cfg, std::ostream& out, std::ostream& err)
{
    require_group(cfg);
    for (double q : cfg.q_list)
    {
        if (!(q >= 1.0))
            throw UsageError("--q values must be >= 1");
    }
    // Rows either over an explicit k range or over a c grid via k_n(c).
    bool const by_window = !cfg.k && !cfg.k_min && !cfg.k_max && cfg.c_min;
    std::vector<std::pair<double, long>> rows;
    if (by_window)
    {
        for (double c : c_grid(cfg))
            rows.emplace_back(c, k_window(cfg.n, cfg.m, c));
    }
    else
    {
        for (long k : k_values(cfg))
            rows.emplace_back(0.0, k);
    }

    CsvWriter csv(out);
    std::vector<std::string> header;
    if (by_window)
        header.push_back("c");
    for (char const* h : {"k", "tv", "sep", "linfty", "chi2", "kl"})
        header.push_back(h);
    for (double q : cfg.q_list)
        header.push_back("lq_" + q_label(q));
    header.push_back("w_mu");
    // With --eps: the leading-order separation time and whether this row is
    // already below eps.
    std::optional<double> t_sep;
    if (cfg.eps)
    {
        if (cfg.p < 2)
            throw UsageError("--eps needs --p >= 2");
        t_sep = sep_mixing_time(*cfg.eps, cfg.n, cfg.m, cfg.p);
        header.push_back("t_sep");
        header.push_back("sep_le_eps");
    }
    csv.row(header);

    GroupParams const g(cfg.n, cfg.p);
    double const bits_per_step = std::log2(to_double(BigRational(falling_factorial(cfg.n, cfg.m))));
    for (auto const& [c, k] : rows)
    {
        if (static_cast<double>(k) * bits_per_step > exact_bit_budget)
        {
            err << "warning: k=" << k << " exceeds the exact arithmetic budget ("
                << exact_bit_budget << " bits); output truncated\n";
            return exit_budget;
        }
        MixtureSpec const spec(g, mu_subsets(SamplingParams(cfg.n, cfg.m, static_cast<int>(k))));
        auto const report = distance_report(spec, cfg.q_list);
        std::vector<std::string> row;
        if (by_window)
            row.push_back(num(c));
        row.push_back(std::to_string(k));
        row.push_back(num(report.tv, cfg.exact_rationals));
        row.push_back(num(report.sep, cfg.exact_rationals));
        row.push_back(num(report.linfty, cfg.exact_rationals));
        row.push_back(num(report.chi2, cfg.exact_rationals));
        row.push_back(num(report.kl));
        for (double q : cfg.q_list)
            row.push_back(num(report.lq.at(q)));
        row.push_back(report.w_mu ? std::to_string(*report.w_mu) : "");
        if (t_sep)
        {
            row.push_back(num(*t_sep));
            row.push_back(to_double(report.sep) <= *cfg.eps ? "1" : "0");
        }
        csv.row(row);
    }
    return exit_ok;
}

int cmd_occupancy(RunConfig const& cfg, std::ostream& out, std::ostream&)
{
    require_group(cfg);
    if (!cfg.k || *cfg.k < 0)
        throw UsageError("occupancy needs --k >= 0");
    auto const mu = mu_subsets(SamplingParams(cfg.n, cfg.m, static_cast<int>(*cfg.k)));
    CsvWriter csv(out);
    csv.row({"a", "mu", "u", "P_u"});
    for (int a = 0; a <= cfg.n; ++a)
    {
        int const u = cfg.n - a;
        csv.row({std::to_string(a), num(mu.occupied(a), cfg.exact_rationals), std::to_string(u),
                 num(mu.never_chosen(u), cfg.exact_rationals)});
    }
    return exit_ok;
}

int cmd_oracle_check(RunConfig const& cfg, std::ostream& out, std::ostream&)
{
    require_group(cfg);
    long const k_max = cfg.k_max.value_or(cfg.k.value_or(6));
    if (k_max < 0)
        throw UsageError("need --k-max >= 0");
    std::uint64_t const cap = std::getenv("WREATHMIX_BUDGET") ? enumeration_cap()
                                                              : default_oracle_cap;
    auto const report = mixture_certify(cfg.n, cfg.p, cfg.m, static_cast<int>(k_max), cap);
    CsvWriter csv(out);
    csv.row({"status", "k", "element", "check", "expected", "actual"});
    for (auto const& f : report.failures)
    {
        csv.row({"FAIL", std::to_string(f.k), f.element < 0 ? "" : std::to_string(f.element), f.what,
                 f.expected, f.actual});
    }
    csv.row({report.passed() ? "PASS" : "FAIL", std::to_string(k_max), "",
             std::to_string(report.checks) + " checks", "", ""});
    return report.passed() ? exit_ok : exit_certification;
}

int cmd_simulate(RunConfig const& cfg, std::ostream& out, std::ostream&)
{
    require_group(cfg);
    if (!cfg.k || *cfg.k < 0)
        throw UsageError("simulate needs --k >= 0");
    int const k = static_cast<int>(*cfg.k);
    GroupParams const g(cfg.n, cfg.p);
    std::mt19937_64 rng(cfg.seed);
    auto const hist = simulate_chain(cfg.n, cfg.p, cfg.m, k, cfg.reps, rng);

    MixtureSpec const spec(g, mu_subsets(SamplingParams(cfg.n, cfg.m, k)));
    auto const s = likelihood_profile(spec);
    double const tv_plugin = plugin_tv(hist, g);
    double const tv = to_double(tv_exact(spec).tv);

    CsvWriter csv(out);
    csv.row({"ell", "empirical", "exact", "uniform", "tv_plugin", "tv_exact"});
    for (int l = 0; l <= cfg.n; ++l)
    {
        BigRational const u_mass = u_level_mass(g, l);
        csv.row({std::to_string(l), num(hist.frequency(l)), num(to_double(BigRational(u_mass * s.at(l)))),
                 num(to_double(u_mass)), num(tv_plugin), num(tv)});
    }
    return exit_ok;
}

int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact and asymptotic mixing distances for colored top-m-to-random shuffles"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_options = [&cfg](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "number of cards");
        sub->add_option("--p", cfg.p, "number of colors");
        sub->add_option("--m", cfg.m, "cards moved per step");
        sub->add_option("--k", cfg.k, "number of steps");
        sub->add_option("--k-min", cfg.k_min, "first k of a range");
        sub->add_option("--k-max", cfg.k_max, "last k of a range");
        sub->add_option("--c-min", cfg.c_min, "first window parameter c");
        sub->add_option("--c-max", cfg.c_max, "last window parameter c");
        sub->add_option("--c-step", cfg.c_step, "grid step in c");
        sub->add_option("--q", cfg.q_list, "L^q exponents (repeatable)");
        sub->add_option("--eps", cfg.eps, "separation threshold");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--reps", cfg.reps, "Monte Carlo repetitions");
        sub->add_option("--tol", cfg.tol, "series truncation tolerance");
        sub->add_option("--out", cfg.out_path, "write CSV to this file");
        sub->add_flag("--exact-rationals", cfg.exact_rationals, "render exact values as num/den");
    };

    struct Entry
    {
        char const* name;
        char const* help;
        Command command;
    };
    Entry const entries[] = {
        {"profile", "tabulate the limiting profiles over a c grid", Command::profile},
        {"exact", "exact finite-n distances over a k range", Command::exact},
        {"occupancy", "exact occupied-count law", Command::occupancy},
        {"oracle-check", "brute-force certification on the enumerated group", Command::oracle_check},
        {"simulate", "Monte Carlo law of L_p versus exact", Command::simulate},
    };
    for (auto const& e : entries)
    {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_options(sub);
        sub->callback([&cfg, c = e.command] { cfg.command = c; });
    }

    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    try
    {
        app.parse(rest);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }
    if (cfg.eps && !(*cfg.eps > 0.0 && *cfg.eps < 1.0))
    {
        err << "error: --eps must lie in (0, 1)\n";
        return exit_usage;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out_path.empty())
    {
        file.open(cfg.out_path);
        if (!file)
        {
            err << "error: cannot open " << cfg.out_path << '\n';
            return exit_usage;
        }
        sink = &file;
    }

    try
    {
        switch (cfg.command)
        {
            case Command::profile:
                return cmd_profile(cfg, *sink, err);
            case Command::exact:
                return cmd_exact(cfg, *sink, err);
            case Command::occupancy:
                return cmd_occupancy(cfg, *sink, err);
            case Command::oracle_check:
                return cmd_oracle_check(cfg, *sink, err);
            case Command::simulate:
                return cmd_simulate(cfg, *sink, err);
        }
    }
    catch (UsageError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (BudgetExceeded const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_budget;
    }
    catch (std::invalid_argument const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (std::out_of_range const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace wreathmix::cli
