#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wreathmix::cli {

enum class Command
{
    profile,
    exact,
    occupancy,
    oracle_check,
    simulate,
};

enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 1,
    exit_certification = 2,
    exit_budget = 3,
};

struct RunConfig
{
    Command command = Command::profile;
    int n = 10;
    int p = 1;
    int m = 1;
    std::optional<long> k;
    std::optional<long> k_min;
    std::optional<long> k_max;
    std::optional<double> c_min;
    std::optional<double> c_max;
    double c_step = 0.5;
    std::vector<double> q_list;
    std::optional<double> eps;
    std::uint64_t seed = 0;
    std::uint64_t reps = 10000;
    double tol = 1e-12;
    std::string out_path;
    bool exact_rationals = false;
};

// Largest bit length of the common denominator (n)_m^k that cmd_exact will
// expand before stopping with exit_budget.
inline constexpr double exact_bit_budget = 8.0e6;

int cmd_profile(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_exact(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_occupancy(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle_check(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(RunConfig const& cfg, std::ostream& out, std::ostream& err);

// Parses argv (program name first) and dispatches. Writes CSV to --out when
// given, otherwise to `out`.
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace wreathmix::cli
