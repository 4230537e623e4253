#include "wreathmix/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace wreathmix {

BigInt factorial(unsigned long n)
{
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

BigInt binomial(unsigned long n, unsigned long k)
{
    if (k > n)
        return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

BigInt falling_factorial(unsigned long x, unsigned long m)
{
    if (x < m)
        return 0;
    BigInt out = 1;
    for (unsigned long i = 0; i < m; ++i)
        out *= x - i;
    return out;
}

BigInt power(const BigInt& base, unsigned long exponent)
{
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

BigInt level_weight(unsigned long u, unsigned long p)
{
    return factorial(u) * power(BigInt(p), u);
}

std::string to_string(const BigRational& q)
{
    return q.get_str();
}

double to_double(const BigRational& q)
{
    return q.get_d();
}

double log_of(const BigInt& z)
{
    if (sgn(z) <= 0)
        throw std::domain_error("log_of: argument must be positive");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

double log_of(const BigRational& q)
{
    if (sgn(q) <= 0)
        throw std::domain_error("log_of: argument must be positive");
    const double d = q.get_d();
    if (std::isnormal(d) && std::isfinite(d))
        return std::log(d);
    return log_of(BigInt(q.get_num())) - log_of(BigInt(q.get_den()));
}

}  // namespace wreathmix
