#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace wreathmix {

using BigInt = mpz_class;
using BigRational = mpq_class;

// n!
BigInt factorial(unsigned long n);

// C(n, k); zero when k > n.
BigInt binomial(unsigned long n, unsigned long k);

// Falling factorial (x)_m = x(x-1)...(x-m+1), with (x)_m = 0 for x < m
// and (x)_0 = 1.
BigInt falling_factorial(unsigned long x, unsigned long m);

BigInt power(const BigInt& base, unsigned long exponent);

// u! * p^u, the likelihood-ratio weight of the nested set A_u.
BigInt level_weight(unsigned long u, unsigned long p);

// Canonical "num/den" (or "num" when den = 1).
std::string to_string(const BigRational& q);

double to_double(const BigRational& q);

// Natural log of a strictly positive rational, accurate even when the
// value overflows a double.
double log_of(const BigRational& q);
double log_of(const BigInt& z);

}  // namespace wreathmix
