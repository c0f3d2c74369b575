#pragma once

#include <gmpxx.h>

#include <string>

namespace tinv {

using BigInt = mpz_class;
// Reduced rational with positive denominator; gmpxx canonicalizes after every operation.
using ExactScalar = mpq_class;

std::string to_decimal(const BigInt& v);
BigInt parse_bigint(const std::string& text);

// Builds num/den, rejecting a zero denominator.
ExactScalar make_scalar(const BigInt& num, const BigInt& den = 1);
ExactScalar make_scalar(const std::string& num, const std::string& den = "1");

bool is_integer(const ExactScalar& v);

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

} // namespace tinv
