#ifndef FACETLAB_RATIONAL_HPP
#define FACETLAB_RATIONAL_HPP

#include <string>

#include <gmpxx.h>

namespace facetlab {

// num/den in lowest terms. GMP arithmetic requires canonical operands.
inline mpq_class make_ratio(const mpz_class& num, const mpz_class& den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

// Natural log of a positive rational, accurate to double precision even
// when numerator and denominator overflow a double.
double log_rational(const mpq_class& q);
double to_double(const mpq_class& q);
std::string to_string(const mpq_class& q);
std::string to_string(const mpz_class& z);

}  // namespace facetlab

#endif
