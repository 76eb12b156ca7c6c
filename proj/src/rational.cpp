#include "facetlab/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace facetlab {

namespace {

double log_integer(const mpz_class& z) {
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

}  // namespace

double log_rational(const mpq_class& q) {
  if (sgn(q) <= 0) throw std::domain_error("log of non-positive rational");
  return log_integer(q.get_num()) - log_integer(q.get_den());
}

double to_double(const mpq_class& q) { return q.get_d(); }

std::string to_string(const mpq_class& q) { return q.get_str(); }

std::string to_string(const mpz_class& z) { return z.get_str(); }

}  // namespace facetlab
