#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zform {

using Integer = mpz_class;
using Rational = mpq_class;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;
using IntMatrix = std::vector<IntVector>;
using RatMatrix = std::vector<RatVector>;

// Error taxonomy shared by every module. The CLI maps each kind to its own
// exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

Rational make_rational(const Integer& num, const Integer& den = 1);
Rational parse_rational(const std::string& text);
std::string to_string(const Integer& x);
std::string to_string(const Rational& x);
std::string to_string(const RatVector& v);
std::string to_string(const IntVector& v);

bool is_integer(const Rational& x);
Integer to_integer(const Rational& x);  // throws unless is_integer(x)
long to_long(const Integer& x);          // throws if out of range

Integer binomial(long n, long k);        // generalized: n may be negative
Integer factorial(long n);
Integer floor_div(const Integer& a, const Integer& b);
Integer mod_floor(const Integer& a, const Integer& m);  // in [0, |m|)

RatVector to_rational(const IntVector& v);
RatMatrix to_rational(const IntMatrix& m);
bool all_integer(const RatVector& v);
bool is_zero(const RatVector& v);

Integer determinant(const IntMatrix& m);
std::optional<RatMatrix> inverse(const RatMatrix& m);
RatMatrix multiply(const RatMatrix& a, const RatMatrix& b);
RatVector multiply(const RatMatrix& a, const RatVector& v);
RatMatrix transpose(const RatMatrix& m);
std::size_t matrix_rank(RatMatrix m);
// Row indices of a maximal linearly independent subset, chosen greedily.
std::vector<std::size_t> independent_rows(const RatMatrix& m);

}  // namespace zform
