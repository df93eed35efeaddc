#include "zform/arith.hpp"

#include <climits>
#include <sstream>

namespace zform {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw PreconditionError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') t.push_back(ch);
  if (t.empty()) throw ParseError("empty number");
  auto valid_int = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string s) {
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    return s;
  };
  auto slash = t.find('/');
  if (slash == std::string::npos) {
    if (!valid_int(t)) throw ParseError("not an exact number: '" + text + "'");
    return Rational(Integer(strip_plus(t)));
  }
  std::string num = t.substr(0, slash), den = t.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("not an exact number: '" + text + "'");
  Integer d(den);
  if (d == 0) throw ParseError("zero denominator in '" + text + "'");
  return make_rational(Integer(strip_plus(num)), d);
}

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rational& x) { return x.get_str(); }

std::string to_string(const RatVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ')';
  return os.str();
}

std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ')';
  return os.str();
}

bool is_integer(const Rational& x) { return x.get_den() == 1; }

Integer to_integer(const Rational& x) {
  if (!is_integer(x)) throw PreconditionError("expected an integer, got " + x.get_str());
  return x.get_num();
}

long to_long(const Integer& x) {
  if (!x.fits_slong_p()) throw PreconditionError("integer out of range: " + x.get_str());
  return x.get_si();
}

Integer binomial(long n, long k) {
  if (k < 0) return 0;
  if (n >= 0) {
    if (k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
  }
  // C(n, k) = (-1)^k C(k - n - 1, k) for negative n.
  Integer r = binomial(k - n - 1, k);
  return (k % 2 == 0) ? r : Integer(-r);
}

Integer factorial(long n) {
  if (n < 0) throw PreconditionError("factorial of a negative number");
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  Integer am = abs(m);
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), am.get_mpz_t());
  return r;
}

RatVector to_rational(const IntVector& v) {
  RatVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out;
  out.reserve(m.size());
  for (const auto& row : m) out.push_back(to_rational(row));
  return out;
}

bool all_integer(const RatVector& v) {
  for (const auto& x : v)
    if (!is_integer(x)) return false;
  return true;
}

bool is_zero(const RatVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

// Bareiss fraction-free elimination.
Integer determinant(const IntMatrix& input) {
  const std::size_t n = input.size();
  if (n == 0) return 1;
  IntMatrix a = input;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  const std::size_t n = m.size();
  RatMatrix a = m;
  RatMatrix inv(n, RatVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw DimensionError("inverse of a non-square matrix");
    inv[i][i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b) {
  if (a.empty()) return {};
  const std::size_t inner = b.size();
  const std::size_t cols = b.empty() ? 0 : b[0].size();
  RatMatrix out(a.size(), RatVector(cols, Rational(0)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw DimensionError("matrix product dimension mismatch");
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

RatVector multiply(const RatMatrix& a, const RatVector& v) {
  RatVector out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != v.size()) throw DimensionError("matrix-vector dimension mismatch");
    for (std::size_t k = 0; k < v.size(); ++k) out[i] += a[i][k] * v[k];
  }
  return out;
}

RatMatrix transpose(const RatMatrix& m) {
  if (m.empty()) return {};
  RatMatrix t(m[0].size(), RatVector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

std::vector<std::size_t> independent_rows(const RatMatrix& m) {
  std::vector<std::size_t> chosen;
  std::vector<RatVector> echelon;  // reduced copies of chosen rows
  std::vector<std::size_t> pivots;
  for (std::size_t r = 0; r < m.size(); ++r) {
    RatVector v = m[r];
    for (std::size_t e = 0; e < echelon.size(); ++e) {
      const std::size_t p = pivots[e];
      if (v[p] == 0) continue;
      Rational f = v[p] / echelon[e][p];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * echelon[e][j];
    }
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) continue;
    chosen.push_back(r);
    echelon.push_back(std::move(v));
    pivots.push_back(p);
  }
  return chosen;
}

std::size_t matrix_rank(RatMatrix m) { return independent_rows(m).size(); }

}  // namespace zform
