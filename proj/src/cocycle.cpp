#include "zform/cocycle.hpp"

#include <sstream>

namespace zform {

Cocycle build_cocycle(const Lattice& L) {
  if (!L.scale()) throw PreconditionError("cocycle construction needs a scale vector");
  const auto& n = *L.scale();
  const std::size_t r = L.rank();
  Integer den_lcm = 1;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Rational g = make_rational(L.gram()[i][j], n[i] * n[j]);
      den_lcm = lcm(den_lcm, Integer(g.get_den()));
    }
  Cocycle c;
  c.s = 2 * den_lcm;
  c.scale = n;
  c.eps0_base.assign(r, IntVector(r, Integer(0)));
  const Integer half = c.s / 2;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      Rational v = half * make_rational(L.gram()[i][j], n[i] * n[j]);
      c.eps0_base[i][j] = mod_floor(v.get_num(), c.s);
    }
  return c;
}

namespace {

IntVector dual_coords(const Cocycle& c, const LatticeVector& v) {
  if (v.size() != c.scale.size()) throw DimensionError("vector length differs from cocycle rank");
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational x = v[i] * c.scale[i];
    if (!is_integer(x)) throw PreconditionError("vector " + to_string(v) + " is not in the dual lattice");
    out[i] = x.get_num();
  }
  return out;
}

}  // namespace

Integer epsilon_exp(const Cocycle& c, const LatticeVector& a, const LatticeVector& b) {
  IntVector x = dual_coords(c, a), y = dual_coords(c, b);
  Integer acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (c.eps0_base[i][j] != 0) acc += x[i] * c.eps0_base[i][j] * y[j];
  }
  return mod_floor(acc, c.s);
}

Integer commutator_exp(const Cocycle& c, const LatticeVector& a, const LatticeVector& b) {
  return mod_floor(epsilon_exp(c, a, b) - epsilon_exp(c, b, a), c.s);
}

int sign(const Cocycle& c, const LatticeVector& a, const LatticeVector& b) {
  Integer e = epsilon_exp(c, a, b);
  if (e == 0) return 1;
  if (e == c.s / 2) return -1;
  throw PreconditionError("cocycle value is not a sign for " + to_string(a) + ", " + to_string(b));
}

bool verify_parity(const Cocycle& c, const Lattice& L) {
  if (c.s <= 0 || c.s % 2 != 0) return false;
  const std::size_t r = L.rank();
  if (c.eps0_base.size() != r) return false;
  const Integer half = c.s / 2;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      LatticeVector a(r, Rational(0)), b(r, Rational(0));
      a[i] = 1;
      b[j] = 1;
      // omega_s^{c0} = (-1)^{<a,b>} means c0 = (s/2)<a,b> mod s
      if (commutator_exp(c, a, b) != mod_floor(half * L.gram()[i][j], c.s)) return false;
      Integer e = epsilon_exp(c, a, b);
      if (e != 0 && e != half) return false;
    }
  return true;
}

std::string render_cocycle(const Cocycle& c) {
  std::ostringstream os;
  os << "s=" << c.s << "\n";
  for (std::size_t i = 0; i < c.eps0_base.size(); ++i) {
    os << "eps0_row" << i + 1 << "=";
    for (std::size_t j = 0; j < c.eps0_base[i].size(); ++j) os << (j ? "," : "") << c.eps0_base[i][j];
    os << "\n";
  }
  return os.str();
}

}  // namespace zform
