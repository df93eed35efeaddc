#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zform/cocycle.hpp"

using namespace zform;

namespace {

std::vector<Lattice> samples() {
  return {builtin::a1(), with_scale(builtin::a2()).lattice, builtin::a2_aligned(), builtin::ii11(), builtin::e8(),
          with_scale(Lattice({{4, 2}, {2, 6}})).lattice};
}

LatticeVector random_dual(const Lattice& L, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-6, 6);
  LatticeVector v(L.rank());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = make_rational(d(rng), (*L.scale())[i]);
  return v;
}

LatticeVector plus(LatticeVector a, const LatticeVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace

TEST_CASE("modulus and base residues") {
  Cocycle a1 = build_cocycle(builtin::a1());
  CHECK(a1.s == 4);
  CHECK(a1.eps0_base == IntMatrix{{0}});
  Cocycle h = build_cocycle(builtin::ii11());
  CHECK(h.s == 2);
  CHECK(h.eps0_base == IntMatrix{{0, 1}, {0, 0}});
  const Lattice e8 = builtin::e8();
  Cocycle c = build_cocycle(e8);
  CHECK(c.s == 2);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(c.eps0_base[i][j] == (i < j ? mod_floor(e8.gram()[i][j], 2) : Integer(0)));
  CHECK_THROWS_AS(build_cocycle(builtin::a2()), PreconditionError);
}

TEST_CASE("minimal even modulus matches a direct scan") {
  for (const auto& L : samples()) CHECK(build_cocycle(L).s == oracle::minimal_even_s(L));
}

TEST_CASE("epsilon and commutator examples") {
  Cocycle a1 = build_cocycle(builtin::a1());
  CHECK(epsilon_exp(a1, {0}, {make_rational(1, 2)}) == 0);
  CHECK(epsilon_exp(a1, {1}, {1}) == 0);
  CHECK(sign(a1, {1}, {1}) == 1);
  CHECK(commutator_exp(a1, {1}, {1}) == 0);
  Cocycle h = build_cocycle(builtin::ii11());
  CHECK(epsilon_exp(h, {1, 0}, {0, 1}) == 1);
  CHECK(sign(h, {1, 0}, {0, 1}) == -1);
  CHECK(commutator_exp(h, {1, 0}, {0, 1}) == 1);
  CHECK(commutator_exp(h, {1, 1}, {1, 1}) == 0);
}

TEST_CASE("parity holds for every construction") {
  for (const auto& L : samples()) CHECK(verify_parity(build_cocycle(L), L));
}

TEST_CASE("corrupted residues fail the parity check") {
  Cocycle h = build_cocycle(builtin::ii11());
  h.eps0_base[0][1] = 0;
  CHECK_FALSE(verify_parity(h, builtin::ii11()));
  const Lattice e8 = builtin::e8();
  Cocycle c = build_cocycle(e8);
  c.eps0_base[0][2] = (c.eps0_base[0][2] + 1) % 2;
  CHECK_FALSE(verify_parity(c, e8));
}

TEST_CASE("bilinearity and the cocycle identity") {
  std::mt19937 rng(11);
  for (const auto& L : samples()) {
    Cocycle c = build_cocycle(L);
    for (int t = 0; t < 60; ++t) {
      LatticeVector a = random_dual(L, rng), a2 = random_dual(L, rng), b = random_dual(L, rng), g = random_dual(L, rng);
      CHECK(epsilon_exp(c, plus(a, a2), b) == mod_floor(epsilon_exp(c, a, b) + epsilon_exp(c, a2, b), c.s));
      CHECK(mod_floor(epsilon_exp(c, a, b) + epsilon_exp(c, plus(a, b), g), c.s) ==
            mod_floor(epsilon_exp(c, b, g) + epsilon_exp(c, a, plus(b, g)), c.s));
      CHECK(commutator_exp(c, a, b) == mod_floor(-commutator_exp(c, b, a), c.s));
    }
  }
}

TEST_CASE("signs on the lattice are plus or minus one") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-4, 4);
  for (const auto& L : samples()) {
    Cocycle c = build_cocycle(L);
    for (int t = 0; t < 50; ++t) {
      LatticeVector a(L.rank()), b(L.rank());
      for (std::size_t i = 0; i < L.rank(); ++i) {
        a[i] = d(rng);
        b[i] = d(rng);
      }
      const Integer e = epsilon_exp(c, a, b);
      CHECK((e == 0 || e == c.s / 2));
      // omega_s^{c0} = (-1)^{<a,b>}
      const bool odd = to_integer(L.inner(a, b)) % 2 != 0;
      CHECK(commutator_exp(c, a, b) == (odd ? c.s / 2 : Integer(0)));
    }
  }
}

TEST_CASE("report format") {
  CHECK(render_cocycle(build_cocycle(builtin::ii11())) == "s=2\neps0_row1=0,1\neps0_row2=0,0\n");
}
