#include "doctest.h"
#include "oracles.hpp"
#include "zform/fock.hpp"
#include "zform/vertex.hpp"

using namespace zform;

namespace {

HeisMonomial mono(std::initializer_list<Mode> m) {
  HeisMonomial out(m);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FockElement> basis_up_to(const Lattice& L, const Rational& cutoff, long box) {
  std::vector<FockElement> out;
  Window w = make_window(L, cutoff, box);
  for (const auto& d : w.bidegrees(L, LatticeVector(L.rank(), Rational(0))))
    for (const auto& m : monomial_basis(L, d)) out.push_back(FockElement::basis(d.gamma, m));
  return out;
}

}  // namespace

TEST_CASE("zero modes read the sector") {
  const Lattice L = builtin::ii11();
  FockElement v = FockElement::basis({2, -1});
  CHECK(heis_act(L, {1, 0}, 0, v) == v.scaled(-1));
  CHECK(heis_act(L, {1, 1}, 0, v) == v.scaled(1));
}

TEST_CASE("annihilation against a creation mode") {
  const Lattice L = builtin::a1();
  FockElement v = FockElement::basis({0}, {Mode{0, 1}});
  CHECK(alpha_act(L, 0, 1, v) == FockElement::vacuum(1).scaled(2));
  CHECK(alpha_act(L, 0, 5, FockElement::basis({1})).is_zero());
  CHECK(alpha_act(L, 0, -1, v) == FockElement::basis({0}, mono({{0, 1}, {0, 1}})));
}

TEST_CASE("monomial frames") {
  const Lattice a1 = builtin::a1();
  auto f = monomial_basis(a1, Bidegree{{0}, 2});
  REQUIRE(f.size() == 2);
  CHECK(std::count(f.begin(), f.end(), HeisMonomial{Mode{0, 2}}) == 1);
  CHECK(std::count(f.begin(), f.end(), mono({{0, 1}, {0, 1}})) == 1);
  CHECK(monomial_basis(builtin::ii11(), Bidegree{{0, 0}, 0}) == std::vector<HeisMonomial>{HeisMonomial{}});
  CHECK(monomial_basis(a1, Bidegree{{1}, 1}) == std::vector<HeisMonomial>{HeisMonomial{}});
  for (std::size_t r = 1; r <= 3; ++r)
    for (int N = 0; N <= 7; ++N)
      CHECK(Integer(static_cast<unsigned long>(frame(r, N)->size())) == oracle::colored_partitions(r, N));
  CHECK_THROWS_AS(monomial_basis(a1, Bidegree{{1}, 0}), PreconditionError);
  CHECK_THROWS_AS(monomial_basis(a1, Bidegree{{0}, make_rational(1, 2)}), PreconditionError);
}

TEST_CASE("half-integral weights on the dual") {
  const Lattice a1 = builtin::a1();
  CHECK(term_weight(a1, {make_rational(1, 2)}, {}) == make_rational(1, 4));
  CHECK(monomial_basis(a1, Bidegree{{make_rational(1, 2)}, make_rational(5, 4)}).size() == 1);
}

TEST_CASE("coordinates") {
  const Lattice L = builtin::a1();
  const Bidegree d2{{0}, 2};
  CHECK(is_zero(coords(L, FockElement{}, d2)));
  FockElement e = FockElement::basis({1});
  CHECK(coords(L, e, Bidegree{{1}, 1}) == RatVector{1});
  FockElement v = alpha_act(L, 0, -1, FockElement::basis({0}, {Mode{0, 1}}));
  v.add(FockElement::basis({0}, {Mode{0, 2}}));
  RatVector c = coords(L, v, d2);
  CHECK(from_coords(L, d2, c) == v);
  CHECK(coords(L, v, Bidegree{{0}, 3}) == RatVector{0, 0, 0});
}

TEST_CASE("Heisenberg commutator relations") {
  for (const auto& L : {builtin::a1(), builtin::ii11()}) {
    const auto basis = basis_up_to(L, 4, 1);
    for (std::size_t i = 0; i < L.rank(); ++i)
      for (std::size_t j = 0; j < L.rank(); ++j)
        for (int m = -4; m <= 4; ++m)
          for (int n = -4; n <= 4; ++n)
            for (const auto& v : basis) {
              FockElement lhs = alpha_act(L, i, m, alpha_act(L, j, n, v)) - alpha_act(L, j, n, alpha_act(L, i, m, v));
              FockElement rhs;
              if (m + n == 0) rhs = v.scaled(Rational(m * L.gram()[i][j]));
              CHECK(lhs == rhs);
            }
  }
}

TEST_CASE("modes shift the weight") {
  const Lattice L = builtin::ii11();
  for (const auto& v : basis_up_to(L, 3, 1)) {
    const Rational w = bidegrees(L, v).front().weight;
    for (int n = -3; n <= 3; ++n) {
      FockElement x = alpha_act(L, 1, n, v);
      for (const auto& d : bidegrees(L, x)) {
        CHECK(d.weight == w - n);
        CHECK(d.gamma == v.terms.begin()->first);
      }
    }
  }
}

TEST_CASE("rendering is canonical") {
  FockElement v = FockElement::basis({1}, mono({{0, 1}, {0, 1}, {0, 3}}), make_rational(-3, 2));
  CHECK(render(v) == "(-3/2)*a1(-1)^2*a1(-3)*e(1)");
  CHECK(render(FockElement{}) == "0");
  CHECK(render(FockElement::vacuum(2)) == "(1)*1*e(0,0)");
}
