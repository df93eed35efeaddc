#include "doctest.h"
#include "oracles.hpp"
#include "zform/virasoro.hpp"

using namespace zform;

namespace {

HeisMonomial mono(std::initializer_list<Mode> m) {
  HeisMonomial out(m);
  std::sort(out.begin(), out.end());
  return out;
}

LatticeVector neg(LatticeVector v) {
  for (auto& x : v) x = -x;
  return v;
}

}  // namespace

TEST_CASE("E-minus coefficients") {
  LatticeVOA V(builtin::a1());
  const FockElement one = FockElement::vacuum(1);
  auto s = V.e_minus_series({1}, one, 4);
  CHECK(s.at(0) == one);
  FockElement x2;
  x2.add_term({0}, {Mode{0, 2}}, make_rational(1, 2));
  x2.add_term({0}, mono({{0, 1}, {0, 1}}), make_rational(1, 2));
  CHECK(s.at(2) == x2);
  CHECK(V.e_minus_coeff({1}, 3) == oracle::exp_series({1}, 3));
  FockElement v = FockElement::basis({1}, {Mode{0, 2}});
  CHECK(V.e_minus_series({1}, v, 5).at(0) == v);
  LatticeVOA W(builtin::ii11());
  for (const LatticeVector& a : {LatticeVector{1, 0}, LatticeVector{1, -1}, LatticeVector{2, 3}})
    for (int q = 0; q <= 6; ++q) CHECK(W.e_minus_coeff(a, q) == oracle::exp_series(a, q));
}

TEST_CASE("E-minus inverse law") {
  LatticeVOA V(builtin::ii11());
  for (const LatticeVector& a : {LatticeVector{1, 0}, LatticeVector{1, 1}, LatticeVector{-2, 1}})
    for (int Q = 0; Q <= 6; ++Q) {
      HeisPoly total;
      for (int q = 0; q <= Q; ++q) poly_add(total, poly_product(V.e_minus_coeff(a, q), V.e_minus_coeff(neg(a), Q - q)));
      CHECK(total == (Q == 0 ? HeisPoly{{HeisMonomial{}, Rational(1)}} : HeisPoly{}));
    }
}

TEST_CASE("E-plus coefficients") {
  LatticeVOA V(builtin::a1());
  FockElement e = FockElement::basis({1});
  auto s = V.e_plus_series({1}, e);
  CHECK(s.coeffs.size() == 1);
  CHECK(s.at(0) == e);
  FockElement h = FockElement::basis({0}, {Mode{0, 1}});
  CHECK(V.e_plus_series({1}, h).at(-1) == FockElement::vacuum(1).scaled(-2));
  FockElement h2 = FockElement::basis({0}, mono({{0, 1}, {0, 1}}));
  auto s2 = V.e_plus_series({1}, h2);
  CHECK(s2.at(-1) == h.scaled(-4));
  CHECK(s2.at(-2) == FockElement::vacuum(1).scaled(4));
}

TEST_CASE("generator operators") {
  LatticeVOA V(builtin::a1());
  const Lattice& L = V.lattice();
  const int eps = sign(V.cocycle(), {1}, {-1});
  auto s = V.generator_series({1}, FockElement::basis({-1}), Truncation{4});
  CHECK(s.at(-2) == FockElement::vacuum(1).scaled(eps));
  CHECK(s.at(-1) == FockElement::basis({0}, {Mode{0, 1}}, eps));
  CHECK(s.at(-3).is_zero());
  CHECK(V.generator_coefficient({1}, -1, FockElement::basis({-1})) == s.at(-1));
  FockElement v = FockElement::basis({1}, {Mode{0, 2}});
  auto id = V.generator_series({0}, v, Truncation{5});
  CHECK(id.coeffs.size() == 1);
  CHECK(id.at(0) == v);
  auto t = V.generator_series({-1}, v, Truncation{6});
  for (const auto& [e, c] : t.coeffs)
    for (const auto& d : bidegrees(L, c)) {
      CHECK(d.gamma == LatticeVector{0});
      CHECK(d.weight == 1 + 3 + e);
    }
}

TEST_CASE("multi-products agree along both evaluation paths") {
  LatticeVOA V(builtin::a1());
  auto A = V.multi_product_iterated({{1}, {-1}}, {0}, 4);
  auto B = V.multi_product_normal({{1}, {-1}}, {0}, 4);
  CHECK(A.size() > 0);
  CHECK(A == B);
  auto C = V.multi_product_iterated({{1}, {1}, {-1}}, {make_rational(1, 2)}, 4);
  CHECK(C == V.multi_product_normal({{1}, {1}, {-1}}, {make_rational(1, 2)}, 4));
  LatticeVOA W(builtin::ii11());
  auto P = W.multi_product_iterated({{1, 0}, {0, 1}}, {1, 0}, 3);
  CHECK(P == W.multi_product_normal({{1, 0}, {0, 1}}, {1, 0}, 3));
  CHECK(P.size() > 0);
  for (const auto& [idx, c] : P)
    for (const auto& d : bidegrees(W.lattice(), c)) CHECK(d.gamma == LatticeVector{2, 1});
  auto single = V.multi_product_iterated({{1}}, {-1}, 3);
  auto gen = V.generator_series({1}, FockElement::basis({-1}), Truncation{3});
  for (const auto& [idx, c] : single) CHECK(gen.at(idx[0]) == c);
}

TEST_CASE("y-basis elements") {
  LatticeVOA V(builtin::a1());
  auto b = V.zbasis_elements(Bidegree{{0}, 2});
  REQUIRE(b.size() == 2);
  FockElement y12;
  y12.add_term({0}, {Mode{0, 2}}, make_rational(1, 2));
  y12.add_term({0}, mono({{0, 1}, {0, 1}}), make_rational(1, 2));
  const FockElement y11sq = FockElement::basis({0}, mono({{0, 1}, {0, 1}}));
  CHECK(std::count(b.begin(), b.end(), y12) == 1);
  CHECK(std::count(b.begin(), b.end(), y11sq) == 1);
  CHECK(V.zbasis_elements(Bidegree{{make_rational(1, 2)}, make_rational(1, 4)}) ==
        std::vector<FockElement>{FockElement::basis({make_rational(1, 2)})});
  CHECK(V.zbasis_elements(Bidegree{{0}, 3}).size() == 3);
  LatticeVOA W(builtin::ii11());
  for (int n = 0; n <= 4; ++n)
    CHECK(Integer(static_cast<unsigned long>(W.zbasis_elements(Bidegree{{1, -1}, n - 1}).size())) ==
          oracle::colored_partitions(2, n));
}

TEST_CASE("generated spans") {
  LatticeVOA V(builtin::a1());
  const Lattice& L = V.lattice();
  Window w = make_window(L, 3, 2);
  auto G = generated_span(V, {0}, w);
  CHECK(G.at(Bidegree{{0}, 0}) == hnf({{1}}, 1));
  CHECK(G.at(Bidegree{{0}, 1}) == hnf({{1}}, 1));
  CHECK(certify_integral_form(L, G, ybasis_span(V, {0}, w), w.bidegrees(L, {0})).ok());
  const LatticeVector half{make_rational(1, 2)};
  auto H = generated_span(V, half, w);
  CHECK(H.at(Bidegree{half, make_rational(1, 4)}) == hnf({{1}}, 1));
  CHECK(certify_integral_form(L, H, ybasis_span(V, half, w), w.bidegrees(L, half)).ok());
  std::size_t products = 0;
  for_each_product(V, {0}, w, 2, [&](const std::vector<int>& gens, const FockElement& e) {
    ++products;
    if (gens.empty()) CHECK(e == FockElement::vacuum(1));
    for (const auto& d : bidegrees(L, e)) CHECK(G.at(d).contains(coords(L, e, d)));
  });
  CHECK(products > 1);
}

TEST_CASE("A2 through the aligned base") {
  LatticeVOA V(builtin::a2_aligned());
  const Lattice& L = V.lattice();
  // the generator e^{b2} has weight 3, so generate past the certified range
  Window w = make_window(L, 2);
  auto G = generated_span(V, {0, 0}, make_window(L, 5));
  auto v = certify_integral_form(L, G, ybasis_span(V, {0, 0}, w), w.bidegrees(L, {0, 0}));
  CHECK(v.ok());
  CHECK(v.slices.size() > 5);
}

TEST_CASE("locality of generator operators") {
  for (const auto& lat : {builtin::a1(), builtin::ii11()}) {
    LatticeVOA V(lat);
    const Lattice& L = V.lattice();
    const auto gens = V.generators();
    std::vector<FockElement> targets{FockElement::vacuum(L.rank()), FockElement::basis(gens[0])};
    for (const auto& a : gens)
      for (const auto& b : gens) {
        const int N = static_cast<int>(Integer(abs(to_integer(L.inner(a, b)))).get_si()) + 2;
        for (const auto& v : targets) {
          std::map<std::pair<int, int>, FockElement> C;
          auto comm = [&](int m1, int m2) -> const FockElement& {
            auto key = std::make_pair(m1, m2);
            auto it = C.find(key);
            if (it != C.end()) return it->second;
            FockElement x = V.generator_coefficient(a, m1, V.generator_coefficient(b, m2, v)) -
                            V.generator_coefficient(b, m2, V.generator_coefficient(a, m1, v));
            return C.emplace(key, x).first->second;
          };
          for (int p1 = -4; p1 <= 2; ++p1)
            for (int p2 = -4; p2 <= 2; ++p2) {
              FockElement total;
              for (int j = 0; j <= N; ++j) {
                const Integer c = binomial(N, j) * ((j % 2) ? -1 : 1);
                total.add(comm(p1 - (N - j), p2 - j), Rational(c));
              }
              CHECK(total.is_zero());
            }
        }
      }
  }
}

TEST_CASE("general vertex operators") {
  LatticeVOA V(builtin::a1());
  const Lattice& L = V.lattice();
  Window w = make_window(L, 3, 2);
  std::vector<FockElement> basis;
  for (const auto& d : w.bidegrees(L, {0}))
    for (const auto& e : V.zbasis_elements(d)) basis.push_back(e);
  const Truncation t{3};
  const FockElement one = FockElement::vacuum(1);
  const FockElement h = FockElement::basis({0}, {Mode{0, 1}});
  for (const auto& v : basis) {
    auto id = V.vertex_series(one, v, t);
    CHECK(id.coeffs.size() == 1);
    CHECK(id.at(0) == v);
    auto hs = V.vertex_series(h, v, t);
    const Rational wv = bidegrees(L, v).at(0).weight;
    for (int e = -6; e <= 3; ++e)
      if (wv + e + 1 <= 3) CHECK(hs.at(e) == alpha_act(L, 0, -e - 1, v));
    for (const auto& a : V.generators()) CHECK(V.vertex_series(FockElement::basis(a), v, t) == V.generator_series(a, v, t));
  }
}

TEST_CASE("skew symmetry") {
  LatticeVOA V(builtin::a1());
  const Lattice& L = V.lattice();
  Window w = make_window(L, 2, 1);
  std::vector<FockElement> basis;
  for (const auto& d : w.bidegrees(L, {0}))
    for (const auto& e : V.zbasis_elements(d)) basis.push_back(e);
  const int W = 3;
  for (const auto& u : basis)
    for (const auto& v : basis) {
      const Rational wu = bidegrees(L, u)[0].weight, wv = bidegrees(L, v)[0].weight;
      auto lhs = V.vertex_series(u, v, Truncation{W});
      auto rhs_src = V.vertex_series(v, u, Truncation{W});
      for (int t = -8; wu + wv + t <= W; ++t) {
        FockElement rhs;
        for (int j = 0; j <= W + 1; ++j) {
          FockElement term = rhs_src.at(t - j).scaled(((t - j) % 2 == 0) ? 1 : -1);
          for (int i = 0; i < j; ++i) term = virasoro_act(L, -1, term);
          rhs.add(term, Rational(1) / Rational(factorial(j)));
        }
        CHECK(lhs.at(t) == rhs);
      }
    }
}
