#include "doctest.h"
#include "oracles.hpp"
#include "zform/affine.hpp"

using namespace zform;

namespace {

PBWElement key(std::vector<PBWFactor> m, std::size_t u = 0) { return PBWElement{{PBWKey{std::move(m), u}, Rational(1)}}; }

PBWElement minus(PBWElement a, const PBWElement& b) {
  pbw_add(a, b, -1);
  return a;
}

PBWElement apply_bracket(AffineModule& M, const AffineBracket& br, const PBWElement& v) {
  PBWElement out;
  for (const auto& [c, mode, f] : br.terms) pbw_add(out, M.act(c, mode, v), Rational(f));
  pbw_add(out, v, Rational(br.central * M.level()));
  return out;
}

std::string data_path(const std::string& file) {
  const char* d = std::getenv("ZFORM_DATA");
  return std::string(d ? d : "data") + "/" + file;
}

}  // namespace

TEST_CASE("Lie data validation") {
  for (std::size_t n : {2, 3, 4}) CHECK(validate(sl_n(n)).ok());
  LieData g = sl_n(2);
  CHECK(g.names == std::vector<std::string>{"e", "h", "f"});
  CHECK(g.dual_coxeter == 2);
  LieData back = parse_lie(render_lie(sl_n(3)));
  CHECK(back.bracket == sl_n(3).bracket);
  CHECK(back.form == sl_n(3).form);
  CHECK(validate(back).ok());
  LieData broken = g;
  broken.bracket[g.index_of("e")][g.index_of("f")] = {{g.index_of("h"), Integer(2)}};
  broken.bracket[g.index_of("f")][g.index_of("e")] = {{g.index_of("h"), Integer(-2)}};
  CHECK_FALSE(validate(broken).form_invariant);
  CHECK_FALSE(validate(broken).ok());
  CHECK_THROWS_AS(parse_lie("dim 2\nnames a b\nbracket a c : 1 a\n"), ParseError);
  CHECK_THROWS_AS(parse_lie("dim 2\nnames a\n"), ParseError);
}

TEST_CASE("Lie data files") {
  LieData g = load_lie(data_path("sl2.lie"));
  CHECK(validate(g).ok());
  CHECK(g.bracket == sl_n(2).bracket);
  CHECK(g.form == sl_n(2).form);
  LieData g3 = load_lie(data_path("sl3.lie"));
  CHECK(g3.bracket == sl_n(3).bracket);
  CHECK(g3.roots().size() == 6);
}

TEST_CASE("affine brackets") {
  LieData g = sl_n(2);
  const std::size_t e = g.index_of("e"), h = g.index_of("h"), f = g.index_of("f");
  AffineBracket b = affine_bracket(g, e, 1, f, -1);
  REQUIRE(b.terms.size() == 1);
  CHECK(b.terms[0] == std::make_tuple(h, 0, Integer(1)));
  CHECK(b.central == 1);
  for (int m = -2; m <= 2; ++m)
    for (int n = -2; n <= 2; ++n) {
      AffineBracket z = affine_bracket(g, e, m, e, n);
      CHECK(z.terms.empty());
      CHECK(z.central == 0);
    }
  AffineBracket hh = affine_bracket(g, h, 1, h, -1);
  CHECK(hh.terms.empty());
  CHECK(hh.central == 2);
}

TEST_CASE("mode actions") {
  AffineModule M(sl_n(2), 1);
  const LieData& g = M.lie();
  const std::size_t e = g.index_of("e"), h = g.index_of("h"), f = g.index_of("f");
  for (std::size_t a = 0; a < 3; ++a) CHECK(M.act(a, 0, M.highest()).empty());
  CHECK(M.act(e, 1, M.act(f, -1, M.highest())) == M.highest());
  CHECK(M.act(e, -2, key({{f, 1}})) == key({{e, 2}, {f, 1}}));
  PBWElement swapped = M.act(f, -2, key({{e, 1}}));
  PBWElement expect = key({{e, 1}, {f, 2}});
  pbw_add(expect, key({{h, 3}}), -1);
  CHECK(swapped == expect);
}

TEST_CASE("Verma bases") {
  AffineModule M(sl_n(2), 1);
  CHECK(M.verma_basis(0).size() == 1);
  CHECK(M.verma_basis(1).size() == 3);
  CHECK(M.verma_basis(2).size() == 9);
  for (int n = 0; n <= 4; ++n)
    CHECK(Integer(static_cast<unsigned long>(M.verma_basis(n).size())) == oracle::colored_partitions(3, n));
  AffineModule M3(sl_n(3), 1);
  for (int n = 0; n <= 3; ++n)
    CHECK(Integer(static_cast<unsigned long>(M3.verma_basis(n).size())) == oracle::colored_partitions(8, n));
  AffineModule U(sl_n(2), 1, GModule::sl2_irreducible(sl_n(2), 2));
  CHECK(U.verma_basis(0).size() == 3);
  CHECK(U.verma_basis(2).size() == 27);
}

TEST_CASE("sl2 irreducibles are representations") {
  LieData g = sl_n(2);
  for (int d = 0; d <= 3; ++d) {
    GModule U = GModule::sl2_irreducible(g, d);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        RatMatrix A = to_rational(U.rho[a]), B = to_rational(U.rho[b]);
        RatMatrix AB = multiply(A, B), BA = multiply(B, A);
        RatMatrix want(U.dim, RatVector(U.dim, Rational(0)));
        for (const auto& [c, k] : g.bracket[a][b])
          for (std::size_t i = 0; i < U.dim; ++i)
            for (std::size_t j = 0; j < U.dim; ++j) want[i][j] += k * U.rho[c][i][j];
        for (std::size_t i = 0; i < U.dim; ++i)
          for (std::size_t j = 0; j < U.dim; ++j) CHECK(AB[i][j] - BA[i][j] == want[i][j]);
      }
  }
}

TEST_CASE("mode actions respect the affine bracket") {
  std::vector<AffineModule> modules;
  modules.emplace_back(sl_n(2), 1);
  modules.emplace_back(sl_n(2), 3);
  modules.emplace_back(sl_n(2), 1, GModule::sl2_irreducible(sl_n(2), 1));
  for (auto& M : modules) {
    const LieData& g = M.lie();
    for (int w = 0; w <= 3; ++w)
      for (const auto& k : M.verma_basis(w)) {
        const PBWElement v{{k, Rational(1)}};
        for (std::size_t a = 0; a < g.dim; ++a)
          for (std::size_t b = 0; b < g.dim; ++b)
            for (int m = -2; m <= 2; ++m)
              for (int n = -2; n <= 2; ++n) {
                PBWElement lhs = minus(M.act(a, m, M.act(b, n, v)), M.act(b, n, M.act(a, m, v)));
                CHECK(lhs == apply_bracket(M, affine_bracket(g, a, m, b, n), v));
              }
      }
  }
}

TEST_CASE("sl3 bracket spot check") {
  AffineModule M(sl_n(3), 2);
  const LieData& g = M.lie();
  for (int w = 0; w <= 2; ++w)
    for (const auto& k : M.verma_basis(w)) {
      const PBWElement v{{k, Rational(1)}};
      for (std::size_t a = 0; a < g.dim; ++a)
        for (std::size_t b = 0; b < g.dim; ++b)
          for (int m : {-1, 1})
            for (int n : {-1, 0, 1}) {
              PBWElement lhs = minus(M.act(a, m, M.act(b, n, v)), M.act(b, n, M.act(a, m, v)));
              CHECK(lhs == apply_bracket(M, affine_bracket(g, a, m, b, n), v));
            }
    }
}

TEST_CASE("partition operators") {
  AffineModule M(sl_n(2), 1);
  const LieData& g = M.lie();
  const std::size_t e = g.index_of("e");
  for (int w = 0; w <= 2; ++w)
    for (const auto& k : M.verma_basis(w)) {
      const PBWElement v{{k, Rational(1)}};
      for (int l = -3; l <= 3; ++l) CHECK(M.partition_operator(e, 1, l, v) == M.act(e, l, v));
      for (std::size_t a : g.roots())
        for (int kk = 2; kk <= 3; ++kk)
          for (int l = -3; l <= 3; ++l)
            CHECK(M.partition_operator(a, kk, l, v) == oracle::field_power(M, a, kk, l, v, kk * w + std::abs(l) + 1));
    }
  PBWElement cube = M.partition_operator(e, 3, -3, M.highest());
  CHECK(cube == M.divided_power(e, -1, 3, M.highest()));
  CHECK(M.divided_power(e, -1, 0, M.highest()) == M.highest());
}

TEST_CASE("Garland and PBW spans") {
  AffineModule M(sl_n(2), 1);
  AffineSpan G = M.garland_span(3), P = M.pbw_span(3);
  CHECK(G.at(0) == hnf({{1}}, 1));
  CHECK(G.at(1).rank() == 3);
  for (int w = 0; w <= 3; ++w) CHECK(G.at(w).contains_all(P.at(w)));
  auto q = M.irreducible_quotient(3);
  AffineSpan GQ = quotient_span(M, G, q), PQ = quotient_span(M, P, q);
  for (int w = 0; w <= 3; ++w) CHECK(GQ.at(w) == PQ.at(w));
  for (const auto& [w, slice] : G)
    for (const auto& b : slice.basis()) {
      const PBWElement v = M.from_coords(b, w);
      for (std::size_t x : M.lie().roots())
        for (std::size_t y : M.lie().roots())
          for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
              PBWElement out = M.divided_power(x, m, 2, M.divided_power(y, n, 1, v));
              for (const auto& [ww, part] : M.split_by_weight(out))
                if (ww <= 3) CHECK(G.at(ww).contains(M.coords(part, ww)));
            }
    }
}

TEST_CASE("irreducible quotients") {
  AffineModule M(sl_n(2), 1);
  auto q = M.irreducible_quotient(4);
  std::vector<std::size_t> dims;
  for (const auto& s : q) dims.push_back(s.dim);
  CHECK(dims == std::vector<std::size_t>{1, 3, 4, 7, 13});
  for (int w = 0; w <= 4; ++w) CHECK(Integer(static_cast<unsigned long>(q[w].dim)) == oracle::a1_total_dimension(w));
  const LieData& g = M.lie();
  const std::size_t e = g.index_of("e"), f = g.index_of("f");
  CHECK(is_zero(M.quotient_image(q[2], M.divided_power(e, -1, 2, M.highest()))));
  CHECK(is_zero(M.quotient_image(q[2], M.divided_power(f, -1, 2, M.highest()))));
  CHECK_FALSE(is_zero(M.quotient_image(q[2], M.act(e, -1, M.act(f, -1, M.highest())))));

  AffineModule M2(sl_n(2), 2);
  auto q2 = M2.irreducible_quotient(3);
  CHECK_FALSE(is_zero(M2.quotient_image(q2[2], M2.divided_power(e, -1, 2, M2.highest()))));
  CHECK(is_zero(M2.quotient_image(q2[3], M2.divided_power(e, -1, 3, M2.highest()))));

  AffineModule Z(sl_n(2), 0);
  auto q0 = Z.irreducible_quotient(2);
  CHECK(q0[0].dim == 1);
  CHECK(q0[1].dim == 0);
  CHECK(q0[2].dim == 0);
  CHECK_THROWS_AS(AffineModule(sl_n(2), -1).irreducible_quotient(1), PreconditionError);
  CHECK_THROWS_AS(AffineModule(sl_n(2), 1, GModule::sl2_irreducible(sl_n(2), 1)).gram(1), PreconditionError);
}

TEST_CASE("truncation of the vertex-operator span at k <= level") {
  for (long level : {1, 2}) {
    AffineModule M(sl_n(2), level);
    auto q = M.irreducible_quotient(3);
    AffineSpan low = quotient_span(M, M.vertex_span(3, static_cast<int>(level)), q);
    AffineSpan high = quotient_span(M, M.vertex_span(3, static_cast<int>(level) + 2), q);
    AffineSpan garland = quotient_span(M, M.garland_span(3), q);
    for (int w = 0; w <= 3; ++w) {
      CHECK(low.at(w) == high.at(w));
      CHECK(low.at(w) == garland.at(w));
    }
  }
}

TEST_CASE("affine conformal vector") {
  for (auto [n, level] : {std::pair<std::size_t, long>{2, 1}, {2, 2}, {3, 1}}) {
    AffineModule M(sl_n(n), level);
    PBWElement om = M.omega_affine();
    const Integer bound = 2 * (level + M.lie().dual_coxeter) * abs(determinant(M.lie().form));
    CHECK_FALSE(om.empty());
    for (const auto& [k, c] : om) {
      CHECK(pbw_weight(k.mono) == 2);
      CHECK(bound % c.get_den() == 0);
    }
  }
  AffineModule M(sl_n(2), 1);
  const LieData& g = M.lie();
  PBWElement expect = key({{g.index_of("e"), 1}, {g.index_of("f"), 1}});
  expect.begin()->second = make_rational(1, 3);
  pbw_add(expect, key({{g.index_of("h"), 1}, {g.index_of("h"), 1}}), make_rational(1, 12));
  pbw_add(expect, key({{g.index_of("h"), 2}}), make_rational(-1, 6));
  CHECK(M.omega_affine() == expect);
  CHECK_THROWS_AS(AffineModule(sl_n(2), -2).omega_affine(), PreconditionError);
}
