#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "zform/zspan.hpp"

namespace zform {

using SparseInt = std::vector<std::pair<std::size_t, Integer>>;

struct LieData {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> names;
  std::vector<std::vector<SparseInt>> bracket;  // [a][b] -> combination
  IntMatrix form;
  long dual_coxeter = 0;
  // anti-involution with sigma(x_alpha) = x_{-alpha}; used for the contravariant form
  std::vector<SparseInt> involution;
  std::vector<bool> is_root;

  std::size_t index_of(const std::string& n) const;
  std::vector<std::size_t> roots() const;
};

LieData sl_n(std::size_t n);
LieData parse_lie(const std::string& text);
LieData load_lie(const std::string& path);
LieData lie_by_name(const std::string& name_or_path);
// Text format accepted by parse_lie.
std::string render_lie(const LieData& g);

struct LieValidation {
  bool antisymmetric = true;
  bool jacobi = true;
  bool form_symmetric = true;
  bool form_invariant = true;
  bool involution_ok = true;
  std::vector<std::string> failures;
  bool ok() const { return antisymmetric && jacobi && form_symmetric && form_invariant && involution_ok; }
};
LieValidation validate(const LieData& g);

// Finite-dimensional g-module with integral action matrices rho[a][row][col].
struct GModule {
  std::size_t dim = 1;
  std::vector<IntMatrix> rho;
  static GModule trivial(const LieData& g);
  // Highest weight d for sl2 with basis order e, h, f.
  static GModule sl2_irreducible(const LieData& g, int d);
};

// a(-mode), mode >= 1
struct PBWFactor {
  std::size_t index = 0;
  int mode = 1;
  auto operator<=>(const PBWFactor&) const = default;
};
using PBWMonomial = std::vector<PBWFactor>;

struct PBWKey {
  PBWMonomial mono;
  std::size_t u = 0;
  auto operator<=>(const PBWKey&) const = default;
};
using PBWElement = std::map<PBWKey, Rational>;

int pbw_weight(const PBWMonomial& m);
void pbw_add(PBWElement& into, const PBWElement& v, const Rational& scale = 1);
std::string render(const LieData& g, const PBWElement& v);

// Formal combination of modes plus a central multiple.
struct AffineBracket {
  std::vector<std::tuple<std::size_t, int, Integer>> terms;  // (index, mode, coefficient)
  Integer central = 0;
};
AffineBracket affine_bracket(const LieData& g, std::size_t a, int m, std::size_t b, int n);

using AffineSpan = std::map<int, ZSpanSlice>;

struct QuotientSlice {
  int weight = 0;
  std::size_t verma_dim = 0;
  std::size_t dim = 0;
  RatMatrix image;  // independent rows of the Gram matrix
};

class AffineModule {
 public:
  AffineModule(LieData g, Integer level, GModule U);
  AffineModule(LieData g, Integer level) : AffineModule(g, level, GModule::trivial(g)) {}

  const LieData& lie() const { return g_; }
  const Integer& level() const { return level_; }
  const GModule& module() const { return U_; }

  PBWElement highest(std::size_t u = 0) const;
  PBWElement act(std::size_t a, int n, const PBWElement& v);
  const PBWElement& act_key(std::size_t a, int n, const PBWKey& k);

  const std::vector<PBWKey>& verma_basis(int weight);
  RatVector coords(const PBWElement& v, int weight);
  PBWElement from_coords(const RatVector& c, int weight);
  std::map<int, PBWElement> split_by_weight(const PBWElement& v) const;

  // x_a(m)^k / k!
  PBWElement divided_power(std::size_t a, int m, int k, const PBWElement& v);
  // Coefficient of x^{-l-k} in Y(x_a(-1)1, x)^k / k! as the partition sum.
  PBWElement partition_operator(std::size_t a, int k, int l, const PBWElement& v);

  AffineSpan garland_span(int cutoff);
  AffineSpan pbw_span(int cutoff);
  // Closure of the U basis under partition operators with 1 <= k <= kmax.
  AffineSpan vertex_span(int cutoff, int kmax);

  // Contravariant form on the vacuum module: (1,1) = 1, a(n)^dagger = sigma(a)(-n).
  Rational contravariant(const PBWElement& u, const PBWElement& v);
  RatMatrix gram(int weight);
  std::vector<QuotientSlice> irreducible_quotient(int cutoff);
  RatVector quotient_image(const QuotientSlice& q, const PBWElement& v);

  PBWElement omega_affine();

 private:

  LieData g_;
  Integer level_;
  GModule U_;
  std::map<std::tuple<std::size_t, int, PBWKey>, PBWElement> memo_;
  std::map<int, std::vector<PBWKey>> bases_;
  std::map<int, std::map<PBWKey, std::size_t>> index_;
};

// Quotient images of a span, as a span over the quotient coordinates.
AffineSpan quotient_span(AffineModule& M, const AffineSpan& span, const std::vector<QuotientSlice>& q);

}  // namespace zform
