#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "zform/cocycle.hpp"
#include "zform/fock.hpp"
#include "zform/zspan.hpp"

namespace zform {

// Coefficients keyed by the literal exponent of x.
struct OperatorSeries {
  std::map<int, FockElement> coeffs;
  Rational cutoff;
  const FockElement& at(int exponent) const;
  bool operator==(const OperatorSeries&) const = default;
};

// Output truncation: weight <= weight_cutoff and Heisenberg degree <= degree_cutoff.
struct Truncation {
  Rational weight;
  int degree = std::numeric_limits<int>::max();
};

// Finite set of bidegrees: sector coordinates within [-box_i, box_i] (after
// the coset offset), weight <= cutoff, Heisenberg degree <= degree_cutoff.
struct Window {
  std::vector<long> box;
  Rational cutoff;
  int degree_cutoff = 0;

  bool admits(const Lattice& L, const Bidegree& d) const;
  bool admits_sector(const LatticeVector& gamma) const;
  std::vector<LatticeVector> sectors(const LatticeVector& beta) const;
  std::vector<Bidegree> bidegrees(const Lattice& L, const LatticeVector& beta) const;
  Truncation truncation() const { return Truncation{cutoff, degree_cutoff}; }
};

Window make_window(const Lattice& L, const Rational& cutoff, std::optional<long> box = std::nullopt);
Window padded(const Window& w, long extra_box, int extra_weight);

using MultiIndex = std::vector<int>;
using MultiSeries = std::map<MultiIndex, FockElement>;

class LatticeVOA {
 public:
  explicit LatticeVOA(Lattice L);

  const Lattice& lattice() const { return L_; }
  const Cocycle& cocycle() const { return c_; }
  std::size_t rank() const { return L_.rank(); }

  // Coefficient of x^q in E^-(-a, x) = exp(sum_{n>0} a(-n) x^n / n).
  const HeisPoly& e_minus_coeff(const LatticeVector& a, int q);
  // y_{ij} = coefficient of x^j in E^-(-alpha_i, x) 1.
  const HeisPoly& y_poly(std::size_t i, int j);

  OperatorSeries e_minus_series(const LatticeVector& a, const FockElement& v, const Rational& cutoff);
  // E^+(-a, x) v; only exponents -p, p >= 0.
  OperatorSeries e_plus_series(const LatticeVector& a, const FockElement& v);

  // Y(iota(e_a), x) v for a in L, coefficients of weight within t.
  OperatorSeries generator_series(const LatticeVector& a, const FockElement& v, const Truncation& t);
  FockElement generator_coefficient(const LatticeVector& a, int exponent, const FockElement& v);

  // Y(u, x) v for u in V_L (integral sectors), coefficients within t.
  OperatorSeries vertex_series(const FockElement& u, const FockElement& v, const Truncation& t);

  // Coefficients of Y(e_{a_1},x_1)...Y(e_{a_k},x_k) iota(e_beta) for every
  // multi-exponent whose partial products all have weight <= cutoff.
  MultiSeries multi_product_iterated(const std::vector<LatticeVector>& as, const LatticeVector& beta,
                                     const Rational& cutoff);
  MultiSeries multi_product_normal(const std::vector<LatticeVector>& as, const LatticeVector& beta,
                                   const Rational& cutoff);

  // y-monomial basis of V_{beta+L, Z} at d, in frame order.
  std::vector<FockElement> zbasis_elements(const Bidegree& d);

  // Signed unit vector for +-alpha_i.
  std::vector<LatticeVector> generators() const;

 private:
  const std::vector<HeisPoly>& e_minus_table(const LatticeVector& a, int q);
  void apply_e_plus(const LatticeVector& a, const HeisPoly& p, std::vector<HeisPoly>& out);

  Lattice L_;
  Cocycle c_;
  std::map<LatticeVector, std::vector<HeisPoly>> e_minus_cache_;
};

// Z-span of all coefficients of products of generators applied to iota(e_beta),
// restricted to the bidegrees of `window`. Intermediate products are kept
// inside `through` (which must contain `window`).
struct ClosureStats {
  std::size_t pushed = 0;
  std::size_t applications = 0;
};
GradedZSpan generated_span(LatticeVOA& V, const LatticeVector& beta, const Window& window,
                           const std::optional<Window>& through = std::nullopt,
                           ClosureStats* stats = nullptr);

GradedZSpan ybasis_span(LatticeVOA& V, const LatticeVector& beta, const Window& window);

// Streams coefficients of products of at most `depth` generators applied to
// iota(e_beta), with intermediates inside the window.
void for_each_product(LatticeVOA& V, const LatticeVector& beta, const Window& window, int depth,
                      const std::function<void(const std::vector<int>& gens, const FockElement&)>& sink);

}  // namespace zform
