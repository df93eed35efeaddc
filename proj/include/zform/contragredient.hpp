#pragma once

#include <optional>
#include <string>

#include "zform/virasoro.hpp"

namespace zform {

// Invariant bilinear form on V_{L°} with (1,1) = 1. Heisenberg modes satisfy
// (h(n)u, v) = -(u, h(-n)v), and (iota(e_g), iota(e_{-g})) = sector_constant(g).
class InvariantForm {
 public:
  explicit InvariantForm(const LatticeVOA& V) : L_(V.lattice()), c_(V.cocycle()) {}

  Rational pairing(const FockElement& u, const FockElement& v) const;
  Rational sector_constant(const LatticeVector& gamma) const;
  // Heisenberg part between creation monomials of equal degree.
  Rational heisenberg(const HeisMonomial& p, const HeisMonomial& q) const;
  // P[a][b] = (m_a e_gamma, m_b e_{-gamma}) over the frames at d and its opposite.
  RatMatrix block(const Bidegree& d) const;

  const Lattice& lattice() const { return L_; }

 private:
  Lattice L_;
  Cocycle c_;
};

Bidegree opposite(const Bidegree& d);

// L(1)^n v / n!
FockElement l1_divided_action(const Lattice& L, const FockElement& v, int n);

// Slice at d of the dual lattice of the slice at opposite(d). Throws
// PreconditionError on a degenerate block or rank-deficient slice.
ZSpanSlice dual_slice(const InvariantForm& form, const Bidegree& d, const ZSpanSlice& opposite_slice);
GradedZSpan dual_span(const InvariantForm& form, const GradedZSpan& span);

struct PairingWitness {
  Bidegree degree;
  RatVector u, v;
  Rational value;
};

struct SelfPairingVerdict {
  bool pass = true;
  std::size_t pairs = 0;
  std::optional<PairingWitness> witness;
};
SelfPairingVerdict certify_self_pairing_integral(const InvariantForm& form, const GradedZSpan& span);

struct InvarianceVerdict {
  bool pass = true;
  std::size_t checks = 0;
  std::string witness;
};
// (Y(u)_t v, w) = (-1)^{wt u} (v, Y(u)_{-t-2 wt u} w) for homogeneous u with L(1)u = 0.
InvarianceVerdict check_invariance(LatticeVOA& V, const InvariantForm& form, const FockElement& u,
                                   const std::vector<FockElement>& vs, const std::vector<FockElement>& ws);

}  // namespace zform
