#pragma once

#include <optional>
#include <string>

#include "zform/vertex.hpp"

namespace zform {

struct ConformalData {
  FockElement omega;
  Rational central_charge;
};

ConformalData conformal_vector(const Lattice& L);

// L(n) = 1/2 sum_i sum_m :alpha_i(m) alpha_i'(n - m):
FockElement virasoro_act(const Lattice& L, int n, const FockElement& v);

bool central_charge_condition(const Integer& k, const Rational& c);

// Smallest k > 0 with k^2 c in 2Z, if any.
std::optional<Integer> minimal_k(const Rational& c);

struct OmegaMembership {
  bool dual_criterion = false;  // c_ii in 2Z and c_ij in Z
  bool hnf_member = false;      // coords(omega) in the y-basis span at (0, 2)
  std::size_t coordinates = 0;
  bool agree() const { return dual_criterion == hnf_member; }
};
OmegaMembership omega_membership(LatticeVOA& V);

struct ExtensionReport {
  GradedZSpan span;
  bool contains_k_omega = false;
  bool ranks_full = false;
  bool stable_under_k_virasoro = false;  // kL(-m) for m >= 2 within the window
  std::size_t added = 0;
  std::vector<std::string> failures;
};

// Adjoins (kL(-m_1))...(kL(-m_j)) v for 2 <= m_1 <= ... <= m_j and v running
// over the slice generators. Throws PreconditionError when k^2 c is odd or
// k omega fails to lie in the rational span at (0, 2).
ExtensionReport extend_by_k_omega(const Lattice& L, const GradedZSpan& span, const Integer& k,
                                  const ConformalData& conf, const Window& window);

bool lowest_weight_check(const Lattice& L, const FockElement& v);

}  // namespace zform
