#include "zform/virasoro.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

namespace zform {

ConformalData conformal_vector(const Lattice& L) {
  const auto& c = L.dual_basis();
  FockElement omega;
  const LatticeVector zero(L.rank(), Rational(0));
  for (std::size_t i = 0; i < L.rank(); ++i)
    for (std::size_t j = 0; j < L.rank(); ++j) {
      if (c[j][i] == 0) continue;
      HeisMonomial m{Mode{static_cast<int>(i), 1}, Mode{static_cast<int>(j), 1}};
      std::sort(m.begin(), m.end());
      omega.add_term(zero, m, c[j][i] / 2);
    }
  return ConformalData{omega, Rational(static_cast<long>(L.rank()))};
}

FockElement virasoro_act(const Lattice& L, int n, const FockElement& v) {
  FockElement out;
  if (v.is_zero()) return out;
  const int D = v.max_degree();
  const int bound = std::abs(n) + D + 1;
  const auto& c = L.dual_basis();
  for (std::size_t i = 0; i < L.rank(); ++i) {
    RatVector a(L.rank(), Rational(0)), b(L.rank());
    a[i] = 1;
    for (std::size_t j = 0; j < L.rank(); ++j) b[j] = c[j][i];
    for (int m = -bound; m <= bound; ++m) {
      const int k = n - m;
      // the larger mode acts first
      FockElement w = (m <= k) ? heis_act(L, a, m, heis_act(L, b, k, v))
                               : heis_act(L, b, k, heis_act(L, a, m, v));
      out.add(w, Rational(1, 2));
    }
  }
  return out;
}

bool central_charge_condition(const Integer& k, const Rational& c) {
  Rational x = k * k * c;
  return is_integer(x) && x.get_num() % 2 == 0;
}

std::optional<Integer> minimal_k(const Rational& c) {
  if (c == 0) return Integer(1);
  // k^2 c in 2Z: k^2 must absorb the denominator and leave an even numerator
  for (Integer k = 1; k <= 2 * c.get_den() * 2; ++k)
    if (central_charge_condition(k, c)) return k;
  return std::nullopt;
}

OmegaMembership omega_membership(LatticeVOA& V) {
  const Lattice& L = V.lattice();
  OmegaMembership out;
  const auto& c = L.dual_basis();
  out.dual_criterion = true;
  for (std::size_t i = 0; i < L.rank(); ++i)
    for (std::size_t j = 0; j < L.rank(); ++j) {
      if (i == j) {
        if (!is_integer(c[i][i]) || c[i][i].get_num() % 2 != 0) out.dual_criterion = false;
      } else if (!is_integer(c[i][j])) {
        out.dual_criterion = false;
      }
    }
  Bidegree d{LatticeVector(L.rank(), Rational(0)), Rational(2)};
  std::vector<RatVector> rows;
  for (const auto& e : V.zbasis_elements(d)) rows.push_back(coords(L, e, d));
  ZSpanSlice slice = hnf(rows, rows.size());
  RatVector w = coords(L, conformal_vector(L).omega, d);
  out.coordinates = w.size();
  out.hnf_member = slice.contains(w);
  return out;
}

ExtensionReport extend_by_k_omega(const Lattice& L, const GradedZSpan& span, const Integer& k,
                                  const ConformalData& conf, const Window& window) {
  if (!central_charge_condition(k, conf.central_charge))
    throw PreconditionError("k^2 c = " + Rational(k * k * conf.central_charge).get_str() +
                            " is not in 2Z, so no integral form can contain k omega");
  const Bidegree d2{LatticeVector(L.rank(), Rational(0)), Rational(2)};
  const FockElement k_omega = conf.omega.scaled(Rational(k));
  {
    auto it = span.find(d2);
    if (it == span.end()) throw PreconditionError("span has no slice at (0, 2)");
    std::vector<RatVector> rows = it->second.basis();
    const std::size_t r0 = matrix_rank(rows);
    rows.push_back(coords(L, k_omega, d2));
    if (matrix_rank(rows) != r0) throw PreconditionError("k omega is not in the rational span at (0, 2)");
  }
  ExtensionReport rep;
  rep.span = span;
  const Rational kq(k);
  auto apply_k_l = [&](int mode, const FockElement& v) { return virasoro_act(L, mode, v).scaled(kq); };

  std::function<void(const FockElement&, const Rational&, int)> grow = [&](const FockElement& v,
                                                                           const Rational& wt, int max_m) {
    for (int m = 2; m <= max_m && wt + m <= window.cutoff; ++m) {
      FockElement w = apply_k_l(-m, v);
      if (w.is_zero()) continue;
      bool inside = true;
      for (const auto& d : bidegrees(L, w)) inside &= window.admits(L, d);
      if (!inside) continue;
      if (insert_element(rep.span, L, w)) ++rep.added;
      grow(w, wt + m, m);
    }
  };
  const int top = static_cast<int>(to_long(floor_div(window.cutoff.get_num(), window.cutoff.get_den())));
  for (const auto& [d, slice] : span)
    for (const auto& b : slice.basis()) grow(from_coords(L, d, b), d.weight, top);

  rep.contains_k_omega = contains_element(rep.span, L, k_omega);
  rep.ranks_full = true;
  for (const auto& [d, slice] : rep.span)
    if (window.admits(L, d) && slice.rank() != slice.dim()) {
      rep.ranks_full = false;
      rep.failures.push_back("rank deficit at " + render_bidegree(d));
    }
  rep.stable_under_k_virasoro = true;
  for (const auto& [d, slice] : rep.span)
    for (const auto& b : slice.basis()) {
      FockElement v = from_coords(L, d, b);
      for (int m = 2; d.weight + m <= window.cutoff; ++m) {
        FockElement w = apply_k_l(-m, v);
        bool inside = true;
        for (const auto& dd : bidegrees(L, w)) inside &= window.admits(L, dd);
        if (inside && !contains_element(rep.span, L, w)) {
          rep.stable_under_k_virasoro = false;
          rep.failures.push_back("kL(-" + std::to_string(m) + ") leaves the span at " + render_bidegree(d));
        }
      }
    }
  return rep;
}

bool lowest_weight_check(const Lattice& L, const FockElement& v) {
  Rational wt = 0;
  for (const auto& d : bidegrees(L, v)) wt = std::max(wt, d.weight);
  const long top = std::max<long>(2, to_long(floor_div(wt.get_num(), wt.get_den())) + 1);
  for (long n = 1; n <= top; ++n)
    if (!virasoro_act(L, static_cast<int>(n), v).is_zero()) return false;
  return true;
}

}  // namespace zform
