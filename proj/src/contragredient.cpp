#include "zform/contragredient.hpp"

#include <set>
#include <sstream>

namespace zform {

Bidegree opposite(const Bidegree& d) {
  Bidegree o = d;
  for (auto& x : o.gamma) x = -x;
  return o;
}

Rational InvariantForm::heisenberg(const HeisMonomial& p, const HeisMonomial& q) const {
  if (degree(p) != degree(q) || p.size() != q.size()) return 0;
  HeisPoly cur{{q, Rational(1)}};
  for (const auto& f : p) {
    RatVector row(L_.rank());
    for (std::size_t j = 0; j < L_.rank(); ++j) row[j] = L_.gram()[static_cast<std::size_t>(f.index)][j];
    cur = annihilate(row, f.n, cur);
    if (cur.empty()) return 0;
  }
  auto it = cur.find(HeisMonomial{});
  if (it == cur.end()) return 0;
  return (p.size() % 2 == 0) ? it->second : Rational(-it->second);
}

Rational InvariantForm::sector_constant(const LatticeVector& gamma) const {
  // f(a) = (-1)^{<a,a>/2} eps(a,-a) is a character of L; c_gamma = f(gamma - rep(gamma))
  LatticeVector a = gamma;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational x = gamma[i] * c_.scale[i];
    if (!is_integer(x)) throw PreconditionError("sector is not in the dual lattice");
    Integer rep = mod_floor(x.get_num(), c_.scale[i]);
    a[i] = gamma[i] - make_rational(rep, c_.scale[i]);
  }
  LatticeVector neg = a;
  for (auto& x : neg) x = -x;
  const Integer half_norm = to_integer(L_.norm2(a) / 2);
  int f = sign(c_, a, neg);
  if (half_norm % 2 != 0) f = -f;
  return Rational(f);
}

Rational InvariantForm::pairing(const FockElement& u, const FockElement& v) const {
  Rational acc = 0;
  for (const auto& [g, up] : u.terms) {
    LatticeVector neg = g;
    for (auto& x : neg) x = -x;
    auto it = v.terms.find(neg);
    if (it == v.terms.end()) continue;
    Rational part = 0;
    for (const auto& [p, a] : up)
      for (const auto& [q, b] : it->second) {
        if (degree(p) != degree(q)) continue;
        Rational h = heisenberg(p, q);
        if (h != 0) part += a * b * h;
      }
    if (part != 0) acc += part * sector_constant(g);
  }
  return acc;
}

RatMatrix InvariantForm::block(const Bidegree& d) const {
  auto f = frame(L_.rank(), heisenberg_degree(L_, d));
  const Rational c = sector_constant(d.gamma);
  RatMatrix P(f->size(), RatVector(f->size(), Rational(0)));
  for (std::size_t a = 0; a < f->size(); ++a)
    for (std::size_t b = 0; b < f->size(); ++b) P[a][b] = c * heisenberg(f->monomials[a], f->monomials[b]);
  return P;
}

FockElement l1_divided_action(const Lattice& L, const FockElement& v, int n) {
  if (n < 0) throw PreconditionError("divided powers need n >= 0");
  FockElement w = v;
  for (int i = 1; i <= n; ++i) w = virasoro_act(L, 1, w).scaled(Rational(1, i));
  return w;
}

ZSpanSlice dual_slice(const InvariantForm& form, const Bidegree& d, const ZSpanSlice& opp) {
  const RatMatrix P = form.block(d);
  const std::size_t n = P.size();
  if (opp.dim() != n) throw DimensionError("slice does not match the pairing block");
  if (opp.rank() != n) throw PreconditionError("dual needs a full-rank slice at " + render_bidegree(opposite(d)));
  // (w, b) = w . (P b^T); dual rows are the rows of (P B^T)^{-1}
  RatMatrix M = multiply(P, transpose(opp.basis()));
  auto inv = inverse(M);
  if (!inv) throw PreconditionError("degenerate pairing block at " + render_bidegree(d));
  return hnf(*inv, n);
}

GradedZSpan dual_span(const InvariantForm& form, const GradedZSpan& span) {
  GradedZSpan out;
  for (const auto& [d, slice] : span) {
    auto it = span.find(opposite(d));
    if (it == span.end()) continue;
    out.emplace(d, dual_slice(form, d, it->second));
  }
  return out;
}

SelfPairingVerdict certify_self_pairing_integral(const InvariantForm& form, const GradedZSpan& span) {
  SelfPairingVerdict out;
  const Lattice& L = form.lattice();
  for (const auto& [d, slice] : span) {
    auto it = span.find(opposite(d));
    if (it == span.end()) continue;
    const RatMatrix P = form.block(d);
    for (const auto& u : slice.basis())
      for (const auto& v : it->second.basis()) {
        ++out.pairs;
        Rational val = 0;
        for (std::size_t a = 0; a < u.size(); ++a) {
          if (u[a] == 0) continue;
          for (std::size_t b = 0; b < v.size(); ++b)
            if (v[b] != 0 && P[a][b] != 0) val += u[a] * P[a][b] * v[b];
        }
        if (!is_integer(val) && out.pass) {
          out.pass = false;
          out.witness = PairingWitness{d, u, v, val};
        }
      }
  }
  (void)L;
  return out;
}

InvarianceVerdict check_invariance(LatticeVOA& V, const InvariantForm& form, const FockElement& u,
                                   const std::vector<FockElement>& vs, const std::vector<FockElement>& ws) {
  const Lattice& L = V.lattice();
  InvarianceVerdict out;
  auto degs = bidegrees(L, u);
  if (degs.size() != 1) throw PreconditionError("invariance check needs homogeneous u");
  const Rational wt = degs[0].weight;
  if (!is_integer(wt)) throw PreconditionError("u must have integral weight");
  const long w = to_long(wt.get_num());
  const int sgn = (w % 2 == 0) ? 1 : -1;
  Rational top = 0;
  for (const auto& x : vs)
    for (const auto& d : bidegrees(L, x)) top = std::max(top, d.weight);
  for (const auto& x : ws)
    for (const auto& d : bidegrees(L, x)) top = std::max(top, d.weight);
  Truncation t{top};
  std::vector<OperatorSeries> yw;
  for (const auto& x : ws) yw.push_back(V.vertex_series(u, x, t));
  for (const auto& v : vs) {
    OperatorSeries yv = V.vertex_series(u, v, t);
    for (std::size_t j = 0; j < ws.size(); ++j) {
      std::set<int> exps;
      for (const auto& [e, c] : yv.coeffs) exps.insert(e);
      for (const auto& [e, c] : yw[j].coeffs) exps.insert(static_cast<int>(-e - 2 * w));
      for (int e : exps) {
        ++out.checks;
        Rational lhs = form.pairing(yv.at(e), ws[j]);
        Rational rhs = form.pairing(v, yw[j].at(static_cast<int>(-e - 2 * w))) * sgn;
        if (lhs != rhs && out.pass) {
          out.pass = false;
          std::ostringstream os;
          os << "exponent " << e << ": (Y(u)v,w)=" << lhs << " vs " << rhs << " for v=" << render(v)
             << " w=" << render(ws[j]);
          out.witness = os.str();
        }
      }
    }
  }
  return out;
}

}  // namespace zform
