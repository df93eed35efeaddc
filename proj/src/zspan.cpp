#include "zform/zspan.hpp"

#include <sstream>

namespace zform {

void ZSpanSlice::rescale(const Integer& new_den) {
  if (new_den == den_) return;
  Integer f = new_den / den_;
  for (auto& row : rows_)
    for (auto& x : row) x *= f;
  den_ = new_den;
}

void ZSpanSlice::reduce_above(std::size_t r) {
  const std::size_t p = pivots_[r];
  const Integer& piv = rows_[r][p];
  for (std::size_t k = 0; k < r; ++k) {
    Integer q = floor_div(rows_[k][p], piv);
    if (q == 0) continue;
    for (std::size_t j = p; j < dim_; ++j) rows_[k][j] -= q * rows_[r][j];
  }
}

void ZSpanSlice::normalize() {
  for (std::size_t r = 0; r < rows_.size(); ++r) reduce_above(r);
  Integer g = den_;
  for (const auto& row : rows_)
    for (const auto& x : row) {
      if (g == 1) break;
      if (x != 0) g = gcd(g, x);
    }
  if (g != 1) {
    for (auto& row : rows_)
      for (auto& x : row) x /= g;
    den_ /= g;
  }
}

bool ZSpanSlice::insert(const RatVector& v) {
  if (v.size() != dim_) throw DimensionError("vector length differs from slice dimension");
  Integer vden = 1;
  for (const auto& x : v) vden = lcm(vden, Integer(x.get_den()));
  if (contains(v)) return false;
  rescale(lcm(den_, vden));
  IntVector w(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    Rational x = v[j] * den_;
    w[j] = x.get_num();
  }
  std::size_t r = 0;
  std::size_t lead = 0;
  while (true) {
    while (lead < dim_ && w[lead] == 0) ++lead;
    if (lead == dim_) break;
    while (r < rows_.size() && pivots_[r] < lead) ++r;
    if (r == rows_.size() || pivots_[r] > lead) {
      if (w[lead] < 0)
        for (auto& x : w) x = -x;
      rows_.insert(rows_.begin() + static_cast<long>(r), w);
      pivots_.insert(pivots_.begin() + static_cast<long>(r), lead);
      break;
    }
    IntVector& row = rows_[r];
    const Integer rc = row[lead], vc = w[lead];
    Integer g, a, b;
    mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), rc.get_mpz_t(), vc.get_mpz_t());
    const Integer rq = rc / g, vq = vc / g;
    for (std::size_t j = lead; j < dim_; ++j) {
      Integer nr = a * row[j] + b * w[j];
      Integer nw = rq * w[j] - vq * row[j];
      row[j] = std::move(nr);
      w[j] = std::move(nw);
    }
    if (row[lead] < 0)
      for (std::size_t j = lead; j < dim_; ++j) row[j] = -row[j];
    ++lead;
    ++r;
  }
  normalize();
  return true;
}

std::optional<IntVector> ZSpanSlice::membership(const RatVector& v) const {
  if (v.size() != dim_) throw DimensionError("vector length differs from slice dimension");
  IntVector w(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    Rational x = v[j] * den_;
    if (!is_integer(x)) return std::nullopt;
    w[j] = x.get_num();
  }
  IntVector out(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::size_t p = pivots_[r];
    for (std::size_t j = (r ? pivots_[r - 1] + 1 : 0); j < p; ++j)
      if (w[j] != 0) return std::nullopt;
    if (w[p] == 0) continue;
    if (!mpz_divisible_p(w[p].get_mpz_t(), rows_[r][p].get_mpz_t())) return std::nullopt;
    Integer q = w[p] / rows_[r][p];
    for (std::size_t j = p; j < dim_; ++j) w[j] -= q * rows_[r][j];
    out[r] = q;
  }
  for (const auto& x : w)
    if (x != 0) return std::nullopt;
  return out;
}

std::vector<RatVector> ZSpanSlice::basis() const {
  std::vector<RatVector> out;
  for (const auto& row : rows_) {
    RatVector v(dim_);
    for (std::size_t j = 0; j < dim_; ++j) v[j] = make_rational(row[j], den_);
    out.push_back(std::move(v));
  }
  return out;
}

bool ZSpanSlice::contains_all(const ZSpanSlice& other) const {
  for (const auto& v : other.basis())
    if (!contains(v)) return false;
  return true;
}

ZSpanSlice hnf(const std::vector<RatVector>& rows, std::size_t dim) {
  ZSpanSlice s(dim);
  for (const auto& r : rows) s.insert(r);
  return s;
}

ZSpanSlice& slice_at(GradedZSpan& span, const Lattice& L, const Bidegree& d) {
  auto it = span.find(d);
  if (it != span.end()) return it->second;
  const std::size_t dim = frame(L.rank(), heisenberg_degree(L, d))->size();
  return span.emplace(d, ZSpanSlice(dim)).first->second;
}

bool insert_element(GradedZSpan& span, const Lattice& L, const FockElement& v) {
  bool grew = false;
  for (const auto& d : bidegrees(L, v)) grew |= slice_at(span, L, d).insert(coords(L, v, d));
  return grew;
}

bool contains_element(const GradedZSpan& span, const Lattice& L, const FockElement& v) {
  for (const auto& d : bidegrees(L, v)) {
    auto it = span.find(d);
    if (it == span.end() || !it->second.contains(coords(L, v, d))) return false;
  }
  return true;
}

bool IntegralFormVerdict::ok() const {
  for (const auto& s : slices)
    if (!s.ok()) return false;
  return true;
}

IntegralFormVerdict certify_integral_form(const Lattice& L, const GradedZSpan& a,
                                          const GradedZSpan& b,
                                          const std::vector<Bidegree>& degrees) {
  IntegralFormVerdict out;
  for (const auto& d : degrees) {
    SliceVerdict sv;
    sv.degree = d;
    sv.dim = frame(L.rank(), heisenberg_degree(L, d))->size();
    ZSpanSlice empty(sv.dim);
    auto ia = a.find(d), ib = b.find(d);
    const ZSpanSlice& sa = ia == a.end() ? empty : ia->second;
    const ZSpanSlice& sb = ib == b.end() ? empty : ib->second;
    if (sa.dim() != sv.dim || sb.dim() != sv.dim) throw DimensionError("frame mismatch at " + render_bidegree(d));
    sv.rank_a = sa.rank();
    sv.rank_b = sb.rank();
    sv.full_rank = sa.rank() == sv.dim;
    sv.equal = sa == sb;
    if (!sv.equal) {
      for (const auto& v : sa.basis())
        if (!sb.contains(v)) {
          sv.witness = v;
          break;
        }
      if (!sv.witness)
        for (const auto& v : sb.basis())
          if (!sa.contains(v)) {
            sv.witness = v;
            break;
          }
    }
    out.slices.push_back(std::move(sv));
  }
  return out;
}

std::string render_verdict(const IntegralFormVerdict& v) {
  std::ostringstream os;
  for (const auto& s : v.slices) {
    os << "slice gamma=" << to_string(s.degree.gamma) << " weight=" << s.degree.weight
       << " dim=" << s.dim << " rank=" << s.rank_a << " equal=" << (s.equal ? "true" : "false")
       << " verdict=" << (s.ok() ? "pass" : "fail");
    if (s.witness) os << " witness=" << to_string(*s.witness);
    os << '\n';
  }
  return os.str();
}

}  // namespace zform
