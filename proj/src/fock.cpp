#include "zform/fock.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace zform {

int degree(const HeisMonomial& m) {
  int d = 0;
  for (const auto& f : m) d += f.n;
  return d;
}

HeisMonomial mono_product(const HeisMonomial& a, const HeisMonomial& b) {
  HeisMonomial out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string render_monomial(const HeisMonomial& m) {
  if (m.empty()) return "1";
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < m.size()) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    if (!first) os << '*';
    first = false;
    os << 'a' << m[i].index + 1 << "(-" << m[i].n << ')';
    if (j - i > 1) os << '^' << j - i;
    i = j;
  }
  return os.str();
}

std::string render_bidegree(const Bidegree& d) {
  return "gamma=" + to_string(d.gamma) + " weight=" + to_string(d.weight);
}

FockElement FockElement::vacuum(std::size_t rank) {
  return basis(LatticeVector(rank, Rational(0)));
}

FockElement FockElement::basis(const LatticeVector& gamma, HeisMonomial m, Rational c) {
  FockElement v;
  std::sort(m.begin(), m.end());
  v.add_term(gamma, m, c);
  return v;
}

void FockElement::add_term(const LatticeVector& gamma, const HeisMonomial& m, const Rational& c) {
  if (c == 0) return;
  auto& poly = terms[gamma];
  auto [it, fresh] = poly.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) poly.erase(it);
  }
  if (poly.empty()) terms.erase(gamma);
}

void FockElement::add(const FockElement& other, const Rational& scale) {
  if (scale == 0) return;
  for (const auto& [g, poly] : other.terms)
    for (const auto& [m, c] : poly) add_term(g, m, c * scale);
}

FockElement FockElement::scaled(const Rational& c) const {
  FockElement out;
  out.add(*this, c);
  return out;
}

std::size_t FockElement::term_count() const {
  std::size_t n = 0;
  for (const auto& [g, poly] : terms) n += poly.size();
  return n;
}

int FockElement::max_degree() const {
  int d = 0;
  for (const auto& [g, poly] : terms)
    for (const auto& [m, c] : poly) d = std::max(d, degree(m));
  return d;
}

FockElement operator+(const FockElement& a, const FockElement& b) {
  FockElement out = a;
  out.add(b);
  return out;
}

FockElement operator-(const FockElement& a, const FockElement& b) {
  FockElement out = a;
  out.add(b, -1);
  return out;
}

Rational term_weight(const Lattice& L, const LatticeVector& gamma, const HeisMonomial& m) {
  return Rational(degree(m)) + L.norm2(gamma) / 2;
}

std::vector<Bidegree> bidegrees(const Lattice& L, const FockElement& v) {
  std::vector<Bidegree> out;
  for (const auto& [g, poly] : v.terms)
    for (const auto& [m, c] : poly) out.push_back(Bidegree{g, term_weight(L, g, m)});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FockElement component(const Lattice& L, const FockElement& v, const Bidegree& d) {
  FockElement out;
  auto it = v.terms.find(d.gamma);
  if (it == v.terms.end()) return out;
  const Rational base = L.norm2(d.gamma) / 2;
  for (const auto& [m, c] : it->second)
    if (base + degree(m) == d.weight) out.add_term(d.gamma, m, c);
  return out;
}

bool is_homogeneous(const Lattice& L, const FockElement& v) { return bidegrees(L, v).size() <= 1; }

void poly_add(HeisPoly& into, const HeisPoly& p, const Rational& scale) {
  if (scale == 0) return;
  for (const auto& [m, c] : p) {
    auto [it, fresh] = into.try_emplace(m, c * scale);
    if (!fresh) {
      it->second += c * scale;
      if (it->second == 0) into.erase(it);
    }
  }
}

HeisPoly poly_product(const HeisPoly& a, const HeisPoly& b) {
  HeisPoly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      HeisMonomial m = mono_product(ma, mb);
      Rational c = ca * cb;
      auto [it, fresh] = out.try_emplace(std::move(m), c);
      if (!fresh) {
        it->second += c;
        if (it->second == 0) out.erase(it);
      }
    }
  return out;
}

FockElement multiply_creation(const HeisPoly& p, const FockElement& v) {
  FockElement out;
  for (const auto& [g, poly] : v.terms) {
    HeisPoly prod = poly_product(p, poly);
    if (!prod.empty()) out.terms[g] = std::move(prod);
  }
  return out;
}

HeisPoly annihilate(const RatVector& pairing, int n, const HeisPoly& p) {
  HeisPoly out;
  for (const auto& [m, c] : p) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k].n != n) continue;
      const Rational& w = pairing[static_cast<std::size_t>(m[k].index)];
      if (w == 0) continue;
      HeisMonomial rest;
      rest.reserve(m.size() - 1);
      for (std::size_t q = 0; q < m.size(); ++q)
        if (q != k) rest.push_back(m[q]);
      Rational coeff = c * w * n;
      auto [it, fresh] = out.try_emplace(std::move(rest), coeff);
      if (!fresh) {
        it->second += coeff;
        if (it->second == 0) out.erase(it);
      }
    }
  }
  return out;
}

FockElement heis_act(const Lattice& L, const RatVector& h, int n, const FockElement& v) {
  L.check_length(h);
  FockElement out;
  if (n < 0) {
    HeisPoly creation;
    for (std::size_t i = 0; i < h.size(); ++i)
      if (h[i] != 0) creation[HeisMonomial{Mode{static_cast<int>(i), -n}}] = h[i];
    return multiply_creation(creation, v);
  }
  if (n == 0) {
    for (const auto& [g, poly] : v.terms) {
      Rational e = L.inner(h, g);
      if (e == 0) continue;
      HeisPoly scaled;
      poly_add(scaled, poly, e);
      out.terms[g] = std::move(scaled);
    }
    return out;
  }
  RatVector pairing = L.pairing_with_base(h);
  for (const auto& [g, poly] : v.terms) {
    HeisPoly a = annihilate(pairing, n, poly);
    if (!a.empty()) out.terms[g] = std::move(a);
  }
  return out;
}

FockElement alpha_act(const Lattice& L, std::size_t i, int n, const FockElement& v) {
  RatVector h(L.rank(), Rational(0));
  h.at(i) = 1;
  return heis_act(L, h, n, v);
}

namespace {

void colored_partitions(std::size_t rank, int remaining, Mode floor, HeisMonomial& cur,
                        std::vector<HeisMonomial>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int i = floor.index; i < static_cast<int>(rank); ++i) {
    for (int n = (i == floor.index ? floor.n : 1); n <= remaining; ++n) {
      cur.push_back(Mode{i, n});
      colored_partitions(rank, remaining - n, Mode{i, n}, cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace

std::shared_ptr<const Frame> frame(std::size_t rank, int N) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, int>, std::shared_ptr<const Frame>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(rank, N);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<Frame>();
  if (N >= 0) {
    HeisMonomial cur;
    colored_partitions(rank, N, Mode{0, 1}, cur, f->monomials);
    std::stable_sort(f->monomials.begin(), f->monomials.end(),
                     [](const HeisMonomial& a, const HeisMonomial& b) {
                       if (a.size() != b.size()) return a.size() < b.size();
                       return a < b;
                     });
    for (std::size_t k = 0; k < f->monomials.size(); ++k) f->index[f->monomials[k]] = k;
  }
  cache[key] = f;
  return f;
}

int heisenberg_degree(const Lattice& L, const Bidegree& d) {
  Rational N = d.weight - L.norm2(d.gamma) / 2;
  if (!is_integer(N) || N < 0)
    throw PreconditionError("invalid bidegree " + render_bidegree(d) + ": n - <g,g>/2 = " + N.get_str());
  return static_cast<int>(to_long(N.get_num()));
}

std::vector<HeisMonomial> monomial_basis(const Lattice& L, const Bidegree& d) {
  return frame(L.rank(), heisenberg_degree(L, d))->monomials;
}

RatVector coords(const Lattice& L, const FockElement& v, const Bidegree& d) {
  auto f = frame(L.rank(), heisenberg_degree(L, d));
  RatVector out(f->size(), Rational(0));
  auto it = v.terms.find(d.gamma);
  if (it == v.terms.end()) return out;
  for (const auto& [m, c] : it->second) {
    auto pos = f->index.find(m);
    if (pos != f->index.end()) out[pos->second] = c;
  }
  return out;
}

FockElement from_coords(const Lattice& L, const Bidegree& d, const RatVector& c) {
  auto f = frame(L.rank(), heisenberg_degree(L, d));
  if (c.size() != f->size()) throw DimensionError("coordinate vector does not match frame");
  FockElement out;
  for (std::size_t k = 0; k < c.size(); ++k) out.add_term(d.gamma, f->monomials[k], c[k]);
  return out;
}

std::string render(const FockElement& v) {
  if (v.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, poly] : v.terms)
    for (const auto& [m, c] : poly) {
      if (!first) os << " + ";
      first = false;
      os << '(' << c.get_str() << ")*" << render_monomial(m) << "*e" << to_string(g);
    }
  return os.str();
}

}  // namespace zform
