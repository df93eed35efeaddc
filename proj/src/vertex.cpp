#include "zform/vertex.hpp"

#include <cmath>

namespace zform {

const FockElement& OperatorSeries::at(int exponent) const {
  static const FockElement zero;
  auto it = coeffs.find(exponent);
  return it == coeffs.end() ? zero : it->second;
}

bool Window::admits_sector(const LatticeVector& gamma) const {
  if (gamma.size() != box.size()) return false;
  for (std::size_t i = 0; i < box.size(); ++i)
    if (abs(gamma[i]) > box[i]) return false;
  return true;
}

bool Window::admits(const Lattice& L, const Bidegree& d) const {
  if (!admits_sector(d.gamma) || d.weight > cutoff) return false;
  Rational N = d.weight - L.norm2(d.gamma) / 2;
  return is_integer(N) && N >= 0 && N <= degree_cutoff;
}

std::vector<LatticeVector> Window::sectors(const LatticeVector& beta) const {
  if (beta.size() != box.size()) throw DimensionError("coset offset length differs from window");
  std::vector<LatticeVector> out;
  const std::size_t r = box.size();
  std::vector<long> lo(r), hi(r), cur(r);
  for (std::size_t i = 0; i < r; ++i) {
    Rational a = Rational(-box[i]) - beta[i], b = Rational(box[i]) - beta[i];
    Integer l, h;
    mpz_cdiv_q(l.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    mpz_fdiv_q(h.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    lo[i] = to_long(l);
    hi[i] = to_long(h);
    if (lo[i] > hi[i]) return out;
    cur[i] = lo[i];
  }
  while (true) {
    LatticeVector g(r);
    for (std::size_t i = 0; i < r; ++i) g[i] = beta[i] + cur[i];
    out.push_back(std::move(g));
    std::size_t i = 0;
    while (i < r && cur[i] == hi[i]) cur[i] = lo[i], ++i;
    if (i == r) break;
    ++cur[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Bidegree> Window::bidegrees(const Lattice& L, const LatticeVector& beta) const {
  std::vector<Bidegree> out;
  for (const auto& g : sectors(beta)) {
    Rational base = L.norm2(g) / 2;
    for (int N = 0; N <= degree_cutoff; ++N) {
      Rational w = base + N;
      if (w > cutoff) break;
      out.push_back(Bidegree{g, w});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Window make_window(const Lattice& L, const Rational& cutoff, std::optional<long> box) {
  Window w;
  w.cutoff = cutoff;
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), cutoff.get_num_mpz_t(), cutoff.get_den_mpz_t());
  w.degree_cutoff = static_cast<int>(std::max(0L, to_long(fl)));
  if (box) {
    if (*box < 0) throw PreconditionError("window bound must be non-negative");
    w.box.assign(L.rank(), *box);
    return w;
  }
  if (!L.is_positive_definite())
    throw PreconditionError("a sector window is required for indefinite lattices");
  // |gamma_i| = |<alpha_i', gamma>| <= sqrt(c_ii * <gamma,gamma>) <= sqrt(2 c_ii cutoff)
  for (std::size_t i = 0; i < L.rank(); ++i) {
    Rational bound = 2 * cutoff * L.dual_basis()[i][i];
    Integer f, s;
    mpz_fdiv_q(f.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
    if (f < 0) f = 0;
    mpz_sqrt(s.get_mpz_t(), f.get_mpz_t());
    w.box.push_back(to_long(s));
  }
  return w;
}

Window padded(const Window& w, long extra_box, int extra_weight) {
  Window p = w;
  for (auto& b : p.box) b += extra_box;
  p.cutoff += extra_weight;
  p.degree_cutoff += extra_weight;
  return p;
}

LatticeVOA::LatticeVOA(Lattice L) : L_(std::move(L)), c_(build_cocycle(L_)) {
  if (!L_.is_even()) throw PreconditionError("lattice vertex algebras need an even lattice");
}

std::vector<LatticeVector> LatticeVOA::generators() const {
  std::vector<LatticeVector> out;
  for (std::size_t i = 0; i < rank(); ++i)
    for (int s : {1, -1}) {
      LatticeVector a(rank(), Rational(0));
      a[i] = s;
      out.push_back(std::move(a));
    }
  return out;
}

const std::vector<HeisPoly>& LatticeVOA::e_minus_table(const LatticeVector& a, int q) {
  auto& table = e_minus_cache_[a];
  if (table.empty()) table.push_back(HeisPoly{{HeisMonomial{}, Rational(1)}});
  while (static_cast<int>(table.size()) <= q) {
    const int m = static_cast<int>(table.size());
    HeisPoly next;
    for (int k = 1; k <= m; ++k) {
      HeisPoly mode;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0) mode[HeisMonomial{Mode{static_cast<int>(i), k}}] = a[i];
      poly_add(next, poly_product(mode, table[static_cast<std::size_t>(m - k)]), Rational(1, m));
    }
    table.push_back(std::move(next));
  }
  return table;
}

const HeisPoly& LatticeVOA::e_minus_coeff(const LatticeVector& a, int q) {
  L_.check_length(a);
  if (q < 0) {
    static const HeisPoly zero;
    return zero;
  }
  return e_minus_table(a, q)[static_cast<std::size_t>(q)];
}

const HeisPoly& LatticeVOA::y_poly(std::size_t i, int j) {
  LatticeVector a(rank(), Rational(0));
  a.at(i) = 1;
  return e_minus_coeff(a, j);
}

void LatticeVOA::apply_e_plus(const LatticeVector& a, const HeisPoly& p, std::vector<HeisPoly>& out) {
  out.clear();
  out.push_back(p);
  int deg = 0;
  for (const auto& [m, c] : p) deg = std::max(deg, degree(m));
  RatVector pairing = L_.pairing_with_base(a);
  for (int m = 1; m <= deg; ++m) {
    HeisPoly next;
    for (int k = 1; k <= m; ++k)
      poly_add(next, annihilate(pairing, k, out[static_cast<std::size_t>(m - k)]), Rational(-1, m));
    out.push_back(std::move(next));
  }
}

OperatorSeries LatticeVOA::e_minus_series(const LatticeVector& a, const FockElement& v,
                                          const Rational& cutoff) {
  OperatorSeries out;
  out.cutoff = cutoff;
  for (const auto& [g, poly] : v.terms) {
    const Rational base = L_.norm2(g) / 2;
    for (const auto& [m, c] : poly) {
      const Rational w = base + degree(m);
      for (int q = 0; w + q <= cutoff; ++q) {
        HeisPoly single{{m, c}};
        HeisPoly prod = poly_product(e_minus_coeff(a, q), single);
        FockElement piece;
        if (!prod.empty()) piece.terms[g] = std::move(prod);
        out.coeffs[q].add(piece);
      }
    }
  }
  for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
    it = it->second.is_zero() ? out.coeffs.erase(it) : std::next(it);
  return out;
}

OperatorSeries LatticeVOA::e_plus_series(const LatticeVector& a, const FockElement& v) {
  OperatorSeries out;
  std::vector<HeisPoly> table;
  for (const auto& [g, poly] : v.terms) {
    apply_e_plus(a, poly, table);
    for (std::size_t p = 0; p < table.size(); ++p) {
      if (table[p].empty()) continue;
      FockElement piece;
      piece.terms[g] = table[p];
      out.coeffs[-static_cast<int>(p)].add(piece);
    }
  }
  for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
    it = it->second.is_zero() ? out.coeffs.erase(it) : std::next(it);
  return out;
}

namespace {

std::map<int, HeisPoly> split_by_degree(const HeisPoly& p) {
  std::map<int, HeisPoly> out;
  for (const auto& [m, c] : p) out[degree(m)].emplace(m, c);
  return out;
}

long floor_long(const Rational& x) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return to_long(f);
}

void add_piece(OperatorSeries& out, int exponent, const LatticeVector& sector, const HeisPoly& p,
               const Rational& scale) {
  if (p.empty() || scale == 0) return;
  auto& target = out.coeffs[exponent].terms[sector];
  poly_add(target, p, scale);
  if (target.empty()) {
    out.coeffs[exponent].terms.erase(sector);
    if (out.coeffs[exponent].is_zero()) out.coeffs.erase(exponent);
  }
}

}  // namespace

OperatorSeries LatticeVOA::generator_series(const LatticeVector& a, const FockElement& v,
                                            const Truncation& t) {
  if (!L_.in_lattice(a)) throw PreconditionError("generator " + to_string(a) + " is not in L");
  OperatorSeries out;
  out.cutoff = t.weight;
  std::vector<HeisPoly> plus;
  for (const auto& [g, poly] : v.terms) {
    LatticeVector target = g;
    for (std::size_t i = 0; i < target.size(); ++i) target[i] += a[i];
    const int sgn = sign(c_, a, g);
    const long shift = to_long(to_integer(L_.inner(a, g)));
    const Rational base = L_.norm2(target) / 2;
    for (const auto& [D, part] : split_by_degree(poly)) {
      apply_e_plus(a, part, plus);
      for (std::size_t p = 0; p < plus.size(); ++p) {
        if (plus[p].empty()) continue;
        const int rest = D - static_cast<int>(p);
        long qmax = floor_long(t.weight - base - rest);
        qmax = std::min<long>(qmax, static_cast<long>(t.degree) - rest);
        for (long q = 0; q <= qmax; ++q) {
          HeisPoly prod = poly_product(e_minus_coeff(a, static_cast<int>(q)), plus[p]);
          add_piece(out, static_cast<int>(q - static_cast<long>(p) + shift), target, prod, sgn);
        }
      }
    }
  }
  return out;
}

FockElement LatticeVOA::generator_coefficient(const LatticeVector& a, int exponent,
                                              const FockElement& v) {
  if (!L_.in_lattice(a)) throw PreconditionError("generator " + to_string(a) + " is not in L");
  FockElement out;
  std::vector<HeisPoly> plus;
  for (const auto& [g, poly] : v.terms) {
    LatticeVector target = g;
    for (std::size_t i = 0; i < target.size(); ++i) target[i] += a[i];
    const int sgn = sign(c_, a, g);
    const long shift = to_long(to_integer(L_.inner(a, g)));
    apply_e_plus(a, poly, plus);
    for (std::size_t p = 0; p < plus.size(); ++p) {
      const long q = exponent + static_cast<long>(p) - shift;
      if (q < 0 || plus[p].empty()) continue;
      HeisPoly prod = poly_product(e_minus_coeff(a, static_cast<int>(q)), plus[p]);
      for (const auto& [m, c] : prod) out.add_term(target, m, c * sgn);
    }
  }
  return out;
}

OperatorSeries LatticeVOA::vertex_series(const FockElement& u, const FockElement& v,
                                         const Truncation& t) {
  OperatorSeries out;
  out.cutoff = t.weight;
  std::vector<HeisPoly> plus;
  for (const auto& [gu, upoly] : u.terms) {
    if (!L_.in_lattice(gu)) throw PreconditionError("Y(u,x) needs u in V_L");
    for (const auto& [umono, ucoef] : upoly) {
      const std::size_t k = umono.size();
      for (unsigned mask = 0; mask < (1u << k); ++mask) {
        int n_created = 0;
        HeisMonomial created;  // factors handled by creation parts
        for (std::size_t j = 0; j < k; ++j)
          if (mask & (1u << j)) {
            created.push_back(umono[j]);
            n_created += umono[j].n;
          }
        for (const auto& [gv, vpoly] : v.terms) {
          // annihilation and zero-mode parts of the factors outside the mask
          std::map<int, HeisPoly> state{{0, vpoly}};
          const RatVector zero_modes = L_.pairing_with_base(gv);
          for (std::size_t j = 0; j < k; ++j) {
            if (mask & (1u << j)) continue;
            const int idx = umono[j].index, nj = umono[j].n;
            RatVector row(rank());
            for (std::size_t q = 0; q < rank(); ++q) row[q] = L_.gram()[static_cast<std::size_t>(idx)][q];
            std::map<int, HeisPoly> next;
            for (const auto& [e, P] : state) {
              int deg = 0;
              for (const auto& [m, c] : P) deg = std::max(deg, degree(m));
              for (int n = 0; n <= deg; ++n) {
                Integer bc = binomial(-n - 1, nj - 1);
                if (n == 0) {
                  Rational w = zero_modes[static_cast<std::size_t>(idx)] * bc;
                  if (w != 0) poly_add(next[e - nj], P, w);
                } else {
                  HeisPoly A = annihilate(row, n, P);
                  if (!A.empty()) poly_add(next[e - n - nj], A, Rational(bc));
                }
              }
            }
            state.clear();
            for (auto& [e, P] : next)
              if (!P.empty()) state.emplace(e, std::move(P));
          }
          if (state.empty()) continue;
          LatticeVector target = gv;
          for (std::size_t i = 0; i < target.size(); ++i) target[i] += gu[i];
          const int sgn = sign(c_, gu, gv);
          const long shift = to_long(to_integer(L_.inner(gu, gv)));
          const Rational base = L_.norm2(target) / 2;
          for (const auto& [e, P] : state) {
            for (const auto& [D, part] : split_by_degree(P)) {
              apply_e_plus(gu, part, plus);
              for (std::size_t p = 0; p < plus.size(); ++p) {
                if (plus[p].empty()) continue;
                const int rest = D - static_cast<int>(p);
                long budget = floor_long(t.weight - base - rest);
                budget = std::min<long>(budget, static_cast<long>(t.degree) - rest);
                if (budget < 0) continue;
                // creation series: E^-(-gu, x) times the created factors, graded by degree
                std::vector<HeisPoly> creation(static_cast<std::size_t>(budget) + 1);
                const auto& em = e_minus_table(gu, static_cast<int>(budget));
                for (long g = 0; g <= budget; ++g) creation[static_cast<std::size_t>(g)] = em[static_cast<std::size_t>(g)];
                for (const Mode& f : created) {
                  std::vector<HeisPoly> nxt(creation.size());
                  for (long g = 0; g <= budget; ++g) {
                    if (creation[static_cast<std::size_t>(g)].empty()) continue;
                    for (long tt = f.n; g + tt <= budget; ++tt) {
                      HeisPoly mode{{HeisMonomial{Mode{f.index, static_cast<int>(tt)}},
                                     Rational(binomial(tt - 1, f.n - 1))}};
                      poly_add(nxt[static_cast<std::size_t>(g + tt)],
                               poly_product(mode, creation[static_cast<std::size_t>(g)]));
                    }
                  }
                  creation = std::move(nxt);
                }
                const long base_exp = e - static_cast<long>(p) + shift - n_created;
                for (long g = 0; g <= budget; ++g) {
                  if (creation[static_cast<std::size_t>(g)].empty()) continue;
                  add_piece(out, static_cast<int>(base_exp + g), target,
                            poly_product(creation[static_cast<std::size_t>(g)], plus[p]), ucoef * sgn);
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

MultiSeries LatticeVOA::multi_product_iterated(const std::vector<LatticeVector>& as,
                                               const LatticeVector& beta, const Rational& cutoff) {
  MultiSeries cur{{MultiIndex{}, FockElement::basis(beta)}};
  Truncation t{cutoff};
  for (std::size_t j = as.size(); j-- > 0;) {
    MultiSeries next;
    for (const auto& [idx, elem] : cur) {
      OperatorSeries s = generator_series(as[j], elem, t);
      for (auto& [e, coeff] : s.coeffs) {
        MultiIndex key;
        key.reserve(idx.size() + 1);
        key.push_back(e);
        key.insert(key.end(), idx.begin(), idx.end());
        next[std::move(key)].add(coeff);
      }
    }
    cur = std::move(next);
  }
  for (auto it = cur.begin(); it != cur.end();) it = it->second.is_zero() ? cur.erase(it) : std::next(it);
  return cur;
}

namespace {

void compositions(long total, std::size_t parts, std::vector<long>& cur,
                  const std::function<void(const std::vector<long>&)>& f) {
  if (parts == 0) {
    if (total == 0) f(cur);
    return;
  }
  if (parts == 1) {
    cur.push_back(total);
    f(cur);
    cur.pop_back();
    return;
  }
  for (long x = 0; x <= total; ++x) {
    cur.push_back(x);
    compositions(total - x, parts - 1, cur, f);
    cur.pop_back();
  }
}

}  // namespace

MultiSeries LatticeVOA::multi_product_normal(const std::vector<LatticeVector>& as,
                                             const LatticeVector& beta, const Rational& cutoff) {
  const std::size_t k = as.size();
  MultiSeries out;
  if (k == 0) {
    if (L_.norm2(beta) / 2 <= cutoff) out[MultiIndex{}] = FockElement::basis(beta);
    return out;
  }
  for (const auto& a : as)
    if (!L_.in_lattice(a)) throw PreconditionError("generator " + to_string(a) + " is not in L");
  // sectors gamma_j = beta + a_j + ... + a_k
  std::vector<LatticeVector> sector(k + 1);
  sector[k] = beta;
  for (std::size_t j = k; j-- > 0;) {
    sector[j] = sector[j + 1];
    for (std::size_t i = 0; i < rank(); ++i) sector[j][i] += as[j][i];
  }
  int sgn = 1;
  for (std::size_t j = 0; j < k; ++j) sgn *= sign(c_, as[j], sector[j + 1]);
  std::vector<std::vector<long>> N(k, std::vector<long>(k, 0));
  std::vector<long> b(k);
  for (std::size_t i = 0; i < k; ++i) {
    b[i] = to_long(to_integer(L_.inner(as[i], beta)));
    for (std::size_t j = 0; j < k; ++j) N[i][j] = to_long(to_integer(L_.inner(as[i], as[j])));
  }
  std::vector<Rational> lower(k + 1);
  std::vector<long> span(k);
  for (std::size_t j = 0; j <= k; ++j) lower[j] = L_.norm2(sector[j]) / 2;
  for (std::size_t j = 0; j < k; ++j) {
    span[j] = floor_long(cutoff - lower[j]);
    if (span[j] < 0) return out;
  }
  if (lower[k] > cutoff) return out;

  std::vector<long> deg(k, 0);
  while (true) {
    // exponents from partial Heisenberg degrees deg_j of the partial products
    MultiIndex t(k);
    for (std::size_t j = 0; j < k; ++j) {
      Rational wj = lower[j] + deg[j];
      Rational wn = (j + 1 < k) ? lower[j + 1] + deg[j + 1] : lower[k];
      t[j] = static_cast<int>(to_long(to_integer(wj - wn - L_.norm2(as[j]) / 2)));
    }
    // column-by-column extraction of the coefficient of x^t
    HeisPoly acc;
    std::vector<std::vector<long>> r(k, std::vector<long>(k, 0));
    std::vector<long> d(k, 0);
    std::function<void(std::size_t, Integer)> column = [&](std::size_t j1, Integer coef) {
      const std::size_t j = j1 - 1;
      long R = t[j] - b[j];
      for (std::size_t jp = j + 1; jp < k; ++jp) R -= N[j][jp] - r[j][jp];
      if (R < 0) return;
      if (j == 0) {
        d[0] = R;
        HeisPoly p{{HeisMonomial{}, Rational(1)}};
        for (std::size_t i = 0; i < k; ++i) {
          p = poly_product(e_minus_coeff(as[i], static_cast<int>(d[i])), p);
          if (p.empty()) return;
        }
        poly_add(acc, p, Rational(coef));
        return;
      }
      for (long dj = 0; dj <= R; ++dj) {
        d[j] = dj;
        std::vector<long> cur;
        compositions(R - dj, j, cur, [&](const std::vector<long>& parts) {
          Integer c = coef;
          for (std::size_t h = 0; h < j; ++h) {
            r[h][j] = parts[h];
            Integer bc = binomial(N[h][j], parts[h]);
            if (bc == 0) return;
            c *= (parts[h] % 2 == 0) ? bc : Integer(-bc);
          }
          column(j, c);
        });
      }
    };
    column(k, Integer(1));
    if (!acc.empty()) {
      FockElement e;
      poly_add(e.terms[sector[0]], acc, Rational(sgn));
      if (!e.terms[sector[0]].empty()) out[t] = std::move(e);
    }
    std::size_t i = 0;
    while (i < k && deg[i] == span[i]) deg[i] = 0, ++i;
    if (i == k) break;
    ++deg[i];
  }
  return out;
}

std::vector<FockElement> LatticeVOA::zbasis_elements(const Bidegree& d) {
  std::vector<FockElement> out;
  auto f = frame(rank(), heisenberg_degree(L_, d));
  for (const auto& m : f->monomials) {
    HeisPoly p{{HeisMonomial{}, Rational(1)}};
    for (const auto& mode : m) p = poly_product(y_poly(static_cast<std::size_t>(mode.index), mode.n), p);
    FockElement e;
    e.terms[d.gamma] = std::move(p);
    out.push_back(std::move(e));
  }
  return out;
}

GradedZSpan generated_span(LatticeVOA& V, const LatticeVector& beta, const Window& window,
                           const std::optional<Window>& through, ClosureStats* stats) {
  const Lattice& L = V.lattice();
  const Window& outer = through ? *through : window;
  GradedZSpan span;
  std::vector<FockElement> work;
  FockElement start = FockElement::basis(beta);
  Bidegree d0{beta, L.norm2(beta) / 2};
  if (outer.admits(L, d0)) {
    insert_element(span, L, start);
    work.push_back(start);
  }
  const auto gens = V.generators();
  const Truncation trunc = outer.truncation();
  std::size_t pushed = work.size(), applications = 0;
  while (!work.empty()) {
    FockElement v = std::move(work.back());
    work.pop_back();
    for (const auto& a : gens) {
      ++applications;
      OperatorSeries s = V.generator_series(a, v, trunc);
      for (const auto& [e, coeff] : s.coeffs) {
        for (const auto& d : bidegrees(L, coeff)) {
          if (!outer.admits(L, d)) continue;
          FockElement piece = component(L, coeff, d);
          if (slice_at(span, L, d).insert(coords(L, piece, d))) {
            work.push_back(std::move(piece));
            ++pushed;
          }
        }
      }
    }
  }
  if (stats) {
    stats->pushed = pushed;
    stats->applications = applications;
  }
  GradedZSpan out;
  for (const auto& d : window.bidegrees(L, beta)) {
    auto it = span.find(d);
    out.emplace(d, it == span.end() ? ZSpanSlice(frame(L.rank(), heisenberg_degree(L, d))->size())
                                    : it->second);
  }
  return out;
}

GradedZSpan ybasis_span(LatticeVOA& V, const LatticeVector& beta, const Window& window) {
  const Lattice& L = V.lattice();
  GradedZSpan out;
  for (const auto& d : window.bidegrees(L, beta)) {
    std::vector<RatVector> rows;
    for (const auto& e : V.zbasis_elements(d)) rows.push_back(coords(L, e, d));
    out.emplace(d, hnf(rows, frame(L.rank(), heisenberg_degree(L, d))->size()));
  }
  return out;
}

void for_each_product(LatticeVOA& V, const LatticeVector& beta, const Window& window, int depth,
                      const std::function<void(const std::vector<int>&, const FockElement&)>& sink) {
  const Lattice& L = V.lattice();
  const auto gens = V.generators();
  std::vector<int> path;
  std::function<void(const FockElement&, int)> rec = [&](const FockElement& v, int left) {
    sink(path, v);
    if (left == 0) return;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      OperatorSeries s = V.generator_series(gens[g], v, window.truncation());
      path.push_back(static_cast<int>(g));
      for (const auto& [e, coeff] : s.coeffs) {
        FockElement kept;
        for (const auto& d : bidegrees(L, coeff))
          if (window.admits(L, d)) kept.add(component(L, coeff, d));
        if (!kept.is_zero()) rec(kept, left - 1);
      }
      path.pop_back();
    }
  };
  FockElement start = FockElement::basis(beta);
  if (window.admits(L, Bidegree{beta, L.norm2(beta) / 2})) rec(start, depth);
}

}  // namespace zform
