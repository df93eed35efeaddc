#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

using namespace zform;

Integer colored_partitions(std::size_t colors, int N) {
  if (N < 0) return 0;
  std::vector<Integer> c(static_cast<std::size_t>(N) + 1, Integer(0));
  c[0] = 1;
  for (std::size_t col = 0; col < colors; ++col)
    for (int part = 1; part <= N; ++part)
      for (int j = part; j <= N; ++j) c[static_cast<std::size_t>(j)] += c[static_cast<std::size_t>(j - part)];
  return c[static_cast<std::size_t>(N)];
}

Integer minimal_even_s(const Lattice& L) {
  const auto& n = *L.scale();
  for (Integer s = 2;; s += 2) {
    bool ok = true;
    for (std::size_t i = 0; i < L.rank() && ok; ++i)
      for (std::size_t j = 0; j < L.rank() && ok; ++j) {
        Rational v(L.gram()[i][j] * s, 2 * n[i] * n[j]);
        v.canonicalize();
        ok = v.get_den() == 1;
      }
    if (ok) return s;
  }
}

namespace {

using Series = std::vector<HeisPoly>;  // index = power of x

HeisMonomial merge(HeisMonomial a, const HeisMonomial& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

Series series_mul(const Series& a, const Series& b, int q) {
  Series out(static_cast<std::size_t>(q) + 1);
  for (int i = 0; i <= q; ++i)
    for (int j = 0; i + j <= q; ++j)
      for (const auto& [ma, ca] : a[static_cast<std::size_t>(i)])
        for (const auto& [mb, cb] : b[static_cast<std::size_t>(j)]) {
          Rational& slot = out[static_cast<std::size_t>(i + j)][merge(ma, mb)];
          slot += ca * cb;
        }
  for (auto& p : out)
    for (auto it = p.begin(); it != p.end();) it = (it->second == 0) ? p.erase(it) : std::next(it);
  return out;
}

}  // namespace

HeisPoly exp_series(const LatticeVector& a, int q) {
  Series S(static_cast<std::size_t>(q) + 1);
  for (int n = 1; n <= q; ++n)
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != 0) S[static_cast<std::size_t>(n)][HeisMonomial{Mode{static_cast<int>(i), n}}] = a[i] / n;
  Series total(static_cast<std::size_t>(q) + 1);
  Series power(static_cast<std::size_t>(q) + 1);
  power[0][HeisMonomial{}] = 1;
  Rational fact = 1;
  for (int k = 0; k <= q; ++k) {
    if (k > 0) {
      power = series_mul(power, S, q);
      fact *= k;
    }
    for (int d = 0; d <= q; ++d)
      for (const auto& [m, c] : power[static_cast<std::size_t>(d)]) total[static_cast<std::size_t>(d)][m] += c / fact;
  }
  HeisPoly out;
  for (const auto& [m, c] : total[static_cast<std::size_t>(q)])
    if (c != 0) out[m] = c;
  return out;
}

PBWElement field_power(AffineModule& M, std::size_t a, int k, int l, const PBWElement& v, int bound) {
  PBWElement out;
  std::vector<int> modes(static_cast<std::size_t>(k));
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      if (left < -bound || left > bound) return;
      modes[static_cast<std::size_t>(pos)] = left;
      PBWElement w = v;
      for (int i = k - 1; i >= 0 && !w.empty(); --i) w = M.act(a, modes[static_cast<std::size_t>(i)], w);
      pbw_add(out, w);
      return;
    }
    for (int n = -bound; n <= bound; ++n) {
      modes[static_cast<std::size_t>(pos)] = n;
      rec(pos + 1, left - n);
    }
  };
  if (k == 0) {
    if (l == 0) out = v;
    return out;
  }
  rec(0, l);
  PBWElement scaled;
  pbw_add(scaled, out, Rational(1) / Rational(factorial(k)));
  return scaled;
}

Integer a1_total_dimension(int n) {
  Integer total = 0;
  for (int m = 0; m * m <= n; ++m) total += (m == 0 ? 1 : 2) * colored_partitions(1, n - m * m);
  return total;
}

}  // namespace oracle
