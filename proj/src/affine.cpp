#include "zform/affine.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace zform {

std::size_t LieData::index_of(const std::string& n) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return i;
  throw ParseError("unknown basis element '" + n + "'");
}

std::vector<std::size_t> LieData::roots() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim; ++i)
    if (is_root[i]) out.push_back(i);
  return out;
}

namespace {

using Mat = IntMatrix;

Mat commutator(const Mat& x, const Mat& y) {
  const std::size_t n = x.size();
  Mat out(n, IntVector(n, Integer(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (x[i][k] == 0 && y[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += x[i][k] * y[k][j] - y[i][k] * x[k][j];
    }
  return out;
}

Integer trace_product(const Mat& x, const Mat& y) {
  Integer t = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < x.size(); ++k) t += x[i][k] * y[k][i];
  return t;
}

IntVector dense(const SparseInt& s, std::size_t dim) {
  IntVector v(dim, Integer(0));
  for (const auto& [i, c] : s) v[i] += c;
  return v;
}

SparseInt sparse(const IntVector& v) {
  SparseInt s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.emplace_back(i, v[i]);
  return s;
}

IntVector bracket_vec(const LieData& g, const IntVector& x, const IntVector& y) {
  IntVector out(g.dim, Integer(0));
  for (std::size_t a = 0; a < g.dim; ++a) {
    if (x[a] == 0) continue;
    for (std::size_t b = 0; b < g.dim; ++b) {
      if (y[b] == 0) continue;
      for (const auto& [c, f] : g.bracket[a][b]) out[c] += x[a] * y[b] * f;
    }
  }
  return out;
}

Integer form_vec(const LieData& g, const IntVector& x, const IntVector& y) {
  Integer t = 0;
  for (std::size_t a = 0; a < g.dim; ++a)
    for (std::size_t b = 0; b < g.dim; ++b) t += x[a] * g.form[a][b] * y[b];
  return t;
}

IntVector unit(std::size_t dim, std::size_t i) {
  IntVector v(dim, Integer(0));
  v[i] = 1;
  return v;
}

IntVector apply_sigma(const LieData& g, const IntVector& x) {
  IntVector out(g.dim, Integer(0));
  for (std::size_t a = 0; a < g.dim; ++a) {
    if (x[a] == 0) continue;
    for (const auto& [b, c] : g.involution[a]) out[b] += x[a] * c;
  }
  return out;
}

}  // namespace

LieData sl_n(std::size_t n) {
  if (n < 2) throw PreconditionError("sl_n needs n >= 2");
  LieData g;
  g.name = "sl" + std::to_string(n);
  std::vector<Mat> mats;
  auto zero = [&] { return Mat(n, IntVector(n, Integer(0))); };
  auto label = [&](char c, std::size_t i, std::size_t j) {
    return std::string(1, c) + std::to_string(i + 1) + std::to_string(j + 1);
  };
  std::vector<std::pair<std::size_t, std::size_t>> pos;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pos.emplace_back(i, j);
  for (auto [i, j] : pos) {
    Mat m = zero();
    m[i][j] = 1;
    mats.push_back(m);
    g.names.push_back(n == 2 ? "e" : label('e', i, j));
    g.is_root.push_back(true);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Mat m = zero();
    m[k][k] = 1;
    m[k + 1][k + 1] = -1;
    mats.push_back(m);
    g.names.push_back(n == 2 ? "h" : "h" + std::to_string(k + 1));
    g.is_root.push_back(false);
  }
  for (auto [i, j] : pos) {
    Mat m = zero();
    m[j][i] = 1;
    mats.push_back(m);
    g.names.push_back(n == 2 ? "f" : label('f', j, i));
    g.is_root.push_back(true);
  }
  g.dim = mats.size();
  const std::size_t npos = pos.size();
  auto decompose = [&](const Mat& m) {
    IntVector v(g.dim, Integer(0));
    for (std::size_t p = 0; p < npos; ++p) {
      v[p] = m[pos[p].first][pos[p].second];
      v[npos + (n - 1) + p] = m[pos[p].second][pos[p].first];
    }
    Integer run = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      run += m[k][k];
      v[npos + k] = run;
    }
    return v;
  };
  g.bracket.assign(g.dim, std::vector<SparseInt>(g.dim));
  g.form.assign(g.dim, IntVector(g.dim, Integer(0)));
  for (std::size_t a = 0; a < g.dim; ++a)
    for (std::size_t b = 0; b < g.dim; ++b) {
      g.bracket[a][b] = sparse(decompose(commutator(mats[a], mats[b])));
      g.form[a][b] = trace_product(mats[a], mats[b]);
    }
  g.involution.resize(g.dim);
  for (std::size_t a = 0; a < g.dim; ++a) {
    Mat t = zero();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t[i][j] = mats[a][j][i];
    g.involution[a] = sparse(decompose(t));
  }
  g.dual_coxeter = static_cast<long>(n);
  return g;
}

LieData parse_lie(const std::string& text) {
  LieData g;
  std::istringstream lines(text);
  std::string line;
  std::size_t form_rows = 0;
  bool in_form = false;
  std::vector<std::pair<std::size_t, std::size_t>> invol;
  std::vector<std::string> roots;
  struct PendingBracket {
    std::string a, b;
    std::vector<std::pair<std::string, std::string>> terms;
  };
  std::vector<PendingBracket> brackets;
  while (std::getline(lines, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string key;
    if (!(in >> key)) continue;
    if (in_form) {
      std::istringstream full(line);
      IntVector row;
      std::string tok;
      while (full >> tok) {
        Rational r = parse_rational(tok);
        if (!is_integer(r)) throw ParseError("form entries must be integers");
        row.push_back(r.get_num());
      }
      if (row.size() != g.dim) throw ParseError("form row has the wrong length");
      g.form.push_back(row);
      if (++form_rows == g.dim) in_form = false;
      continue;
    }
    if (key == "name") {
      in >> g.name;
    } else if (key == "dim") {
      long d = 0;
      if (!(in >> d) || d <= 0) throw ParseError("dim must be positive");
      g.dim = static_cast<std::size_t>(d);
    } else if (key == "names") {
      std::string n;
      while (in >> n) g.names.push_back(n);
    } else if (key == "bracket") {
      PendingBracket pb;
      std::string colon;
      if (!(in >> pb.a >> pb.b >> colon) || colon != ":") throw ParseError("bad bracket line: '" + line + "'");
      std::string c, n;
      while (in >> c) {
        if (!(in >> n)) throw ParseError("bracket term without basis element: '" + line + "'");
        pb.terms.emplace_back(c, n);
      }
      brackets.push_back(std::move(pb));
    } else if (key == "form") {
      if (g.dim == 0) throw ParseError("'form' before 'dim'");
      in_form = true;
    } else if (key == "coxeter") {
      if (!(in >> g.dual_coxeter)) throw ParseError("bad coxeter line");
    } else if (key == "involution") {
      std::string a, b;
      if (!(in >> a >> b)) throw ParseError("bad involution line");
      invol.emplace_back(g.index_of(a), g.index_of(b));
    } else if (key == "roots") {
      std::string n;
      while (in >> n) roots.push_back(n);
    } else {
      throw ParseError("unexpected line: '" + line + "'");
    }
  }
  if (g.dim == 0 || g.names.size() != g.dim) throw ParseError("names do not match dim");
  if (g.form.size() != g.dim) throw ParseError("form matrix missing or incomplete");
  g.bracket.assign(g.dim, std::vector<SparseInt>(g.dim));
  std::vector<std::vector<bool>> seen(g.dim, std::vector<bool>(g.dim, false));
  for (const auto& pb : brackets) {
    const std::size_t a = g.index_of(pb.a), b = g.index_of(pb.b);
    IntVector v(g.dim, Integer(0));
    for (const auto& [c, n] : pb.terms) {
      Rational r = parse_rational(c);
      if (!is_integer(r)) throw ParseError("structure constants must be integers");
      v[g.index_of(n)] += r.get_num();
    }
    if (seen[a][b]) throw ParseError("bracket [" + pb.a + "," + pb.b + "] given twice");
    seen[a][b] = seen[b][a] = true;
    g.bracket[a][b] = sparse(v);
    for (auto& x : v) x = -x;
    g.bracket[b][a] = sparse(v);
  }
  g.involution.resize(g.dim);
  for (std::size_t a = 0; a < g.dim; ++a) g.involution[a] = {{a, Integer(1)}};
  for (auto [a, b] : invol) {
    g.involution[a] = {{b, Integer(1)}};
    g.involution[b] = {{a, Integer(1)}};
  }
  g.is_root.assign(g.dim, false);
  for (const auto& r : roots) g.is_root[g.index_of(r)] = true;
  if (g.name.empty()) g.name = "custom";
  return g;
}

LieData load_lie(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open Lie data file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_lie(buf.str());
}

LieData lie_by_name(const std::string& name) {
  if (name == "sl2") return sl_n(2);
  if (name == "sl3") return sl_n(3);
  return load_lie(name);
}

std::string render_lie(const LieData& g) {
  std::ostringstream os;
  os << "name " << g.name << "\ndim " << g.dim << "\nnames";
  for (const auto& n : g.names) os << ' ' << n;
  os << '\n';
  for (std::size_t a = 0; a < g.dim; ++a)
    for (std::size_t b = a + 1; b < g.dim; ++b) {
      if (g.bracket[a][b].empty()) continue;
      os << "bracket " << g.names[a] << ' ' << g.names[b] << " :";
      for (const auto& [c, f] : g.bracket[a][b]) os << ' ' << f << ' ' << g.names[c];
      os << '\n';
    }
  os << "form\n";
  for (const auto& row : g.form) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
    os << '\n';
  }
  os << "coxeter " << g.dual_coxeter << '\n';
  for (std::size_t a = 0; a < g.dim; ++a) {
    const auto& s = g.involution[a];
    if (s.size() != 1 || s[0].second != 1) throw PreconditionError("only permutation involutions can be written");
    if (s[0].first > a) os << "involution " << g.names[a] << ' ' << g.names[s[0].first] << '\n';
  }
  os << "roots";
  for (std::size_t a = 0; a < g.dim; ++a)
    if (g.is_root[a]) os << ' ' << g.names[a];
  os << '\n';
  return os.str();
}

LieValidation validate(const LieData& g) {
  LieValidation v;
  const std::size_t d = g.dim;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      IntVector ab = dense(g.bracket[a][b], d), ba = dense(g.bracket[b][a], d);
      for (std::size_t c = 0; c < d; ++c)
        if (ab[c] != -ba[c]) {
          v.antisymmetric = false;
          v.failures.push_back("[" + g.names[a] + "," + g.names[b] + "] is not antisymmetric");
          break;
        }
      if (g.form[a][b] != g.form[b][a]) v.form_symmetric = false;
    }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        IntVector x = unit(d, a), y = unit(d, b), z = unit(d, c);
        IntVector j1 = bracket_vec(g, x, bracket_vec(g, y, z));
        IntVector j2 = bracket_vec(g, y, bracket_vec(g, z, x));
        IntVector j3 = bracket_vec(g, z, bracket_vec(g, x, y));
        for (std::size_t e = 0; e < d; ++e)
          if (j1[e] + j2[e] + j3[e] != 0) {
            if (v.jacobi)
              v.failures.push_back("Jacobi fails on " + g.names[a] + "," + g.names[b] + "," + g.names[c]);
            v.jacobi = false;
            break;
          }
        if (form_vec(g, bracket_vec(g, x, y), z) != form_vec(g, x, bracket_vec(g, y, z))) {
          if (v.form_invariant) v.failures.push_back("form is not invariant");
          v.form_invariant = false;
        }
      }
  for (std::size_t a = 0; a < d; ++a) {
    IntVector x = unit(d, a);
    if (apply_sigma(g, apply_sigma(g, x)) != x) v.involution_ok = false;
    for (std::size_t b = 0; b < d; ++b) {
      IntVector y = unit(d, b);
      if (apply_sigma(g, bracket_vec(g, x, y)) != bracket_vec(g, apply_sigma(g, y), apply_sigma(g, x)))
        v.involution_ok = false;
      if (form_vec(g, apply_sigma(g, x), apply_sigma(g, y)) != g.form[a][b]) v.involution_ok = false;
    }
  }
  if (!v.involution_ok) v.failures.push_back("involution is not an isometric anti-automorphism of order 2");
  if (!v.form_symmetric) v.failures.push_back("form is not symmetric");
  return v;
}

GModule GModule::trivial(const LieData& g) {
  GModule m;
  m.dim = 1;
  m.rho.assign(g.dim, IntMatrix(1, IntVector(1, Integer(0))));
  return m;
}

GModule GModule::sl2_irreducible(const LieData& g, int d) {
  if (g.dim != 3 || d < 0) throw PreconditionError("sl2 irreducibles need sl2 data and d >= 0");
  const std::size_t e = g.index_of("e"), h = g.index_of("h"), f = g.index_of("f");
  GModule m;
  m.dim = static_cast<std::size_t>(d) + 1;
  m.rho.assign(3, IntMatrix(m.dim, IntVector(m.dim, Integer(0))));
  for (int j = 0; j <= d; ++j) {
    const auto J = static_cast<std::size_t>(j);
    m.rho[h][J][J] = d - 2 * j;
    if (j < d) m.rho[f][J + 1][J] = j + 1;
    if (j > 0) m.rho[e][J - 1][J] = d - j + 1;
  }
  return m;
}

int pbw_weight(const PBWMonomial& m) {
  int w = 0;
  for (const auto& f : m) w += f.mode;
  return w;
}

void pbw_add(PBWElement& into, const PBWElement& v, const Rational& scale) {
  if (scale == 0) return;
  for (const auto& [k, c] : v) {
    auto [it, fresh] = into.try_emplace(k, c * scale);
    if (!fresh) {
      it->second += c * scale;
      if (it->second == 0) into.erase(it);
    }
  }
}

std::string render(const LieData& g, const PBWElement& v) {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : v) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c.get_str() << ")*";
    for (const auto& f : k.mono) os << g.names[f.index] << "(-" << f.mode << ")*";
    os << "v" << k.u;
  }
  return os.str();
}

AffineBracket affine_bracket(const LieData& g, std::size_t a, int m, std::size_t b, int n) {
  AffineBracket out;
  for (const auto& [c, f] : g.bracket.at(a).at(b)) out.terms.emplace_back(c, m + n, f);
  if (m + n == 0) out.central = m * g.form[a][b];
  return out;
}

AffineModule::AffineModule(LieData g, Integer level, GModule U)
    : g_(std::move(g)), level_(std::move(level)), U_(std::move(U)) {
  if (U_.rho.size() != g_.dim) throw DimensionError("module action does not match the Lie algebra");
}

PBWElement AffineModule::highest(std::size_t u) const {
  if (u >= U_.dim) throw PreconditionError("highest-weight index out of range");
  return PBWElement{{PBWKey{{}, u}, Rational(1)}};
}

const PBWElement& AffineModule::act_key(std::size_t a, int n, const PBWKey& k) {
  auto key = std::make_tuple(a, n, k);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  PBWElement out;
  if (k.mono.empty()) {
    if (n < 0) {
      out[PBWKey{{PBWFactor{a, -n}}, k.u}] = 1;
    } else if (n == 0) {
      for (std::size_t w = 0; w < U_.dim; ++w)
        if (U_.rho[a][w][k.u] != 0) out[PBWKey{{}, w}] = Rational(U_.rho[a][w][k.u]);
    }
  } else {
    const PBWFactor g1 = k.mono.front();
    if (n < 0 && PBWFactor{a, -n} <= g1) {
      PBWKey nk = k;
      nk.mono.insert(nk.mono.begin(), PBWFactor{a, -n});
      out[nk] = 1;
    } else {
      PBWKey rest{PBWMonomial(k.mono.begin() + 1, k.mono.end()), k.u};
      // a(n) g1 rest = g1 a(n) rest + [a(n), g1] rest
      PBWElement inner = act_key(a, n, rest);
      pbw_add(out, act(g1.index, -g1.mode, inner));
      AffineBracket br = affine_bracket(g_, a, n, g1.index, -g1.mode);
      for (const auto& [c, mode, f] : br.terms) pbw_add(out, act_key(c, mode, rest), Rational(f));
      if (br.central != 0) pbw_add(out, PBWElement{{rest, Rational(1)}}, Rational(br.central * level_));
    }
  }
  return memo_.emplace(std::move(key), std::move(out)).first->second;
}

PBWElement AffineModule::act(std::size_t a, int n, const PBWElement& v) {
  PBWElement out;
  for (const auto& [k, c] : v) {
    const PBWElement& r = act_key(a, n, k);
    pbw_add(out, r, c);
  }
  return out;
}

const std::vector<PBWKey>& AffineModule::verma_basis(int weight) {
  auto it = bases_.find(weight);
  if (it != bases_.end()) return it->second;
  std::vector<PBWKey> keys;
  if (weight >= 0) {
    std::vector<PBWMonomial> monos;
    PBWMonomial cur;
    std::function<void(int, PBWFactor)> rec = [&](int left, PBWFactor floor) {
      if (left == 0) {
        monos.push_back(cur);
        return;
      }
      for (std::size_t i = floor.index; i < g_.dim; ++i)
        for (int m = (i == floor.index ? floor.mode : 1); m <= left; ++m) {
          cur.push_back(PBWFactor{i, m});
          rec(left - m, PBWFactor{i, m});
          cur.pop_back();
        }
    };
    rec(weight, PBWFactor{0, 1});
    for (std::size_t u = 0; u < U_.dim; ++u)
      for (const auto& m : monos) keys.push_back(PBWKey{m, u});
    std::sort(keys.begin(), keys.end());
  }
  auto& idx = index_[weight];
  for (std::size_t i = 0; i < keys.size(); ++i) idx[keys[i]] = i;
  return bases_.emplace(weight, std::move(keys)).first->second;
}

RatVector AffineModule::coords(const PBWElement& v, int weight) {
  const auto& b = verma_basis(weight);
  const auto& idx = index_[weight];
  RatVector out(b.size(), Rational(0));
  for (const auto& [k, c] : v) {
    if (pbw_weight(k.mono) != weight) continue;
    out[idx.at(k)] = c;
  }
  return out;
}

PBWElement AffineModule::from_coords(const RatVector& c, int weight) {
  const auto& b = verma_basis(weight);
  if (c.size() != b.size()) throw DimensionError("coordinates do not match the Verma frame");
  PBWElement out;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) out[b[i]] = c[i];
  return out;
}

std::map<int, PBWElement> AffineModule::split_by_weight(const PBWElement& v) const {
  std::map<int, PBWElement> out;
  for (const auto& [k, c] : v) out[pbw_weight(k.mono)].emplace(k, c);
  return out;
}

PBWElement AffineModule::divided_power(std::size_t a, int m, int k, const PBWElement& v) {
  if (k < 0) throw PreconditionError("divided power exponent must be non-negative");
  PBWElement w = v;
  for (int i = 1; i <= k && !w.empty(); ++i) {
    PBWElement next = act(a, m, w);
    w.clear();
    pbw_add(w, next, Rational(1, i));
  }
  return w;
}

namespace {

// Multisets of positive integers (as nonincreasing lists) with the given size and sum.
void partitions_exact(int total, int parts, int maxpart, std::vector<int>& cur,
                      const std::function<void(const std::vector<int>&)>& f) {
  if (parts == 0) {
    if (total == 0) f(cur);
    return;
  }
  if (total < parts) return;
  for (int x = std::min(maxpart, total - (parts - 1)); x >= 1; --x) {
    cur.push_back(x);
    partitions_exact(total - x, parts - 1, x, cur, f);
    cur.pop_back();
  }
}

// Multisets of positive integers with at most maxcount parts and sum <= budget.
void partitions_bounded(int budget, int maxcount, int maxpart, std::vector<int>& cur,
                        const std::function<void(const std::vector<int>&)>& f) {
  f(cur);
  if (maxcount == 0) return;
  for (int x = std::min(maxpart, budget); x >= 1; --x) {
    cur.push_back(x);
    partitions_bounded(budget - x, maxcount - 1, x, cur, f);
    cur.pop_back();
  }
}

}  // namespace

PBWElement AffineModule::partition_operator(std::size_t a, int k, int l, const PBWElement& v) {
  if (k < 0) throw PreconditionError("partition operator needs k >= 0");
  PBWElement out;
  if (k == 0) {
    if (l == 0) out = v;
    return out;
  }
  // apply x_a(n)^i / i! for each distinct value, given as a sorted multiset
  auto apply_multiset = [&](const std::vector<int>& modes, int sign, PBWElement w) {
    std::size_t i = 0;
    while (i < modes.size() && !w.empty()) {
      std::size_t j = i;
      while (j < modes.size() && modes[j] == modes[i]) ++j;
      w = divided_power(a, sign * modes[i], static_cast<int>(j - i), w);
      i = j;
    }
    return w;
  };
  for (const auto& [w, part] : split_by_weight(v)) {
    if (w - l < 0) continue;
    std::vector<int> pos;
    partitions_bounded(w, k, w, pos, [&](const std::vector<int>& P) {
      const int p = static_cast<int>(P.size());
      int sumP = 0;
      for (int x : P) sumP += x;
      PBWElement afterP = apply_multiset(P, 1, part);
      if (afterP.empty()) return;
      for (int z = 0; z + p <= k; ++z) {
        const int q = k - p - z;
        const int S = sumP - l;
        if (q == 0 && S != 0) continue;
        if (q > 0 && S < q) continue;
        PBWElement afterZ = divided_power(a, 0, z, afterP);
        if (afterZ.empty()) continue;
        std::vector<int> neg;
        partitions_exact(S, q, S, neg, [&](const std::vector<int>& Nn) {
          pbw_add(out, apply_multiset(Nn, -1, afterZ));
        });
      }
    });
  }
  return out;
}

namespace {

template <class Ops>
AffineSpan closure(AffineModule& M, int cutoff, Ops&& ops) {
  AffineSpan span;
  std::vector<PBWElement> work;
  auto slice = [&](int w) -> ZSpanSlice& {
    auto it = span.find(w);
    if (it == span.end()) it = span.emplace(w, ZSpanSlice(M.verma_basis(w).size())).first;
    return it->second;
  };
  for (int w = 0; w <= cutoff; ++w) slice(w);
  auto offer = [&](const PBWElement& x) {
    for (auto& [w, part] : M.split_by_weight(x)) {
      if (w > cutoff) continue;
      if (slice(w).insert(M.coords(part, w))) work.push_back(part);
    }
  };
  for (std::size_t u = 0; u < M.module().dim; ++u) offer(M.highest(u));
  while (!work.empty()) {
    PBWElement v = std::move(work.back());
    work.pop_back();
    ops(v, offer);
  }
  return span;
}

}  // namespace

AffineSpan AffineModule::garland_span(int cutoff) {
  const auto roots = g_.roots();
  return closure(*this, cutoff, [&](const PBWElement& v, auto& offer) {
    const int w = pbw_weight(v.begin()->first.mono);
    for (std::size_t a : roots)
      for (int m = -(cutoff - w); m <= w; ++m) {
        PBWElement cur = v;
        for (int k = 1;; ++k) {
          PBWElement next = act(a, m, cur);
          cur.clear();
          pbw_add(cur, next, Rational(1, k));
          if (cur.empty() || w - m * k > cutoff || w - m * k < 0) break;
          offer(cur);
        }
      }
  });
}

AffineSpan AffineModule::pbw_span(int cutoff) {
  AffineSpan span;
  for (int w = 0; w <= cutoff; ++w) {
    const std::size_t n = verma_basis(w).size();
    ZSpanSlice s(n);
    for (std::size_t i = 0; i < n; ++i) {
      RatVector e(n, Rational(0));
      e[i] = 1;
      s.insert(e);
    }
    span.emplace(w, std::move(s));
  }
  return span;
}

AffineSpan AffineModule::vertex_span(int cutoff, int kmax) {
  const auto roots = g_.roots();
  return closure(*this, cutoff, [&](const PBWElement& v, auto& offer) {
    const int w = pbw_weight(v.begin()->first.mono);
    for (std::size_t a : roots)
      for (int k = 1; k <= kmax; ++k)
        for (int l = w - cutoff; l <= w; ++l) {
          PBWElement r = partition_operator(a, k, l, v);
          if (!r.empty()) offer(r);
        }
  });
}

Rational AffineModule::contravariant(const PBWElement& u, const PBWElement& v) {
  if (U_.dim != 1) throw PreconditionError("contravariant form is built for the vacuum module only");
  Rational acc = 0;
  for (const auto& [k, c] : u) {
    PBWElement w = v;
    for (const auto& f : k.mono) {
      PBWElement next;
      for (const auto& [b, s] : g_.involution[f.index]) pbw_add(next, act(b, f.mode, w), Rational(s));
      w = std::move(next);
      if (w.empty()) break;
    }
    auto it = w.find(PBWKey{{}, 0});
    if (it != w.end()) acc += c * it->second;
  }
  return acc;
}

RatMatrix AffineModule::gram(int weight) {
  const auto basis = verma_basis(weight);
  const std::size_t n = basis.size();
  RatMatrix G(n, RatVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    PBWElement ui{{basis[i], Rational(1)}};
    for (std::size_t j = 0; j < n; ++j) G[i][j] = contravariant(ui, PBWElement{{basis[j], Rational(1)}});
  }
  return G;
}

std::vector<QuotientSlice> AffineModule::irreducible_quotient(int cutoff) {
  if (level_ < 0) throw PreconditionError("irreducible quotient needs a non-negative level");
  std::vector<QuotientSlice> out;
  for (int w = 0; w <= cutoff; ++w) {
    QuotientSlice q;
    q.weight = w;
    RatMatrix G = gram(w);
    q.verma_dim = G.size();
    for (std::size_t r : independent_rows(G)) q.image.push_back(G[r]);
    q.dim = q.image.size();
    out.push_back(std::move(q));
  }
  return out;
}

RatVector AffineModule::quotient_image(const QuotientSlice& q, const PBWElement& v) {
  return multiply(q.image, coords(v, q.weight));
}

PBWElement AffineModule::omega_affine() {
  const Integer denom = 2 * (level_ + g_.dual_coxeter);
  if (denom == 0) throw PreconditionError("the critical level has no conformal vector");
  auto finv = inverse(to_rational(g_.form));
  if (!finv) throw PreconditionError("invariant form is degenerate");
  PBWElement out;
  const PBWElement one = highest(0);
  for (std::size_t i = 0; i < g_.dim; ++i)
    for (std::size_t j = 0; j < g_.dim; ++j) {
      const Rational& c = (*finv)[j][i];
      if (c == 0) continue;
      pbw_add(out, act(i, -1, act(j, -1, one)), c / denom);
    }
  return out;
}

AffineSpan quotient_span(AffineModule& M, const AffineSpan& span, const std::vector<QuotientSlice>& q) {
  AffineSpan out;
  for (const auto& qs : q) {
    ZSpanSlice s(qs.dim);
    auto it = span.find(qs.weight);
    if (it != span.end())
      for (const auto& b : it->second.basis()) s.insert(multiply(qs.image, b));
    out.emplace(qs.weight, std::move(s));
  }
  (void)M;
  return out;
}

}  // namespace zform
