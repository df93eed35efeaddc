#include "zform/lattice.hpp"

#include <fstream>
#include <sstream>

namespace zform {

Lattice::Lattice(IntMatrix gram, std::optional<IntVector> scale)
    : gram_(std::move(gram)), scale_(std::move(scale)) {
  const std::size_t n = gram_.size();
  if (n == 0) throw PreconditionError("lattice rank must be positive");
  for (const auto& row : gram_)
    if (row.size() != n) throw DimensionError("gram matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (gram_[i][j] != gram_[j][i]) throw PreconditionError("gram matrix is not symmetric");
  det_ = zform::determinant(gram_);
  if (det_ == 0) throw PreconditionError("gram matrix is degenerate");
  dual_ = *inverse(to_rational(gram_));
  if (scale_) {
    const auto& s = *scale_;
    if (s.size() != n) throw DimensionError("scale vector length differs from rank");
    Integer prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] <= 0) throw PreconditionError("scale entries must be positive");
      for (std::size_t j = 0; j < n; ++j)
        if (gram_[i][j] % s[i] != 0)
          throw PreconditionError("scale vector does not present the dual lattice: n_" +
                                  std::to_string(i + 1) + " does not divide row " +
                                  std::to_string(i + 1));
      prod *= s[i];
    }
    if (prod != abs(det_))
      throw PreconditionError("scale vector product " + prod.get_str() + " differs from |det| " +
                              Integer(abs(det_)).get_str());
  }
}

bool Lattice::is_even() const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (gram_[i][i] % 2 != 0) return false;
  return true;
}

bool Lattice::is_positive_definite() const {
  for (std::size_t k = 1; k <= rank(); ++k) {
    IntMatrix minor(k, IntVector(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor[i][j] = gram_[i][j];
    if (zform::determinant(minor) <= 0) return false;
  }
  return true;
}

bool Lattice::is_self_dual() const {
  for (const auto& row : dual_)
    for (const auto& x : row)
      if (!is_integer(x)) return false;
  return true;
}

void Lattice::check_length(const LatticeVector& v) const {
  if (v.size() != rank())
    throw DimensionError("vector of length " + std::to_string(v.size()) + " for rank " +
                         std::to_string(rank()));
}

Rational Lattice::inner(const LatticeVector& u, const LatticeVector& v) const {
  check_length(u);
  check_length(v);
  Rational acc = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < rank(); ++j)
      if (v[j] != 0 && gram_[i][j] != 0) acc += u[i] * gram_[i][j] * v[j];
  }
  return acc;
}

RatVector Lattice::pairing_with_base(const LatticeVector& v) const {
  check_length(v);
  RatVector out(rank(), Rational(0));
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j)
      if (gram_[i][j] != 0 && v[j] != 0) out[i] += gram_[i][j] * v[j];
  return out;
}

bool Lattice::in_lattice(const LatticeVector& v) const {
  check_length(v);
  return all_integer(v);
}

bool Lattice::in_dual(const LatticeVector& v) const { return all_integer(pairing_with_base(v)); }

IntVector Lattice::dual_coords(const LatticeVector& v) const {
  if (!scale_) throw PreconditionError("dual coordinates need a scale vector");
  check_length(v);
  IntVector out(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    Rational c = v[i] * (*scale_)[i];
    if (!is_integer(c)) throw PreconditionError("vector is not in the dual lattice");
    out[i] = c.get_num();
  }
  return out;
}

AlignedLattice align_to_dual(const Lattice& L) {
  const std::size_t n = L.rank();
  IntMatrix a = L.gram();
  IntMatrix v(n, IntVector(n, Integer(0)));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;

  auto col_op = [&](std::size_t dst, std::size_t src, const Integer& q) {
    // column dst -= q * column src, mirrored in v
    for (std::size_t r = 0; r < n; ++r) {
      a[r][dst] -= q * a[r][src];
      v[r][dst] -= q * v[r][src];
    }
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (std::size_t r = 0; r < n; ++r) {
      std::swap(a[r][x], a[r][y]);
      std::swap(v[r][x], v[r][y]);
    }
  };

  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block moves to (t, t)
      std::size_t bi = n, bj = n;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a[i][j] != 0 && (bi == n || abs(a[i][j]) < abs(a[bi][bj]))) bi = i, bj = j;
      if (bi == n) throw PreconditionError("gram matrix is degenerate");
      std::swap(a[t], a[bi]);
      col_swap(t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        Integer q = floor_div(a[i][t], a[t][t]);
        if (q != 0)
          for (std::size_t j = t; j < n; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        Integer q = floor_div(a[t][j], a[t][t]);
        if (q != 0) col_op(j, t, q);
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
  }

  IntMatrix g2(n, IntVector(n, Integer(0)));
  const IntMatrix& g = L.gram();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < n; ++p) {
        if (v[p][i] == 0) continue;
        for (std::size_t q = 0; q < n; ++q) g2[i][j] += v[p][i] * g[p][q] * v[q][j];
      }
  IntVector scale(n);
  for (std::size_t i = 0; i < n; ++i) scale[i] = abs(a[i][i]);
  return AlignedLattice{Lattice(g2, scale), v};
}

AlignedLattice with_scale(const Lattice& L) {
  if (L.scale()) {
    IntMatrix id(L.rank(), IntVector(L.rank(), Integer(0)));
    for (std::size_t i = 0; i < L.rank(); ++i) id[i][i] = 1;
    return AlignedLattice{L, id};
  }
  return align_to_dual(L);
}

namespace {

IntVector parse_int_row(std::istringstream& in, std::size_t n, const std::string& what) {
  IntVector row;
  std::string tok;
  while (in >> tok) {
    Rational r = parse_rational(tok);
    if (!is_integer(r)) throw ParseError(what + " entries must be integers, got '" + tok + "'");
    row.push_back(r.get_num());
  }
  if (row.size() != n)
    throw ParseError(what + " row has " + std::to_string(row.size()) + " entries, expected " +
                     std::to_string(n));
  return row;
}

}  // namespace

Lattice parse_lattice(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  std::size_t rank = 0;
  IntMatrix gram;
  std::optional<IntVector> scale;
  bool in_gram = false;
  while (std::getline(lines, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string key;
    if (!(in >> key)) continue;
    if (key == "rank") {
      long r = 0;
      if (!(in >> r) || r <= 0) throw ParseError("rank must be a positive integer");
      rank = static_cast<std::size_t>(r);
      in_gram = false;
    } else if (key == "gram") {
      if (rank == 0) throw ParseError("'gram' before 'rank'");
      in_gram = true;
    } else if (key == "scale") {
      if (rank == 0) throw ParseError("'scale' before 'rank'");
      scale = parse_int_row(in, rank, "scale");
      in_gram = false;
    } else if (in_gram) {
      std::istringstream full(line);
      gram.push_back(parse_int_row(full, rank, "gram"));
      if (gram.size() == rank) in_gram = false;
    } else {
      throw ParseError("unexpected line: '" + line + "'");
    }
  }
  if (rank == 0) throw ParseError("missing 'rank'");
  if (gram.size() != rank) throw ParseError("gram has " + std::to_string(gram.size()) + " rows");
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (gram[i][j] != gram[j][i]) throw ParseError("gram matrix is not symmetric");
  try {
    return Lattice(gram, scale);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

Lattice load_lattice(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lattice file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_lattice(buf.str());
}

std::string render_lattice(const Lattice& L) {
  std::ostringstream os;
  os << "rank " << L.rank() << "\ngram\n";
  for (const auto& row : L.gram()) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
    os << '\n';
  }
  if (L.scale()) {
    os << "scale";
    for (const auto& x : *L.scale()) os << ' ' << x;
    os << '\n';
  }
  return os.str();
}

namespace builtin {

Lattice a1() { return Lattice({{2}}, IntVector{2}); }

Lattice a2() { return Lattice({{2, -1}, {-1, 2}}); }

// base {alpha_2, alpha_1 + 2 alpha_2}: the second vector is 3 times a dual vector
Lattice a2_aligned() { return Lattice({{2, 3}, {3, 6}}, IntVector{1, 3}); }

Lattice ii11() { return Lattice({{0, 1}, {1, 0}}, IntVector{1, 1}); }

Lattice e8() {
  IntMatrix g(8, IntVector(8, Integer(0)));
  for (int i = 0; i < 8; ++i) g[i][i] = 2;
  const int edges[][2] = {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}};
  for (const auto& e : edges) {
    g[e[0] - 1][e[1] - 1] = -1;
    g[e[1] - 1][e[0] - 1] = -1;
  }
  return Lattice(g, IntVector(8, Integer(1)));
}

Lattice identity(std::size_t rank) {
  IntMatrix g(rank, IntVector(rank, Integer(0)));
  for (std::size_t i = 0; i < rank; ++i) g[i][i] = 1;
  return Lattice(g, IntVector(rank, Integer(1)));
}

}  // namespace builtin

Lattice lattice_by_name(const std::string& name) {
  if (name == "a1") return builtin::a1();
  if (name == "a2") return builtin::a2_aligned();
  if (name == "ii11") return builtin::ii11();
  if (name == "e8") return builtin::e8();
  return load_lattice(name);
}

}  // namespace zform
