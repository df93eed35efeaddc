#pragma once

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "zform/lattice.hpp"

namespace zform {

// alpha_index(-n), n >= 1. Indices are 0-based internally.
struct Mode {
  int index = 0;
  int n = 1;
  auto operator<=>(const Mode&) const = default;
};

// Sorted multiset of creation modes.
using HeisMonomial = std::vector<Mode>;
using HeisPoly = std::map<HeisMonomial, Rational>;

int degree(const HeisMonomial& m);
HeisMonomial mono_product(const HeisMonomial& a, const HeisMonomial& b);
std::string render_monomial(const HeisMonomial& m);

struct Bidegree {
  LatticeVector gamma;
  Rational weight;
  bool operator==(const Bidegree& o) const { return gamma == o.gamma && weight == o.weight; }
  bool operator<(const Bidegree& o) const {
    if (gamma != o.gamma) return gamma < o.gamma;
    return weight < o.weight;
  }
};

std::string render_bidegree(const Bidegree& d);

class FockElement {
 public:
  FockElement() = default;
  static FockElement vacuum(std::size_t rank);
  static FockElement basis(const LatticeVector& gamma, HeisMonomial m = {}, Rational c = 1);

  // sector gamma -> polynomial in creation modes
  std::map<LatticeVector, HeisPoly> terms;

  bool is_zero() const { return terms.empty(); }
  void add_term(const LatticeVector& gamma, const HeisMonomial& m, const Rational& c);
  void add(const FockElement& other, const Rational& scale = 1);
  FockElement scaled(const Rational& c) const;
  std::size_t term_count() const;
  int max_degree() const;

  bool operator==(const FockElement&) const = default;
};

FockElement operator+(const FockElement& a, const FockElement& b);
FockElement operator-(const FockElement& a, const FockElement& b);

Rational term_weight(const Lattice& L, const LatticeVector& gamma, const HeisMonomial& m);
std::vector<Bidegree> bidegrees(const Lattice& L, const FockElement& v);
// The d-homogeneous component.
FockElement component(const Lattice& L, const FockElement& v, const Bidegree& d);
bool is_homogeneous(const Lattice& L, const FockElement& v);

HeisPoly poly_product(const HeisPoly& a, const HeisPoly& b);
void poly_add(HeisPoly& into, const HeisPoly& p, const Rational& scale = 1);
FockElement multiply_creation(const HeisPoly& p, const FockElement& v);

// h(n) for h in Q (x) L given by coordinates in the base.
FockElement heis_act(const Lattice& L, const RatVector& h, int n, const FockElement& v);
// Base vector alpha_i(n).
FockElement alpha_act(const Lattice& L, std::size_t i, int n, const FockElement& v);
// Annihilation part h(n), n > 0, on a single polynomial; pairing = (G h).
HeisPoly annihilate(const RatVector& pairing, int n, const HeisPoly& p);

// Canonical monomials of total mode sum N in a rank-r Fock space.
struct Frame {
  std::vector<HeisMonomial> monomials;
  std::map<HeisMonomial, std::size_t> index;
  std::size_t size() const { return monomials.size(); }
};
std::shared_ptr<const Frame> frame(std::size_t rank, int N);

// Heisenberg degree N of a bidegree; throws if the bidegree is invalid.
int heisenberg_degree(const Lattice& L, const Bidegree& d);
std::vector<HeisMonomial> monomial_basis(const Lattice& L, const Bidegree& d);
RatVector coords(const Lattice& L, const FockElement& v, const Bidegree& d);
FockElement from_coords(const Lattice& L, const Bidegree& d, const RatVector& c);

std::string render(const FockElement& v);

}  // namespace zform
