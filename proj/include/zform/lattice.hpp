#pragma once

#include <optional>
#include <string>

#include "zform/arith.hpp"

namespace zform {

// Coordinates in the distinguished base of L. Elements of the dual lattice
// have rational coordinates.
using LatticeVector = RatVector;

class Lattice {
 public:
  explicit Lattice(IntMatrix gram, std::optional<IntVector> scale = std::nullopt);

  std::size_t rank() const { return gram_.size(); }
  const IntMatrix& gram() const { return gram_; }
  const std::optional<IntVector>& scale() const { return scale_; }

  bool is_even() const;
  bool is_positive_definite() const;
  Integer determinant() const { return det_; }
  // Column i holds the coordinates of the dual base vector alpha_i'.
  const RatMatrix& dual_basis() const { return dual_; }
  bool is_self_dual() const;

  Rational inner(const LatticeVector& u, const LatticeVector& v) const;
  Rational norm2(const LatticeVector& v) const { return inner(v, v); }
  // (G v)_i = <alpha_i, v>
  RatVector pairing_with_base(const LatticeVector& v) const;

  bool in_lattice(const LatticeVector& v) const;
  bool in_dual(const LatticeVector& v) const;
  // Coordinates n_i v_i in the base alpha_i / n_i of the dual; requires a scale vector.
  IntVector dual_coords(const LatticeVector& v) const;

  void check_length(const LatticeVector& v) const;

 private:
  IntMatrix gram_;
  std::optional<IntVector> scale_;
  Integer det_;
  RatMatrix dual_;
};

// Change of base that diagonalizes the Gram matrix up to unimodular factors,
// so that alpha_i / n_i is a base of the dual lattice.
struct AlignedLattice {
  Lattice lattice;
  IntMatrix change;  // columns: new base vectors in old coordinates
};
AlignedLattice align_to_dual(const Lattice& L);

// Returns a lattice carrying a scale vector, aligning the base when needed.
AlignedLattice with_scale(const Lattice& L);

Lattice parse_lattice(const std::string& text);
Lattice load_lattice(const std::string& path);
std::string render_lattice(const Lattice& L);

namespace builtin {
Lattice a1();
Lattice a2();
Lattice a2_aligned();
Lattice ii11();
Lattice e8();
Lattice identity(std::size_t rank);
}  // namespace builtin

// Resolves "a1", "a2", "ii11", "e8" or a file path.
Lattice lattice_by_name(const std::string& name_or_path);

}  // namespace zform
