#pragma once

#include "zform/lattice.hpp"

namespace zform {

// Bilinear 2-cocycle eps0 on the dual lattice with values in Z/sZ, written in
// the base alpha_i / n_i. The section satisfies e_a e_b = eps(a,b) e_{a+b}
// with eps = omega_s^{eps0} and e_0 = 1.
struct Cocycle {
  Integer s;
  IntMatrix eps0_base;
  IntVector scale;
};

Cocycle build_cocycle(const Lattice& L);

// Residues in [0, s).
Integer epsilon_exp(const Cocycle& c, const LatticeVector& a, const LatticeVector& b);
Integer commutator_exp(const Cocycle& c, const LatticeVector& a, const LatticeVector& b);

// eps(a,b) as +1 or -1. Throws unless the residue lies in {0, s/2}, which is
// guaranteed when one argument lies in L.
int sign(const Cocycle& c, const LatticeVector& a, const LatticeVector& b);

bool verify_parity(const Cocycle& c, const Lattice& L);

std::string render_cocycle(const Cocycle& c);

}  // namespace zform
