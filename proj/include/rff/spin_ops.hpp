#pragma once

// Exact operators on the Hilbert space of N spin-1/2 atoms (N = 3 or 4),
// the rotation-invariant qubit basis, sector projectors, and the
// encode/decode maps between Bloch vectors and three-atom states.
//
// Basis convention: computational basis |s1 s2 s3 (s4)> with site 1 as the
// most significant bit and bit value 0 meaning spin up.  Index 0 is |↑↑↑>.

#include <array>
#include <utility>

#include "rff/linalg.hpp"

namespace rff {

enum class Axis { X = 0, Y = 1, Z = 2 };

// Single-site Pauli matrix embedded in the 2^n space.
Mat pauli_site(int site, Axis axis, int n_atoms);

struct TotalSpin {
  Mat jx, jy, jz, jsq;
};

// J = (1/2) sum_k sigma_k, componentwise, plus J^2.
TotalSpin total_spin(int n_atoms);

// The four j=1/2 basis kets |+,0>, |+,1>, |-,0>, |-,1> for three atoms,
// built by applying the cyclic lowering combinations to |↑↑↑> and then J-.
// Phases follow from that construction; no renormalization is needed.
struct RffBasis {
  Vec plus[2];   // m = +1/2, lambda = 0,1
  Vec minus[2];  // m = -1/2, lambda = 0,1
};
RffBasis rff_basis();

// Symmetric j=3/2, m=±1/2 states (the sector partners of the RFF kets).
Vec j3half_state(int two_m);  // two_m in {+1, -1}

// Projector onto the j = 1/2 or j = 3/2 sector (three atoms).
// Built from the polynomial in J^2; the pairwise-dot-product form is
// available separately for cross-checking.
Mat projector_j(double j, int n_atoms = 3);
Mat projector_half_pairwise();  // (3 - σ1·σ2 - σ2·σ3 - σ3·σ1)/6

// Pauli operators of the rotation-invariant signal qubit, from the
// pairwise/triple products of the site Paulis.
Mat sigma_rff(int i);  // i in {1,2,3}

// Same operators assembled from outer products of the rff_basis kets.
Mat sigma_rff_from_basis(int i);

// rho = (P_{1/2} + s·Σ)/4; supported on the j=1/2 sector.
Mat encode_rff(const Vec3& s);

struct DecodedState {
  Vec3 s;
  double p_sector;
};
// s_i = tr(rho Σ_i)/tr(rho P), p_sector = tr(rho P).
DecodedState decode_rff(const Mat& rho);

// Four-atom singlet sector: projector onto j=0 (trace 2) and an
// orthonormal basis of its range.  The basis phase is fixed by taking the
// (12)(34) pair-singlet product vector first and Gram-Schmidt-ing the
// (13)(24) product against it.
struct FourAtomSector {
  Mat p_j0;
  Vec basis[2];
};
FourAtomSector four_atom_sector();

// Pair singlet projector S_jk = (1 - σj·σk)/4 on the 4-atom space.
Mat singlet_projector(int j, int k);

}  // namespace rff
