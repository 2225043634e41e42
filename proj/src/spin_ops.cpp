#include "rff/spin_ops.hpp"

#include <cmath>

#include "rff/errors.hpp"

namespace rff {

namespace {

Mat pauli2(Axis axis) {
  Mat s(2, 2);
  const Complex i(0.0, 1.0);
  switch (axis) {
    case Axis::X: s << 0, 1, 1, 0; break;
    case Axis::Y: s << 0, -i, i, 0; break;
    case Axis::Z: s << 1, 0, 0, -1; break;
  }
  return s;
}

int check_n_atoms(int n_atoms) {
  if (n_atoms != 3 && n_atoms != 4)
    throw ParameterError("n_atoms must be 3 or 4, got " + std::to_string(n_atoms));
  return 1 << n_atoms;
}

// q = exp(i 2π/3), the basic cubic root of unity.
const Complex kQ = std::polar(1.0, 2.0 * M_PI / 3.0);

}  // namespace

Mat pauli_site(int site, Axis axis, int n_atoms) {
  check_n_atoms(n_atoms);
  if (site < 1 || site > n_atoms)
    throw ParameterError("site index " + std::to_string(site) + " out of range 1.." +
                         std::to_string(n_atoms));
  Mat op = Mat::Identity(1, 1);
  for (int k = 1; k <= n_atoms; ++k)
    op = kron(op, k == site ? pauli2(axis) : Mat::Identity(2, 2));
  return op;
}

TotalSpin total_spin(int n_atoms) {
  const int dim = check_n_atoms(n_atoms);
  TotalSpin j;
  j.jx = Mat::Zero(dim, dim);
  j.jy = Mat::Zero(dim, dim);
  j.jz = Mat::Zero(dim, dim);
  for (int k = 1; k <= n_atoms; ++k) {
    j.jx += 0.5 * pauli_site(k, Axis::X, n_atoms);
    j.jy += 0.5 * pauli_site(k, Axis::Y, n_atoms);
    j.jz += 0.5 * pauli_site(k, Axis::Z, n_atoms);
  }
  j.jsq = j.jx * j.jx + j.jy * j.jy + j.jz * j.jz;
  return j;
}

RffBasis rff_basis() {
  const int n = 3, dim = 8;
  // Site lowering operators σ_{k-} = (σ_kx - i σ_ky)/2.
  Mat lower[3];
  for (int k = 1; k <= n; ++k)
    lower[k - 1] = 0.5 * (pauli_site(k, Axis::X, n) -
                          Complex(0, 1) * pauli_site(k, Axis::Y, n));

  // Q_0 = (1/√3) Σ q^k σ_{k-},  Q_1 with q -> q^{-1}.
  Mat q0 = Mat::Zero(dim, dim), q1 = Mat::Zero(dim, dim);
  for (int k = 1; k <= n; ++k) {
    q0 += std::pow(kQ, k) * lower[k - 1];
    q1 += std::pow(kQ, -k) * lower[k - 1];
  }
  q0 /= std::sqrt(3.0);
  q1 /= std::sqrt(3.0);

  Vec up = Vec::Zero(dim);
  up(0) = 1.0;  // |↑↑↑>

  TotalSpin j = total_spin(n);
  Mat jminus = j.jx - Complex(0, 1) * j.jy;

  RffBasis b;
  b.plus[0] = q0 * up;
  b.plus[1] = q1 * up;
  b.minus[0] = jminus * b.plus[0];
  b.minus[1] = jminus * b.plus[1];
  return b;
}

Vec j3half_state(int two_m) {
  if (two_m != 1 && two_m != -1)
    throw ParameterError("j3half_state supports m = ±1/2 only");
  Vec v = Vec::Zero(8);
  // Indices of the three one-spin-down (or one-spin-up) basis states.
  // Site 1 is the most significant bit.
  if (two_m == 1) {
    v(4) = v(2) = v(1) = 1.0 / std::sqrt(3.0);
  } else {
    v(3) = v(5) = v(6) = 1.0 / std::sqrt(3.0);
  }
  return v;
}

Mat projector_j(double j, int n_atoms) {
  const int dim = check_n_atoms(n_atoms);
  if (n_atoms == 3) {
    TotalSpin spin = total_spin(3);
    if (j == 0.5) return 1.25 * Mat::Identity(dim, dim) - spin.jsq / 3.0;
    if (j == 1.5) return spin.jsq / 3.0 - 0.25 * Mat::Identity(dim, dim);
    throw ParameterError("three-atom sector label must be 1/2 or 3/2");
  }
  if (j == 0.0) return four_atom_sector().p_j0;
  throw ParameterError("four-atom projector available for j = 0 only");
}

Mat projector_half_pairwise() {
  const int n = 3, dim = 8;
  Mat sum = Mat::Zero(dim, dim);
  const std::array<std::pair<int, int>, 3> pairs{{{1, 2}, {2, 3}, {3, 1}}};
  for (auto [k, l] : pairs)
    for (Axis a : {Axis::X, Axis::Y, Axis::Z})
      sum += pauli_site(k, a, n) * pauli_site(l, a, n);
  return (3.0 * Mat::Identity(dim, dim) - sum) / 6.0;
}

namespace {

Mat sigma_dot(int k, int l, int n_atoms) {
  Mat s = Mat::Zero(1 << n_atoms, 1 << n_atoms);
  for (Axis a : {Axis::X, Axis::Y, Axis::Z})
    s += pauli_site(k, a, n_atoms) * pauli_site(l, a, n_atoms);
  return s;
}

}  // namespace

Mat sigma_rff(int i) {
  const int n = 3;
  if (i < 1 || i > 3) throw ParameterError("sigma index must be 1, 2, or 3");
  if (i == 3) {
    // σ1 · (σ2 × σ3) / √12
    const int x = 0, y = 1, z = 2;
    auto p = [&](int site, int a) { return pauli_site(site, static_cast<Axis>(a), n); };
    Mat cx = p(2, y) * p(3, z) - p(2, z) * p(3, y);
    Mat cy = p(2, z) * p(3, x) - p(2, x) * p(3, z);
    Mat cz = p(2, x) * p(3, y) - p(2, y) * p(3, x);
    Mat s = p(1, x) * cx + p(1, y) * cy + p(1, z) * cz;
    return s / std::sqrt(12.0);
  }
  // Σ1 + iΣ2 = (σ1·σ2 + q² σ2·σ3 + q σ3·σ1)/3
  Mat plus = (sigma_dot(1, 2, n) + kQ * kQ * sigma_dot(2, 3, n) +
              kQ * sigma_dot(3, 1, n)) /
             3.0;
  if (i == 1) return 0.5 * (plus + plus.adjoint().eval());
  return Complex(0, -0.5) * (plus - plus.adjoint().eval());
}

Mat sigma_rff_from_basis(int i) {
  if (i < 1 || i > 3) throw ParameterError("sigma index must be 1, 2, or 3");
  RffBasis b = rff_basis();
  Mat plus = Mat::Zero(8, 8);  // (Σ1 + iΣ2)/2 = Σ_σ |σ,0><σ,1|
  plus += b.plus[0] * b.plus[1].adjoint();
  plus += b.minus[0] * b.minus[1].adjoint();
  if (i == 1) return plus + plus.adjoint().eval();
  if (i == 2) return Complex(0, -1) * (plus - plus.adjoint().eval());
  Mat s3 = Mat::Zero(8, 8);
  for (int lambda = 0; lambda < 2; ++lambda) {
    const double sign = lambda == 0 ? 1.0 : -1.0;
    s3 += sign * b.plus[lambda] * b.plus[lambda].adjoint();
    s3 += sign * b.minus[lambda] * b.minus[lambda].adjoint();
  }
  return s3;
}

Mat encode_rff(const Vec3& s) {
  if (s.norm() > 1.0 + 1e-10)
    throw ParameterError("Bloch vector length exceeds 1");
  Mat rho = projector_j(0.5);
  for (int i = 1; i <= 3; ++i) rho += s(i - 1) * sigma_rff(i);
  return rho / 4.0;
}

DecodedState decode_rff(const Mat& rho) {
  const Mat p = projector_j(0.5);
  const double p_sector = expectation(p, rho);
  if (p_sector < 1e-12)
    throw SectorDepletedError("state has no support on the j=1/2 sector");
  DecodedState out;
  out.p_sector = p_sector;
  for (int i = 1; i <= 3; ++i)
    out.s(i - 1) = expectation(sigma_rff(i), rho) / p_sector;
  return out;
}

Mat singlet_projector(int j, int k) {
  if (j == k || j < 1 || k < 1 || j > 4 || k > 4)
    throw ParameterError("singlet pair must be two distinct sites in 1..4");
  return 0.25 * (Mat::Identity(16, 16) - sigma_dot(j, k, 4));
}

FourAtomSector four_atom_sector() {
  FourAtomSector sector;
  sector.p_j0 = (2.0 / 3.0) * (singlet_projector(1, 2) * singlet_projector(3, 4) +
                               singlet_projector(1, 3) * singlet_projector(2, 4) +
                               singlet_projector(1, 4) * singlet_projector(2, 3));

  // Pair-singlet product vectors.  singlet(a,b): ↑↓ -> +1/√2, ↓↑ -> -1/√2.
  auto pair_product = [](int a1, int a2, int b1, int b2) {
    Vec v = Vec::Zero(16);
    for (int idx = 0; idx < 16; ++idx) {
      auto bit = [&](int site) { return (idx >> (4 - site)) & 1; };  // 0 = up
      auto amp = [&](int p, int q) -> double {
        if (bit(p) == 0 && bit(q) == 1) return 1.0 / std::sqrt(2.0);
        if (bit(p) == 1 && bit(q) == 0) return -1.0 / std::sqrt(2.0);
        return 0.0;
      };
      v(idx) = amp(a1, a2) * amp(b1, b2);
    }
    return v;
  };

  Vec v1 = pair_product(1, 2, 3, 4);
  Vec v2 = pair_product(1, 3, 2, 4);
  v2 -= v1 * (v1.adjoint() * v2)(0);
  v2.normalize();
  sector.basis[0] = v1;
  sector.basis[1] = v2;
  return sector;
}

}  // namespace rff
