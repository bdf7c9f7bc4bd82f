#pragma once

// Dressed (eigen)basis of an undriven Hamiltonian and the detection and
// dissipation operators expressed in it.

#include <cstddef>
#include <string>
#include <vector>

#include "usc_rabi/linops.hpp"
#include "usc_rabi/model.hpp"

namespace usc_rabi {

/// Eigenbasis of the undriven Hamiltonian. The last layout factor is the
/// resonator; every earlier factor is a qubit. Matrices suffixed `_dressed`
/// are V^dag O V, i.e. element (j, k) = <j|O|k>.
struct DressedBasis {
  SpaceLayout layout;
  Operator h;
  EigenDecomposition eig;

  Operator x_bare;                       ///< a + a^dag
  std::vector<Operator> sigma_x_bare;    ///< one per qubit factor
  std::vector<Operator> sigma_z_bare;

  Matrix x_dressed;
  std::vector<Matrix> sigma_x_dressed;
  std::vector<Matrix> sigma_z_dressed;

  Operator x_plus;  ///< sum_{j<k} X_jk |j><k|, bare-basis representation
  Operator c_plus;  ///< same construction for sigma_x of the first qubit

  int dim() const { return layout.total_dim(); }
  std::size_t num_qubits() const { return sigma_x_bare.size(); }
  double energy(int j) const { return eig.values(j); }
  /// omega_{j,0} = omega_j - omega_0.
  double transition(int j) const { return eig.values(j) - eig.values(0); }

  Matrix to_dressed(const Matrix& bare) const;
  Matrix to_bare(const Matrix& dressed) const;
  /// Dressed state |j> as a bare-basis vector.
  Vector state(int j) const { return eig.vectors.col(j); }
  /// |j><j| in the bare basis.
  Matrix density(int j) const { return projector(state(j)); }
};

DressedBasis dressed_basis(const Operator& h);

/// Strict upper triangle of a dressed-basis matrix (the positive-frequency part).
Matrix positive_part(const Matrix& dressed);

/// sum_{j<k} <j|bare|k> |j><k| in the bare basis.
Operator plus_operator(const DressedBasis& b, const Operator& bare);

enum class JumpChannel { resonator, qubit };

/// Downward transition |k> -> |j> (k > j) at `rate`.
struct Jump {
  int j = 0;
  int k = 0;
  double rate = 0.0;
  JumpChannel channel = JumpChannel::resonator;
  std::size_t qubit = 0;  ///< source qubit for qubit-channel jumps
};

struct JumpSet {
  std::vector<Jump> jumps;
  /// Total downward rate matrix: rates(j, k) sums every jump k -> j.
  Eigen::MatrixXd rates;
  /// Phi_j = sqrt(gamma_phi / 2) <j|sigma_z|j>, one vector per qubit.
  std::vector<RealVector> dephasing;
  double kappa = 0.0;
  double gamma = 0.0;
  double gamma_phi = 0.0;

  /// sum_j Phi_j |j><j| for qubit q, in the bare basis.
  Operator dephasing_op(const DressedBasis& b, std::size_t q = 0) const;
  bool empty() const { return jumps.empty() && gamma_phi == 0.0; }
};

/// Resonator and qubit jumps with rates kappa |X_jk|^2 and gamma |sx_jk|^2.
/// Relaxation and dephasing act on every qubit factor with the same rates.
/// Rates below 1e-14 of the largest one are dropped.
JumpSet jump_set(const DressedBasis& b, double kappa, double gamma, double gamma_phi);
JumpSet jump_set(const DressedBasis& b, const Dissipation& d);

/// Bare basis label such as "e,0" or "g,e,g,2" for a composite index.
std::string bare_label(const SpaceLayout& layout, int index);

/// Largest-|component|^2 bare label of dressed state j, or "mixed" when the
/// top two weights agree within 1e-6.
std::string bare_character(const DressedBasis& b, int j);
std::string bare_character(const SpaceLayout& layout, const Vector& v);

/// Index of the dressed state with the largest weight on bare state `bare_index`.
int dressed_index_of(const DressedBasis& b, int bare_index);

}  // namespace usc_rabi
