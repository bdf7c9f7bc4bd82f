#pragma once

// Dense complex linear algebra on small composite Hilbert spaces.
//
// Basis ordering is row-major over the layout factors: qubit factor(s)
// first, Fock factor last, so the Fock index runs fastest. For a single
// qubit the composite index of |q, n> is q * (n_max + 1) + n with q = 0
// for |g> and q = 1 for |e>. Every dressed-state matrix element X_jk in
// this library depends on that convention.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace usc_rabi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Ordered subsystem dimensions of a tensor-product space.
class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<int> factors);

  const std::vector<int>& factors() const { return factors_; }
  int total_dim() const { return total_dim_; }
  std::size_t num_factors() const { return factors_.size(); }
  int factor(std::size_t slot) const { return factors_.at(slot); }

  /// Factors of *this followed by those of other.
  SpaceLayout concat(const SpaceLayout& other) const;

  /// Per-factor indices of a composite basis index.
  std::vector<int> unflatten(int index) const;
  int flatten(const std::vector<int>& indices) const;

  friend bool operator==(const SpaceLayout&, const SpaceLayout&) = default;

 private:
  std::vector<int> factors_;
  int total_dim_ = 0;
};

/// Square complex matrix tagged with the layout it acts on.
class Operator {
 public:
  Operator() = default;
  Operator(SpaceLayout layout, Matrix data);

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& data() const { return data_; }
  int dim() const { return layout_.total_dim(); }

  Operator adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;
  double hermiticity_error() const;
  double max_norm() const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex s);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Complex s, Operator op) { return op *= s; }
  friend Operator operator*(Operator op, Complex s) { return op *= s; }
  friend Operator operator*(double s, Operator op) { return op *= Complex{s, 0.0}; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  SpaceLayout layout_;
  Matrix data_;
};

/// Ascending eigenvalues with orthonormal column eigenvectors in the same order.
struct EigenDecomposition {
  RealVector values;
  Matrix vectors;

  int size() const { return static_cast<int>(values.size()); }
  Vector vector(int j) const { return vectors.col(j); }
};

enum class PauliAxis { x, y, z, plus, minus };

Operator kron(const Operator& a, const Operator& b);
Operator identity(const SpaceLayout& layout);
Operator annihilation(int n_max);
Operator number_operator(int n_max);
/// Basis order (g, e); sigma_z |e> = +|e>, sigma_plus = |e><g|.
Operator pauli(PauliAxis axis);
Operator embed(const Operator& op, std::size_t slot, const SpaceLayout& layout);
Operator commutator(const Operator& a, const Operator& b);

/// Hermitian eigendecomposition with a deterministic phase convention: the
/// largest-magnitude component of every eigenvector is made real and
/// positive. Within a degenerate subspace the solver's mixing is kept as is.
EigenDecomposition hermitian_eig(const Operator& h);
EigenDecomposition hermitian_eig(const Matrix& h);

Complex expect(const Operator& op, const Matrix& rho);
Complex expect(const Operator& op, const Vector& psi);

/// Pure-state density matrix |psi><psi|.
Matrix projector(const Vector& psi);
Vector basis_vector(int dim, int index);

double max_abs(const Matrix& m);
double hermiticity_error(const Matrix& m);

}  // namespace usc_rabi
