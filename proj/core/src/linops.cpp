#include "usc_rabi/linops.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace usc_rabi {

SpaceLayout::SpaceLayout(std::vector<int> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw std::invalid_argument("SpaceLayout: at least one factor required");
  }
  total_dim_ = 1;
  for (int f : factors_) {
    if (f < 2) {
      throw std::invalid_argument("SpaceLayout: factor dimension " + std::to_string(f) +
                                  " < 2");
    }
    total_dim_ *= f;
  }
}

SpaceLayout SpaceLayout::concat(const SpaceLayout& other) const {
  std::vector<int> f = factors_;
  f.insert(f.end(), other.factors_.begin(), other.factors_.end());
  return SpaceLayout(std::move(f));
}

std::vector<int> SpaceLayout::unflatten(int index) const {
  std::vector<int> out(factors_.size());
  for (std::size_t s = factors_.size(); s-- > 0;) {
    out[s] = index % factors_[s];
    index /= factors_[s];
  }
  return out;
}

int SpaceLayout::flatten(const std::vector<int>& indices) const {
  if (indices.size() != factors_.size()) {
    throw std::invalid_argument("SpaceLayout::flatten: wrong number of indices");
  }
  int index = 0;
  for (std::size_t s = 0; s < factors_.size(); ++s) {
    if (indices[s] < 0 || indices[s] >= factors_[s]) {
      throw std::out_of_range("SpaceLayout::flatten: index out of range");
    }
    index = index * factors_[s] + indices[s];
  }
  return index;
}

Operator::Operator(SpaceLayout layout, Matrix data)
    : layout_(std::move(layout)), data_(std::move(data)) {
  if (data_.rows() != layout_.total_dim() || data_.cols() != layout_.total_dim()) {
    throw std::invalid_argument("Operator: matrix is " + std::to_string(data_.rows()) + "x" +
                                std::to_string(data_.cols()) + ", layout needs " +
                                std::to_string(layout_.total_dim()));
  }
}

Operator Operator::adjoint() const { return Operator(layout_, data_.adjoint()); }

double Operator::hermiticity_error() const { return usc_rabi::hermiticity_error(data_); }

bool Operator::is_hermitian(double tol) const { return hermiticity_error() <= tol; }

double Operator::max_norm() const { return max_abs(data_); }

Operator& Operator::operator+=(const Operator& rhs) {
  if (!(layout_ == rhs.layout_)) throw std::invalid_argument("Operator +: layout mismatch");
  data_ += rhs.data_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  if (!(layout_ == rhs.layout_)) throw std::invalid_argument("Operator -: layout mismatch");
  data_ -= rhs.data_;
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  data_ *= s;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  if (!(lhs.layout_ == rhs.layout_)) throw std::invalid_argument("Operator *: layout mismatch");
  return Operator(lhs.layout_, lhs.data_ * rhs.data_);
}

Operator kron(const Operator& a, const Operator& b) {
  const Matrix& A = a.data();
  const Matrix& B = b.data();
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return Operator(a.layout().concat(b.layout()), std::move(out));
}

Operator identity(const SpaceLayout& layout) {
  return Operator(layout, Matrix::Identity(layout.total_dim(), layout.total_dim()));
}

Operator annihilation(int n_max) {
  if (n_max < 1) throw std::invalid_argument("annihilation: n_max must be >= 1");
  const int d = n_max + 1;
  Matrix a = Matrix::Zero(d, d);
  for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return Operator(SpaceLayout({d}), std::move(a));
}

Operator number_operator(int n_max) {
  Operator a = annihilation(n_max);
  return a.adjoint() * a;
}

Operator pauli(PauliAxis axis) {
  Matrix m = Matrix::Zero(2, 2);
  switch (axis) {
    case PauliAxis::x:
      m << 0, 1, 1, 0;
      break;
    case PauliAxis::y:
      // basis (g, e): sigma_y = i|g><e| - i|e><g| keeps [sx, sy] = 2i sz
      m(0, 1) = kI;
      m(1, 0) = -kI;
      break;
    case PauliAxis::z:
      m(0, 0) = -1.0;
      m(1, 1) = 1.0;
      break;
    case PauliAxis::plus:
      m(1, 0) = 1.0;
      break;
    case PauliAxis::minus:
      m(0, 1) = 1.0;
      break;
  }
  return Operator(SpaceLayout({2}), std::move(m));
}

Operator embed(const Operator& op, std::size_t slot, const SpaceLayout& layout) {
  if (slot >= layout.num_factors()) throw std::invalid_argument("embed: slot out of range");
  if (op.dim() != layout.factor(slot)) {
    throw std::invalid_argument("embed: operator dimension " + std::to_string(op.dim()) +
                                " does not match factor " + std::to_string(layout.factor(slot)));
  }
  // I_left (x) op (x) I_right, with left/right the products of the other factors.
  int left = 1;
  for (std::size_t s = 0; s < slot; ++s) left *= layout.factor(s);
  int right = 1;
  for (std::size_t s = slot + 1; s < layout.num_factors(); ++s) right *= layout.factor(s);

  const int d = op.dim();
  const int n = layout.total_dim();
  Matrix out = Matrix::Zero(n, n);
  const Matrix& m = op.data();
  for (int l = 0; l < left; ++l) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (m(i, j) == Complex{}) continue;
        const int row0 = (l * d + i) * right;
        const int col0 = (l * d + j) * right;
        for (int r = 0; r < right; ++r) out(row0 + r, col0 + r) = m(i, j);
      }
    }
  }
  return Operator(layout, std::move(out));
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

EigenDecomposition hermitian_eig(const Matrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_error(h) > 1e-10 * scale) {
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    Eigen::Index k = 0;
    out.vectors.col(j).cwiseAbs2().maxCoeff(&k);
    const Complex c = out.vectors(k, j);
    out.vectors.col(j) *= std::conj(c) / std::abs(c);
    out.vectors(k, j) = std::abs(out.vectors(k, j));
  }
  return out;
}

EigenDecomposition hermitian_eig(const Operator& h) { return hermitian_eig(h.data()); }

Complex expect(const Operator& op, const Matrix& rho) {
  if (rho.rows() != op.dim() || rho.cols() != op.dim()) {
    throw std::invalid_argument("expect: density matrix dimension mismatch");
  }
  // Tr(op rho) without forming the product.
  return (op.data().transpose().array() * rho.array()).sum();
}

Complex expect(const Operator& op, const Vector& psi) {
  if (psi.size() != op.dim()) throw std::invalid_argument("expect: state dimension mismatch");
  return psi.dot(op.data() * psi);
}

Matrix projector(const Vector& psi) { return psi * psi.adjoint(); }

Vector basis_vector(int dim, int index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m - m.adjoint());
}

}  // namespace usc_rabi
