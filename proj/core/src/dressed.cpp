#include "usc_rabi/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace usc_rabi {

Matrix DressedBasis::to_dressed(const Matrix& bare) const {
  return eig.vectors.adjoint() * bare * eig.vectors;
}

Matrix DressedBasis::to_bare(const Matrix& dressed) const {
  return eig.vectors * dressed * eig.vectors.adjoint();
}

DressedBasis dressed_basis(const Operator& h) {
  DressedBasis b;
  b.layout = h.layout();
  if (b.layout.num_factors() < 2) {
    throw std::invalid_argument("dressed_basis: layout needs qubit factor(s) and a Fock factor");
  }
  b.h = h;
  b.eig = hermitian_eig(h);

  b.x_bare = field_operator(b.layout);
  b.x_dressed = b.to_dressed(b.x_bare.data());
  for (std::size_t q = 0; q + 1 < b.layout.num_factors(); ++q) {
    if (b.layout.factor(q) != 2) {
      throw std::invalid_argument("dressed_basis: factor " + std::to_string(q) +
                                  " is not a qubit");
    }
    b.sigma_x_bare.push_back(embed(pauli(PauliAxis::x), q, b.layout));
    b.sigma_z_bare.push_back(embed(pauli(PauliAxis::z), q, b.layout));
    b.sigma_x_dressed.push_back(b.to_dressed(b.sigma_x_bare.back().data()));
    b.sigma_z_dressed.push_back(b.to_dressed(b.sigma_z_bare.back().data()));
  }
  b.x_plus = Operator(b.layout, b.to_bare(positive_part(b.x_dressed)));
  b.c_plus = Operator(b.layout, b.to_bare(positive_part(b.sigma_x_dressed[0])));
  return b;
}

Matrix positive_part(const Matrix& dressed) {
  return dressed.triangularView<Eigen::StrictlyUpper>();
}

Operator plus_operator(const DressedBasis& b, const Operator& bare) {
  if (!(bare.layout() == b.layout)) throw std::invalid_argument("plus_operator: layout mismatch");
  return Operator(b.layout, b.to_bare(positive_part(b.to_dressed(bare.data()))));
}

Operator JumpSet::dephasing_op(const DressedBasis& b, std::size_t q) const {
  Matrix d = Matrix::Zero(b.dim(), b.dim());
  if (q < dephasing.size()) d.diagonal() = dephasing[q].cast<Complex>();
  return Operator(b.layout, b.to_bare(d));
}

JumpSet jump_set(const DressedBasis& b, double kappa, double gamma, double gamma_phi) {
  if (kappa < 0.0 || gamma < 0.0 || gamma_phi < 0.0) {
    throw std::invalid_argument("jump_set: negative dissipation rate");
  }
  JumpSet js;
  js.kappa = kappa;
  js.gamma = gamma;
  js.gamma_phi = gamma_phi;
  const int n = b.dim();

  std::vector<Jump> all;
  double max_rate = 0.0;
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      if (kappa > 0.0) {
        const double r = kappa * std::norm(b.x_dressed(j, k));
        all.push_back({j, k, r, JumpChannel::resonator, 0});
        max_rate = std::max(max_rate, r);
      }
      if (gamma > 0.0) {
        for (std::size_t q = 0; q < b.num_qubits(); ++q) {
          const double r = gamma * std::norm(b.sigma_x_dressed[q](j, k));
          all.push_back({j, k, r, JumpChannel::qubit, q});
          max_rate = std::max(max_rate, r);
        }
      }
    }
  }
  js.rates = Eigen::MatrixXd::Zero(n, n);
  const double floor = 1e-14 * max_rate;
  for (const Jump& jp : all) {
    if (jp.rate <= floor) continue;
    js.jumps.push_back(jp);
    js.rates(jp.j, jp.k) += jp.rate;
  }

  const double amp = std::sqrt(gamma_phi / 2.0);
  for (std::size_t q = 0; q < b.num_qubits(); ++q) {
    js.dephasing.push_back(amp * b.sigma_z_dressed[q].diagonal().real());
  }
  return js;
}

JumpSet jump_set(const DressedBasis& b, const Dissipation& d) {
  return jump_set(b, d.kappa, d.gamma, d.gamma_phi);
}

std::string bare_label(const SpaceLayout& layout, int index) {
  const std::vector<int> idx = layout.unflatten(index);
  std::string s;
  for (std::size_t f = 0; f + 1 < idx.size(); ++f) {
    s += idx[f] == 0 ? "g," : "e,";
  }
  s += std::to_string(idx.back());
  return s;
}

std::string bare_character(const SpaceLayout& layout, const Vector& v) {
  const RealVector w = v.cwiseAbs2();
  Eigen::Index top = 0;
  w.maxCoeff(&top);
  double second = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (i != top) second = std::max(second, w(i));
  }
  if (w(top) - second < 1e-6) return "mixed";
  return bare_label(layout, static_cast<int>(top));
}

std::string bare_character(const DressedBasis& b, int j) {
  return bare_character(b.layout, b.state(j));
}

int dressed_index_of(const DressedBasis& b, int bare_index) {
  Eigen::Index j = 0;
  b.eig.vectors.row(bare_index).cwiseAbs2().maxCoeff(&j);
  return static_cast<int>(j);
}

}  // namespace usc_rabi
