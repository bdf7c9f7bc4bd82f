#include "usc_rabi/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace usc_rabi {

namespace {

// Exact SI values.
constexpr double kElementaryCharge = 1.602176634e-19;  // C

}  // namespace

double flux_frequency_scale_ghz(double ip2_na) {
  // 2 I_p Phi_0 / h with Phi_0 = h / 2e reduces to 2 I_p / 2e.
  return ip2_na * 1e-9 / (2.0 * kElementaryCharge) * 1e-9;
}

double qubit_frequency_ghz(const QubitParams& q) {
  const double eps = flux_frequency_scale_ghz(q.ip2_na) * q.flux_offset;
  return std::hypot(q.delta_ghz, eps);
}

double mixing_angle(const QubitParams& q) {
  const double ratio = q.delta_ghz / qubit_frequency_ghz(q);
  return std::acos(std::clamp(ratio, -1.0, 1.0));
}

double flux_for_frequency(const QubitParams& q, double omega_q_ghz) {
  if (omega_q_ghz < q.delta_ghz) {
    throw std::invalid_argument("flux_for_frequency: " + std::to_string(omega_q_ghz) +
                                " GHz is below the qubit gap " + std::to_string(q.delta_ghz));
  }
  const double eps = std::sqrt(omega_q_ghz * omega_q_ghz - q.delta_ghz * q.delta_ghz);
  return eps / flux_frequency_scale_ghz(q.ip2_na);
}

QubitParams tuned_to(QubitParams q, double omega_q_ghz) {
  q.flux_offset = flux_for_frequency(q, omega_q_ghz);
  return q;
}

std::string to_string(Geometry g) {
  return g == Geometry::half_wave ? "half_wave" : "quarter_wave";
}

Geometry geometry_from_string(const std::string& s) {
  if (s == "half_wave") return Geometry::half_wave;
  if (s == "quarter_wave") return Geometry::quarter_wave;
  throw std::invalid_argument("unknown resonator geometry '" + s + "'");
}

double mode_frequency(const ResonatorSpec& r, int m) {
  if (m < 1) throw std::invalid_argument("mode_frequency: mode index must be >= 1");
  return r.geometry == Geometry::half_wave ? m : 2.0 * m - 1.0;
}

double mode_frequency_ghz(const ResonatorSpec& r, int m) {
  return mode_frequency(r, m) * r.omega1_ghz;
}

double PulseSpec::envelope(double t) const {
  const double x = (t - t0) / tau;
  return area * std::exp(-0.5 * x * x) / (tau * std::sqrt(2.0 * std::numbers::pi));
}

double PulseSpec::peak() const { return area / (tau * std::sqrt(2.0 * std::numbers::pi)); }

double PulseSpec::value(double t) const { return envelope(t) * std::cos(center_freq * t); }

void validate(const PulseSpec& p) {
  if (!(p.tau > 0.0)) throw std::invalid_argument("pulse tau must be > 0");
  if (!(p.area >= 0.0)) throw std::invalid_argument("pulse area must be >= 0");
}

Operator rabi_hamiltonian(double omega_q, double theta, double g, int n_max, bool rwa,
                          double omega_r) {
  const SpaceLayout layout({2, n_max + 1});
  const Operator sz = embed(pauli(PauliAxis::z), 0, layout);
  const Operator a = embed(annihilation(n_max), 1, layout);
  const Operator ad = a.adjoint();

  Operator h = 0.5 * omega_q * sz + omega_r * (ad * a);
  if (rwa) {
    const Operator sp = embed(pauli(PauliAxis::plus), 0, layout);
    const Operator sm = embed(pauli(PauliAxis::minus), 0, layout);
    h += (g * std::cos(theta)) * (a * sp + ad * sm);
  } else {
    const Operator sx = embed(pauli(PauliAxis::x), 0, layout);
    h += g * ((a + ad) * (std::cos(theta) * sx + std::sin(theta) * sz));
  }
  return h;
}

Operator build_rabi_hamiltonian(const QubitParams& q, const ResonatorSpec& r,
                                const CouplingSpec& c) {
  if (!(q.delta_ghz > 0.0)) throw std::invalid_argument("qubit delta must be > 0");
  if (!(r.omega1_ghz > 0.0)) throw std::invalid_argument("omega1 must be > 0");
  if (r.n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  if (!(c.g1 >= 0.0)) throw std::invalid_argument("g1 must be >= 0");
  const double omega_q = qubit_frequency_ghz(q) / r.omega1_ghz;
  return rabi_hamiltonian(omega_q, mixing_angle(q), c.g1, r.n_max, c.rwa);
}

Operator build_rabi_hamiltonian(const SystemConfig& cfg) {
  return build_rabi_hamiltonian(cfg.qubit, cfg.resonator, cfg.coupling);
}

Operator excitation_number_operator(const SpaceLayout& layout) {
  const std::size_t fock = layout.num_factors() - 1;
  Operator n = embed(number_operator(layout.factor(fock) - 1), fock, layout);
  for (std::size_t s = 0; s < fock; ++s) {
    if (layout.factor(s) != 2) {
      throw std::invalid_argument("excitation_number_operator: non-qubit factor before Fock");
    }
    n += embed(pauli(PauliAxis::plus) * pauli(PauliAxis::minus), s, layout);
  }
  return n;
}

Operator parity_operator(const SpaceLayout& layout) {
  const Operator n = excitation_number_operator(layout);
  Matrix p = Matrix::Zero(layout.total_dim(), layout.total_dim());
  for (int i = 0; i < layout.total_dim(); ++i) {
    const long k = std::lround(n.data()(i, i).real());
    p(i, i) = (k % 2 == 0) ? 1.0 : -1.0;
  }
  return Operator(layout, std::move(p));
}

Operator field_operator(const SpaceLayout& layout) {
  const std::size_t fock = layout.num_factors() - 1;
  const Operator a = embed(annihilation(layout.factor(fock) - 1), fock, layout);
  return a + a.adjoint();
}

Operator drive_hamiltonian(const PulseSpec& p, double t, const SpaceLayout& layout,
                           std::size_t slot) {
  return p.value(t) * embed(pauli(PauliAxis::x), slot, layout);
}

}  // namespace usc_rabi
