#include "usc_rabi/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "usc_rabi/errors.hpp"
#include "usc_rabi/peaks.hpp"

namespace usc_rabi {

namespace {

constexpr double kTraceTol = 1e-8;
constexpr double kHermTol = 1e-10;
constexpr double kMinEigTol = -1e-8;
constexpr double kPurityTol = 1e-10;
constexpr double kPhotonTol = -1e-10;
constexpr double kCorrelationTol = -1e-9;
// Below this fraction of its peak the pulse envelope is treated as off.
constexpr double kEnvelopeFloor = 1e-14;

// Tr(O rho) for O given as its transpose.
double trace_with(const Matrix& op_t, const Matrix& rho) {
  return (op_t.array() * rho.array()).sum().real();
}

struct ObservableSet {
  Matrix xx_t, cc_t, g2_t, g3_t, nbare_t;
  double kappa = 0.0;

  ObservableSet(const DressedBasis& b, double k) : kappa(k) {
    const Matrix xp = positive_part(b.x_dressed);
    const Matrix cp = positive_part(b.sigma_x_dressed[0]);
    const Matrix x2 = xp * xp;
    const Matrix x3 = x2 * xp;
    const std::size_t fock = b.layout.num_factors() - 1;
    const Operator n = embed(number_operator(b.layout.factor(fock) - 1), fock, b.layout);
    xx_t = (xp.adjoint() * xp).transpose();
    cc_t = (cp.adjoint() * cp).transpose();
    g2_t = (x2.adjoint() * x2).transpose();
    g3_t = (x3.adjoint() * x3).transpose();
    nbare_t = b.to_dressed(n.data()).transpose();
  }

  ChannelSample sample(const Matrix& rho_dressed) const {
    ChannelSample s;
    s.photon_number = trace_with(xx_t, rho_dressed);
    s.qubit_excitation = trace_with(cc_t, rho_dressed);
    s.g2 = trace_with(g2_t, rho_dressed);
    s.g3 = trace_with(g3_t, rho_dressed);
    s.output_flux = kappa * s.photon_number;
    s.bare_photon_number = trace_with(nbare_t, rho_dressed);
    return s;
  }
};

// Elementwise part of the dressed-basis dissipator: coherence decay and
// population feeding. Shared by the lab-frame and interaction-picture forms.
struct Dissipator {
  Matrix decay;             // -(out_m + out_n)/2 - sum_q (Phi_m - Phi_n)^2 / 2
  Eigen::MatrixXd rates;
  bool has_feed = false;

  explicit Dissipator(const DressedBasis& b, const JumpSet& js) {
    const int n = b.dim();
    rates = js.rates.size() == 0 ? Eigen::MatrixXd::Zero(n, n) : js.rates;
    const Eigen::VectorXd out = rates.colwise().sum().transpose();
    Eigen::MatrixXd d(n, n);
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        double v = -0.5 * (out(m) + out(k));
        for (const RealVector& phi : js.dephasing) {
          const double diff = phi(m) - phi(k);
          v -= 0.5 * diff * diff;
        }
        d(m, k) = v;
      }
    }
    decay = d.cast<Complex>();
    has_feed = rates.cwiseAbs().maxCoeff() > 0.0;
  }

  void apply(const Matrix& rho, Matrix& out) const {
    out = decay.cwiseProduct(rho);
    if (has_feed) {
      const Eigen::VectorXd pops = rho.diagonal().real();
      out.diagonal() += (rates * pops).cast<Complex>();
    }
  }
};

void validate_problem(const EvolutionProblem& p) {
  const int n = p.basis.dim();
  if (n == 0) throw ValidationError("evolve: empty dressed basis");
  if (p.rho0.rows() != n || p.rho0.cols() != n) {
    throw ValidationError("evolve: rho0 has wrong dimension");
  }
  if (hermiticity_error(p.rho0) > 1e-12) throw ValidationError("evolve: rho0 is not Hermitian");
  if (std::abs(p.rho0.trace() - Complex{1.0}) > 1e-12) {
    throw ValidationError("evolve: rho0 trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(p.rho0, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    throw ValidationError("evolve: rho0 is not positive semidefinite (min eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  if (p.t_grid.empty()) throw ValidationError("evolve: empty time grid");
  for (std::size_t i = 1; i < p.t_grid.size(); ++i) {
    if (!(p.t_grid[i] > p.t_grid[i - 1])) {
      throw ValidationError("evolve: time grid not strictly increasing");
    }
  }
  if (p.drive) {
    validate(p.drive->pulse);
    if (p.drive->qubit >= p.basis.num_qubits()) {
      throw ValidationError("evolve: drive qubit index out of range");
    }
  }
  if (!(p.step.steps_per_cycle > 0.0) || p.step.richardson_every < 1) {
    throw ValidationError("evolve: bad step control");
  }
}

// RK4 in the interaction picture of the diagonal dressed H0:
// rhoI_mn = rho_mn exp(i w_mn t). The dissipator is unchanged by the frame
// and the drive becomes diag(u) S diag(u*) with u_m = exp(i w_m t).
class Propagator {
 public:
  explicit Propagator(const EvolutionProblem& p)
      : diss_(p.basis, p.jumps) {
    omega_ = p.basis.eig.values.array() - p.basis.eig.values(0);
    if (p.drive) {
      drive_ = p.drive->pulse;
      s_ = p.basis.sigma_x_dressed[p.drive->qubit];
      envelope_floor_ = kEnvelopeFloor * drive_->peak();
    }
  }

  double omega_span() const { return omega_.maxCoeff() - omega_.minCoeff(); }

  Matrix to_interaction(const Matrix& rho, double t) const { return phased(rho, t, +1.0); }
  Matrix from_interaction(const Matrix& rho, double t) const { return phased(rho, t, -1.0); }

  void rhs(const Matrix& r, double t, Matrix& out) const {
    diss_.apply(r, out);
    if (!drive_) return;
    if (drive_->envelope(t) <= envelope_floor_) return;
    const double e = drive_->value(t);
    const Vector u = (kI * t * omega_.cast<Complex>()).array().exp();
    // c = V_I r = diag(u) S diag(u*) r
    Matrix c = s_ * (u.conjugate().asDiagonal() * r);
    c = u.asDiagonal() * c;
    c *= Complex{0.0, -e};
    out += c;
    out += c.adjoint();
  }

  void step(Matrix& r, double t, double dt) {
    rhs(r, t, k1_);
    tmp_ = r + (0.5 * dt) * k1_;
    rhs(tmp_, t + 0.5 * dt, k2_);
    tmp_ = r + (0.5 * dt) * k2_;
    rhs(tmp_, t + 0.5 * dt, k3_);
    tmp_ = r + dt * k3_;
    rhs(tmp_, t + dt, k4_);
    r += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  Matrix phased(const Matrix& rho, double t, double sign) const {
    const Vector u = (sign * kI * t * omega_.cast<Complex>()).array().exp();
    return u.asDiagonal() * rho * u.conjugate().asDiagonal();
  }

  Dissipator diss_;
  RealVector omega_;
  std::optional<PulseSpec> drive_;
  Matrix s_;
  double envelope_floor_ = 0.0;
  Matrix k1_, k2_, k3_, k4_, tmp_;
};

void record_invariants(const Matrix& rho, const ChannelSample& s, InvariantReport& rep,
                       double& trace_err, double& herm_err, double& min_eig, double& purity) {
  trace_err = std::abs(rho.trace() - Complex{1.0});
  herm_err = hermiticity_error(rho);
  const Matrix hpart = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(hpart, Eigen::EigenvaluesOnly);
  min_eig = es.eigenvalues().minCoeff();
  purity = rho.cwiseAbs2().sum();
  rep.max_trace_error = std::max(rep.max_trace_error, trace_err);
  rep.max_hermiticity_error = std::max(rep.max_hermiticity_error, herm_err);
  rep.min_eigenvalue = std::min(rep.min_eigenvalue, min_eig);
  rep.max_purity = std::max(rep.max_purity, purity);
  rep.min_photon_number = std::min(rep.min_photon_number, s.photon_number);
  rep.min_g2 = std::min(rep.min_g2, s.g2);
  rep.min_g3 = std::min(rep.min_g3, s.g3);
}

}  // namespace

std::vector<std::string> InvariantReport::breaches() const {
  std::vector<std::string> out;
  auto add = [&](const char* what, double v) {
    std::ostringstream os;
    os.precision(3);
    os << what << " (" << v << ")";
    out.push_back(os.str());
  };
  if (max_trace_error > kTraceTol) add("trace error above 1e-8", max_trace_error);
  if (max_hermiticity_error > kHermTol) add("hermiticity error above 1e-10", max_hermiticity_error);
  if (min_eigenvalue < kMinEigTol) add("density matrix eigenvalue below -1e-8", min_eigenvalue);
  if (max_purity > 1.0 + kPurityTol) add("purity above 1", max_purity);
  if (min_photon_number < kPhotonTol) add("negative photon number", min_photon_number);
  if (min_g2 < kCorrelationTol) add("negative G2", min_g2);
  if (min_g3 < kCorrelationTol) add("negative G3", min_g3);
  return out;
}

void InvariantReport::merge(const InvariantReport& o) {
  max_trace_error = std::max(max_trace_error, o.max_trace_error);
  max_hermiticity_error = std::max(max_hermiticity_error, o.max_hermiticity_error);
  min_eigenvalue = std::min(min_eigenvalue, o.min_eigenvalue);
  max_purity = std::max(max_purity, o.max_purity);
  min_photon_number = std::min(min_photon_number, o.min_photon_number);
  min_g2 = std::min(min_g2, o.min_g2);
  min_g3 = std::min(min_g3, o.min_g3);
  max_richardson_error = std::max(max_richardson_error, o.max_richardson_error);
  steps += o.steps;
  dt = dt == 0.0 ? o.dt : std::min(dt, o.dt);
}

bool TimeSeries::has(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("TimeSeries: no channel '" + name + "'");
  return values[static_cast<std::size_t>(it - names.begin())];
}

std::vector<double>& TimeSeries::channel(const std::string& name) {
  return const_cast<std::vector<double>&>(std::as_const(*this).channel(name));
}

void TimeSeries::add_channel(const std::string& name, std::vector<double> v) {
  if (has(name)) throw std::invalid_argument("TimeSeries: duplicate channel '" + name + "'");
  names.push_back(name);
  values.push_back(std::move(v));
}

const std::vector<std::string>& channel_names() {
  static const std::vector<std::string> names = {
      "photon_number", "qubit_excitation",  "g2",    "g3",
      "output_flux",   "bare_photon_number", "trace_error",
      "hermiticity_error", "min_eigenvalue", "purity"};
  return names;
}

ChannelSample observable_channels(const Matrix& rho_bare, const DressedBasis& b, double kappa) {
  return ObservableSet(b, kappa).sample(b.to_dressed(rho_bare));
}

Matrix lindblad_rhs(const Matrix& rho, double t, const EvolutionProblem& p) {
  const DressedBasis& b = p.basis;
  Matrix h = b.h.data();
  if (p.drive) h += p.drive->pulse.value(t) * b.sigma_x_bare[p.drive->qubit].data();
  Matrix d = -kI * (h * rho - rho * h);

  for (const Jump& jp : p.jumps.jumps) {
    const Vector vj = b.state(jp.j);
    const Vector vk = b.state(jp.k);
    // L = |j><k|: L rho L^dag = <k|rho|k> |j><j|, L^dag L = |k><k|
    const Complex pk = vk.dot(rho * vk);
    const Matrix lkk = projector(vk);
    d += jp.rate * (pk * projector(vj) - 0.5 * (lkk * rho + rho * lkk));
  }
  for (std::size_t q = 0; q < p.jumps.dephasing.size(); ++q) {
    const Matrix l = p.jumps.dephasing_op(b, q).data();
    const Matrix ll = l.adjoint() * l;
    d += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
  }
  return d;
}

Matrix lindblad_rhs_dressed(const Matrix& rho, double t, const EvolutionProblem& p) {
  const Dissipator diss(p.basis, p.jumps);
  Matrix d;
  diss.apply(rho, d);
  const RealVector& w = p.basis.eig.values;
  const int n = p.basis.dim();
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) d(m, k) += -kI * (w(m) - w(k)) * rho(m, k);
  }
  if (p.drive) {
    const Matrix c = (-kI * p.drive->pulse.value(t)) * (p.basis.sigma_x_dressed[p.drive->qubit] * rho);
    d += c + c.adjoint();
  }
  return d;
}

TimeSeries evolve(const EvolutionProblem& p) {
  validate_problem(p);
  Propagator prop(p);
  const ObservableSet obs(p.basis, p.jumps.kappa);

  const double span = prop.omega_span();
  const double dt_max =
      span > 0.0 ? 2.0 * std::numbers::pi / (p.step.steps_per_cycle * span) : INFINITY;

  TimeSeries ts;
  ts.times = p.t_grid;
  const std::size_t ns = p.t_grid.size();
  std::vector<std::vector<double>> cols(channel_names().size(), std::vector<double>(ns));
  InvariantReport& rep = ts.invariants;

  auto sample = [&](const Matrix& rho_d, std::size_t i) {
    const ChannelSample s = obs.sample(rho_d);
    double tr = 0, he = 0, me = 0, pu = 0;
    record_invariants(rho_d, s, rep, tr, he, me, pu);
    const double row[] = {s.photon_number, s.qubit_excitation, s.g2, s.g3, s.output_flux,
                          s.bare_photon_number, tr, he, me, pu};
    for (std::size_t c = 0; c < cols.size(); ++c) cols[c][i] = row[c];
  };

  double t = p.t_grid.front();
  Matrix rho_d = p.basis.to_dressed(p.rho0);
  Matrix r = prop.to_interaction(rho_d, t);
  sample(rho_d, 0);

  long long steps = 0;
  Matrix full, half;
  for (std::size_t i = 1; i < ns; ++i) {
    const double t_end = p.t_grid[i];
    const double interval = t_end - t;
    const double m_real = std::ceil(interval / dt_max);
    if (!(m_real < static_cast<double>(p.step.max_steps - steps))) {
      throw NumericError("evolve: step size underflow, interval " + std::to_string(interval) +
                         " needs more than " + std::to_string(p.step.max_steps) + " steps");
    }
    const long long m = std::max(1LL, static_cast<long long>(m_real));
    const double dt = interval / static_cast<double>(m);
    rep.dt = rep.dt == 0.0 ? dt : std::min(rep.dt, dt);
    for (long long s = 0; s < m; ++s) {
      const double ts_start = t + static_cast<double>(s) * dt;
      if (++steps % p.step.richardson_every == 0) {
        full = r;
        prop.step(full, ts_start, dt);
        half = r;
        prop.step(half, ts_start, 0.5 * dt);
        prop.step(half, ts_start + 0.5 * dt, 0.5 * dt);
        const double err = max_abs(full - half) / 15.0;
        rep.max_richardson_error = std::max(rep.max_richardson_error, err);
        if (err > p.step.richardson_tol) {
          throw NumericError("evolve: local error estimate " + std::to_string(err) +
                             " exceeds " + std::to_string(p.step.richardson_tol) + " at t = " +
                             std::to_string(ts_start));
        }
        r = full;
      } else {
        prop.step(r, ts_start, dt);
      }
    }
    t = t_end;
    rho_d = prop.from_interaction(r, t);
    sample(rho_d, i);
  }
  rep.steps = steps;

  for (std::size_t c = 0; c < cols.size(); ++c) ts.add_channel(channel_names()[c], std::move(cols[c]));
  ts.final_rho = p.basis.to_bare(rho_d);
  return ts;
}

Matrix ground_state_density(const DressedBasis& b) { return b.density(0); }

std::vector<double> linspace(double t0, double t1, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace: need at least two points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = t1;
  return out;
}

double rabi_period_estimate(const std::vector<double>& times, const std::vector<double>& y,
                            double prominence_fraction) {
  if (times.size() != y.size()) throw std::invalid_argument("rabi_period_estimate: size mismatch");
  const std::vector<Peak> pk = prominent_peaks(y, prominence_fraction);
  if (pk.size() < 3) {
    throw NumericError("rabi_period_estimate: found " + std::to_string(pk.size()) +
                       " oscillation peaks, need at least 3");
  }
  return (times[pk.back().index] - times[pk.front().index]) / static_cast<double>(pk.size() - 1);
}

double rabi_period_estimate(const TimeSeries& s, const std::string& channel,
                            double prominence_fraction) {
  return rabi_period_estimate(s.times, s.channel(channel), prominence_fraction);
}

}  // namespace usc_rabi
