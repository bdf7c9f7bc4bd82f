#include "usc_rabi/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "usc_rabi/dressed.hpp"
#include "usc_rabi/errors.hpp"

namespace usc_rabi {

GhzConfig::GhzConfig() {
  resonator.n_max = 8;
  qubits[0] = {QubitParams{2.25, 630.0, 0.0}, 0.15, 10.0, 1.8, 2.2};
  qubits[1] = {QubitParams{3.6, 630.0, 0.0}, 0.02, 5.4, 0.9, 1.1};
  qubits[2] = {QubitParams{3.4, 630.0, 0.0}, 0.02, 6.4, 0.9, 1.1};
}

std::array<double, 3> GhzConfig::idle() const {
  std::array<double, 3> w{};
  for (int q = 0; q < 3; ++q) w[q] = qubits[q].idle_ghz / resonator.omega1_ghz;
  return w;
}

void validate(const GhzConfig& cfg) {
  if (cfg.qubits[0].g < 0.1) throw ValidationError("ghz: qubit 1 must be ultrastrongly coupled (g >= 0.1)");
  for (int q = 1; q < 3; ++q) {
    if (cfg.qubits[q].g <= 0.0 || cfg.qubits[q].g > 0.05) {
      throw ValidationError("ghz: qubit " + std::to_string(q + 1) +
                            " must be strongly, not ultrastrongly, coupled (0 < g <= 0.05)");
    }
  }
  for (int q = 0; q < 3; ++q) {
    const GhzQubit& gq = cfg.qubits[q];
    const double delta = gq.qubit.delta_ghz / cfg.resonator.omega1_ghz;
    if (!(gq.qubit.delta_ghz > 0.0)) throw ValidationError("ghz: qubit delta must be > 0");
    if (gq.idle_ghz < gq.qubit.delta_ghz) {
      throw ValidationError("ghz: qubit " + std::to_string(q + 1) + " idle frequency below its gap");
    }
    if (!(gq.search_hi > gq.search_lo) || gq.search_lo < delta) {
      throw ValidationError("ghz: qubit " + std::to_string(q + 1) +
                            " resonance window must be increasing and above the gap");
    }
  }
  if (cfg.resonator.n_max < 3) throw ValidationError("ghz: n_max must be >= 3");
  if (!(cfg.pulse_tau > 0.0)) throw ValidationError("ghz: pulse tau must be > 0");
  if (cfg.samples_per_segment < 2) throw ValidationError("ghz: need >= 2 samples per segment");
}

Operator build_ghz_hamiltonian(const GhzConfig& cfg, const std::array<double, 3>& omega_q) {
  const SpaceLayout layout = cfg.layout();
  const Operator x = field_operator(layout);
  const Operator a = embed(annihilation(cfg.resonator.n_max), 3, layout);
  Operator h = a.adjoint() * a;
  for (std::size_t q = 0; q < 3; ++q) {
    const double delta = cfg.qubits[q].qubit.delta_ghz / cfg.resonator.omega1_ghz;
    const double theta = std::acos(std::min(1.0, delta / omega_q[q]));
    const Operator sx = embed(pauli(PauliAxis::x), q, layout);
    const Operator sz = embed(pauli(PauliAxis::z), q, layout);
    h += (0.5 * omega_q[q]) * sz;
    h += cfg.qubits[q].g * (x * (std::cos(theta) * sx + std::sin(theta) * sz));
  }
  return h;
}

int ghz_index(const GhzConfig& cfg, int q1, int q2, int q3, int n) {
  return cfg.layout().flatten({q1, q2, q3, n});
}

namespace {

Segment pi_pulse(const GhzConfig& cfg, const std::string& name) {
  const std::array<double, 3> idle = cfg.idle();
  const DressedBasis b = dressed_basis(build_ghz_hamiltonian(cfg, idle));
  const int i = dressed_index_of(b, ghz_index(cfg, 0, 0, 0, 0));
  const int f = dressed_index_of(b, ghz_index(cfg, 1, 0, 0, 0));
  const double m = std::abs(b.sigma_x_dressed[0](f, i));
  if (m < 1e-6) throw NumericError("ghz: qubit 1 transition is dark at the idle point");

  Segment s;
  s.name = name;
  s.omega_q = idle;
  s.rotation = std::numbers::pi;
  s.splitting = b.energy(f) - b.energy(i);
  Drive d;
  d.qubit = 0;
  d.pulse.area = std::numbers::pi / m;
  d.pulse.center_freq = s.splitting;
  d.pulse.tau = cfg.pulse_tau;
  d.pulse.t0 = 5.0 * cfg.pulse_tau;
  s.drive = d;
  s.duration = 10.0 * cfg.pulse_tau;
  return s;
}

Segment resonant_step(const GhzConfig& cfg, const std::string& name, std::size_t q,
                      int bare_a, int bare_b, double rotation) {
  const std::array<double, 3> idle = cfg.idle();
  auto family = [&](double w) {
    std::array<double, 3> wq = idle;
    wq[q] = w;
    return build_ghz_hamiltonian(cfg, wq);
  };
  SplittingOptions opt;
  const SplittingResult r = minimum_splitting(family, cfg.qubits[q].search_lo,
                                              cfg.qubits[q].search_hi, {bare_a, bare_b}, opt);
  if (!(r.gap > 0.0)) throw NumericError("ghz: resonance for " + name + " has zero splitting");
  Segment s;
  s.name = name;
  s.omega_q = idle;
  s.omega_q[q] = r.x_star;
  s.rotation = rotation;
  s.splitting = r.gap;
  s.duration = rotation / r.gap;
  return s;
}

}  // namespace

Schedule ghz_schedule(const GhzConfig& cfg) {
  validate(cfg);
  Schedule s;
  s.segments.push_back(pi_pulse(cfg, "pi_pulse"));
  s.segments.push_back(resonant_step(cfg, "step1", 0, ghz_index(cfg, 1, 0, 0, 0),
                                     ghz_index(cfg, 0, 0, 0, 2), std::numbers::pi / 2.0));
  s.segments.push_back(resonant_step(cfg, "step2", 1, ghz_index(cfg, 0, 0, 0, 2),
                                     ghz_index(cfg, 0, 1, 0, 1), std::numbers::pi));
  s.segments.push_back(resonant_step(cfg, "step3", 2, ghz_index(cfg, 0, 1, 0, 1),
                                     ghz_index(cfg, 0, 1, 1, 0), std::numbers::pi));
  s.segments.push_back(pi_pulse(cfg, "final_pi_pulse"));
  return s;
}

Vector ghz_target(const GhzConfig& cfg) {
  const int n = cfg.layout().total_dim();
  Vector v = Vector::Zero(n);
  v(ghz_index(cfg, 0, 0, 0, 0)) = 1.0 / std::numbers::sqrt2;
  v(ghz_index(cfg, 1, 1, 1, 0)) = 1.0 / std::numbers::sqrt2;
  return v;
}

double fidelity(const Matrix& rho, const Vector& target) {
  return target.dot(rho * target).real();
}

double ghz_fidelity_phase_max(const Matrix& rho, const GhzConfig& cfg) {
  const int a = ghz_index(cfg, 0, 0, 0, 0);
  const int b = ghz_index(cfg, 1, 1, 1, 0);
  return 0.5 * (rho(a, a).real() + rho(b, b).real()) + std::abs(rho(a, b));
}

double vacuum_population(const Matrix& rho, const SpaceLayout& layout) {
  const int d = layout.factor(layout.num_factors() - 1);
  double p = 0.0;
  for (int i = 0; i < layout.total_dim(); i += d) p += rho(i, i).real();
  return p;
}

ProtocolResult run_protocol(const GhzConfig& cfg, const Schedule& schedule, bool dissipation) {
  validate(cfg);
  if (schedule.segments.empty()) throw ValidationError("ghz: empty schedule");
  const Vector target = ghz_target(cfg);
  const SpaceLayout layout = cfg.layout();

  ProtocolResult res;
  Matrix rho = ground_state_density(dressed_basis(build_ghz_hamiltonian(cfg, cfg.idle())));
  double t = 0.0;
  for (const Segment& seg : schedule.segments) {
    if (!(seg.duration > 0.0)) throw ValidationError("ghz: segment '" + seg.name + "' has no duration");
    EvolutionProblem p;
    p.basis = dressed_basis(build_ghz_hamiltonian(cfg, seg.omega_q));
    p.jumps = dissipation ? jump_set(p.basis, cfg.dissipation) : jump_set(p.basis, 0.0, 0.0, 0.0);
    p.drive = seg.drive;
    p.rho0 = 0.5 * (rho + rho.adjoint());
    p.rho0 /= p.rho0.trace();
    p.t_grid = linspace(0.0, seg.duration, static_cast<std::size_t>(cfg.samples_per_segment));
    const TimeSeries ts = evolve(p);
    res.invariants.merge(ts.invariants);
    rho = ts.final_rho;
    t += seg.duration;

    SegmentSnapshot snap;
    snap.name = seg.name;
    snap.t_end = t;
    snap.fidelity = fidelity(rho, target);
    snap.fidelity_phase_max = ghz_fidelity_phase_max(rho, cfg);
    snap.vacuum_population = vacuum_population(rho, layout);
    snap.purity = rho.cwiseAbs2().sum();
    snap.rho = rho;
    if (seg.name == "step3") res.vacuum_after_entangling = snap.vacuum_population;
    res.snapshots.push_back(std::move(snap));
  }
  res.rho = rho;
  res.fidelity = fidelity(rho, target);
  res.fidelity_phase_max = ghz_fidelity_phase_max(rho, cfg);
  return res;
}

}  // namespace usc_rabi
