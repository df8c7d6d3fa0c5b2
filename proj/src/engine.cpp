#include "nmrsim/engine.hpp"

#include <cmath>
#include <numbers>

#include "nmrsim/errors.hpp"

namespace nmrsim {

namespace {

const Complex kI(0.0, 1.0);
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double z_value(Eigen::Index basis, int spin, int n) {
  return ((basis >> (n - 1 - spin)) & 1) ? -1.0 : 1.0;
}

// Diagonal of the frame unitary F = tensor_j rotation(Z_j, theta_j).
Vec frame_diagonal(const FrameBook& frames) {
  const int n = static_cast<int>(frames.theta.size());
  const Eigen::Index dim = Eigen::Index(1) << n;
  Vec f(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    double phase = 0.0;
    for (int s = 0; s < n; ++s) phase += frames.theta[s] * z_value(b, s, n);
    f(b) = std::exp(-kI * phase / 2.0);
  }
  return f;
}

void conjugate_by_diagonal(SpinOperator& m, const Vec& d) {
  m = d.asDiagonal() * m * d.conjugate().asDiagonal();
}

// cos(angle/2) I - i sin(angle/2) (cos(phase) X + sin(phase) Y)
SpinOperator planar_rotation_2x2(double phase, double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  SpinOperator u(2, 2);
  u(0, 0) = c;
  u(1, 1) = c;
  u(0, 1) = -kI * s * std::exp(-kI * phase);
  u(1, 0) = -kI * s * std::exp(kI * phase);
  return u;
}

SpinOperator pulse_unitary(const BoundPulse& ev, const FrameBook& frames, int n) {
  SpinOperator u = SpinOperator::Identity(1, 1);
  for (int s = 0; s < n; ++s) {
    bool hit = std::find(ev.targets.begin(), ev.targets.end(), s) != ev.targets.end();
    if (hit)
      u = kron(u, planar_rotation_2x2(ev.phase_rad + frames.theta[s], ev.angle_rad));
    else
      u = kron(u, SpinOperator::Identity(2, 2));
  }
  return u;
}

void check_state(const LabState& state, double trace_before) {
  if (!is_hermitian(state.work))
    throw NumericError("working matrix lost Hermiticity");
  if (std::abs(state.work.trace().real() - trace_before) > 1e-10 ||
      std::abs(state.work.trace().imag()) > 1e-10)
    throw NumericError("working matrix trace drifted");
}

Eigen::MatrixXd damping_rates(const MoleculeSpec& mol) {
  const int n = mol.size();
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::MatrixXd rates(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      double rate = 0.0;
      for (int s = 0; s < n; ++s)
        if (((r ^ c) >> (n - 1 - s)) & 1) rate += mol.spin(s).relax_rate;
      rates(r, c) = rate;
    }
  return rates;
}

}  // namespace

double FrameBook::reduced(int spin) const {
  double t = std::fmod(theta.at(spin), kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

LabState LabState::deviation(const SpinOperator& dev) {
  if (!is_hermitian(dev)) throw ValidationError("deviation must be Hermitian");
  LabState s;
  s.work = dev;
  s.identity_coeff = 0.0;
  s.is_density = false;
  s.frames = FrameBook(spin_count(dev));
  return s;
}

LabState LabState::deviation(const PauliPolynomial& poly, int n) {
  return deviation(realize(poly, n));
}

LabState LabState::density(const SpinOperator& rho) {
  if (!is_hermitian(rho)) throw ValidationError("density matrix must be Hermitian");
  LabState s;
  const Eigen::Index dim = rho.rows();
  s.identity_coeff = rho.trace().real() / double(dim);
  s.work = rho - s.identity_coeff * SpinOperator::Identity(dim, dim);
  s.is_density = true;
  s.frames = FrameBook(spin_count(rho));
  return s;
}

int LabState::spins() const { return static_cast<int>(frames.theta.size()); }

SpinOperator LabState::full_matrix() const {
  return work + identity_coeff * SpinOperator::Identity(work.rows(), work.cols());
}

SpinOperator LabState::logical_matrix() const {
  Vec f = frame_diagonal(frames);
  // F^dagger * work * F
  return f.conjugate().asDiagonal() * work * f.asDiagonal();
}

PauliPolynomial LabState::logical_deviation() const {
  return deviation_decompose(logical_matrix()).traceless;
}

void apply_pulse(LabState& state, const BoundPulse& ev, const MoleculeSpec& mol) {
  const double trace_before = state.work.trace().real();
  const int n = state.spins();
  if (!ev.duration_s || *ev.duration_s == 0.0) {
    SpinOperator u = pulse_unitary(ev, state.frames, n);
    state.work = u * state.work * u.adjoint();
  } else {
    // Finite width: alternate internal evolution and the pulse rotation,
    // at least 64 slices per 90 degrees of total angle (symmetric split).
    const double duration = *ev.duration_s;
    const int slices =
        std::max(64, static_cast<int>(std::ceil(64.0 * std::abs(ev.angle_rad) / (std::numbers::pi / 2))));
    const double dt = duration / slices;
    Eigen::VectorXd h = hamiltonian_diagonal(mol);
    Vec half_step(h.size());
    for (Eigen::Index b = 0; b < h.size(); ++b) half_step(b) = std::exp(-kI * h(b) * (dt / 2));
    BoundPulse slice_ev = ev;
    slice_ev.angle_rad = ev.angle_rad / slices;
    slice_ev.duration_s.reset();
    SpinOperator u = pulse_unitary(slice_ev, state.frames, n);
    for (int k = 0; k < slices; ++k) {
      conjugate_by_diagonal(state.work, half_step);
      state.work = u * state.work * u.adjoint();
      conjugate_by_diagonal(state.work, half_step);
    }
    for (int s = 0; s < n; ++s) state.frames.theta[s] += kTwoPi * mol.spin(s).shift_hz * duration;
    state.elapsed_s += duration;
  }
  check_state(state, trace_before);
}

void apply_zrot(LabState& state, const BoundZrot& ev) {
  // Rotating the state by phi around z == retarding the frame phase by phi.
  state.frames.theta.at(ev.target) -= ev.angle_rad;
}

void apply_zrot_explicit(LabState& state, const BoundZrot& ev) {
  const double trace_before = state.work.trace().real();
  const int n = state.spins();
  const Eigen::Index dim = state.work.rows();
  Vec d(dim);
  for (Eigen::Index b = 0; b < dim; ++b)
    d(b) = std::exp(-kI * ev.angle_rad / 2.0 * z_value(b, ev.target, n));
  conjugate_by_diagonal(state.work, d);
  check_state(state, trace_before);
}

void apply_delay(LabState& state, const BoundDelay& ev, const MoleculeSpec& mol) {
  const double trace_before = state.work.trace().real();
  const int n = state.spins();
  if (n != mol.size()) throw ValidationError("state does not match the molecule");
  const double t = ev.duration_s;
  Eigen::VectorXd h = hamiltonian_diagonal(mol, ev.decouple);
  Vec phases(h.size());
  for (Eigen::Index b = 0; b < h.size(); ++b) phases(b) = std::exp(-kI * h(b) * t);
  conjugate_by_diagonal(state.work, phases);
  if (ev.relax) {
    Eigen::MatrixXd rates = damping_rates(mol);
    state.work.array() *= (-t * rates.array()).exp().cast<Complex>();
  }
  for (int s = 0; s < n; ++s) state.frames.theta[s] += kTwoPi * mol.spin(s).shift_hz * t;
  state.elapsed_s += t;
  check_state(state, trace_before);
}

SpinOperator gate_unitary(GateKind kind, const std::vector<int>& targets, int n) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  SpinOperator g = SpinOperator::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    Eigen::Index out = b;
    auto bit = [&](int s) { return (b >> (n - 1 - s)) & 1; };
    if (kind == GateKind::Cnot) {
      if (bit(targets[0])) out = b ^ (Eigen::Index(1) << (n - 1 - targets[1]));
    } else {
      if (bit(targets[0]) && bit(targets[1])) out = b ^ (Eigen::Index(1) << (n - 1 - targets[2]));
    }
    g(out, b) = 1.0;
  }
  return g;
}

void apply_gate(LabState& state, const BoundGate& ev) {
  const double trace_before = state.work.trace().real();
  const int n = state.spins();
  SpinOperator g = gate_unitary(ev.kind, ev.targets, n);
  // the gate is defined in the logical frames: conjugate it into the reference frame
  Vec f = frame_diagonal(state.frames);
  SpinOperator u = f.asDiagonal() * g * f.conjugate().asDiagonal();
  state.work = u * state.work * u.adjoint();
  check_state(state, trace_before);
}

SpinOperator net_unitary(const BoundProgram& prog, const MoleculeSpec& mol) {
  const int n = mol.size();
  const Eigen::Index dim = Eigen::Index(1) << n;
  SpinOperator u = SpinOperator::Identity(dim, dim);
  FrameBook zero_frames(n);
  for (const auto& ev : prog.events) {
    if (const auto* p = std::get_if<BoundPulse>(&ev)) {
      if (p->duration_s)
        throw ValidationError("net unitary requires instantaneous pulses");
      u = pulse_unitary(*p, zero_frames, n) * u;
    } else if (const auto* z = std::get_if<BoundZrot>(&ev)) {
      Vec d(dim);
      for (Eigen::Index b = 0; b < dim; ++b)
        d(b) = std::exp(-kI * z->angle_rad / 2.0 * z_value(b, z->target, n));
      u = SpinOperator(d.asDiagonal()) * u;
    } else if (const auto* dl = std::get_if<BoundDelay>(&ev)) {
      if (dl->relax)
        for (const auto& s : mol.spins())
          if (s.relax_rate > 0)
            throw ValidationError("net unitary requires norelax delays or zero rates");
      // logical delay evolves under the coupling terms only
      MoleculeSpec shiftless = [&] {
        std::vector<Spin> spins = mol.spins();
        for (auto& s : spins) s.shift_hz = 0.0;
        return MoleculeSpec(std::move(spins), mol.couplings());
      }();
      Eigen::VectorXd h = hamiltonian_diagonal(shiftless, dl->decouple);
      Vec d(dim);
      for (Eigen::Index b = 0; b < dim; ++b) d(b) = std::exp(-kI * h(b) * dl->duration_s);
      u = SpinOperator(d.asDiagonal()) * u;
    } else if (const auto* g = std::get_if<BoundGate>(&ev)) {
      u = gate_unitary(g->kind, g->targets, n) * u;
    } else if (std::holds_alternative<BoundCheckpoint>(ev)) {
      continue;
    } else {
      throw ValidationError("net unitary is undefined for gradient, diffuse, or acquire events");
    }
  }
  if (!is_unitary(u)) throw NumericError("net unitary composition is not unitary");
  return u;
}

}  // namespace nmrsim
