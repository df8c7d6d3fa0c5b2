#include "nmrsim/acquisition.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nmrsim/errors.hpp"

namespace nmrsim {

namespace {

const Complex kI(0.0, 1.0);
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct AcquisitionPlan {
  Eigen::Index samples;
  SpinOperator observable;     // sum of sigma_plus over the observe set
  Eigen::ArrayXXcd step;       // elementwise per-dwell propagator incl. damping
};

AcquisitionPlan plan_acquisition(double duration_s, double dwell_s, const std::vector<int>& observe,
                                 const MoleculeSpec& mol) {
  if (observe.empty()) throw ValidationError("empty observe set");
  if (dwell_s <= 0) throw ValidationError("dwell must be positive");
  if (dwell_s > duration_s) throw ValidationError("dwell exceeds the acquisition window");
  AcquisitionPlan plan;
  plan.samples = static_cast<Eigen::Index>(std::llround(duration_s / dwell_s));
  if (plan.samples < 2) throw ValidationError("acquisition needs at least 2 samples");

  const int n = mol.size();
  const Eigen::Index dim = Eigen::Index(1) << n;
  plan.observable = SpinOperator::Zero(dim, dim);
  for (int a : observe) {
    if (a < 0 || a >= n) throw ValidationError("observe index out of range");
    plan.observable += embed(pauli(PauliLabel::Plus), a, n);
  }

  Eigen::VectorXd h = hamiltonian_diagonal(mol);
  plan.step.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      double rate = 0.0;
      for (int s = 0; s < n; ++s)
        if (((r ^ c) >> (n - 1 - s)) & 1) rate += mol.spin(s).relax_rate;
      plan.step(r, c) = std::exp(-kI * (h(r) - h(c)) * dwell_s - rate * dwell_s);
    }
  return plan;
}

FidRecord run_acquisition(SpinOperator rho, const AcquisitionPlan& plan, double dwell_s,
                          const std::vector<int>& observe) {
  FidRecord fid;
  fid.dwell_s = dwell_s;
  fid.observed = observe;
  fid.samples.reserve(plan.samples);
  const SpinOperator obs_t = plan.observable.transpose();
  for (Eigen::Index k = 0; k < plan.samples; ++k) {
    if (k > 0) rho.array() *= plan.step;
    fid.samples.push_back(rho.cwiseProduct(obs_t).sum());
  }
  for (const Complex& m : fid.samples)
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
      throw NumericError("non-finite FID sample");
  return fid;
}

int pattern_sign(const std::string& pattern, const std::string& z_pattern) {
  int sign = 1;
  for (size_t i = 0; i < pattern.size(); ++i)
    if (z_pattern[i] == 'Z' && pattern[i] == 'd') sign = -sign;
  return sign;
}

}  // namespace

FidRecord acquire(const LabState& state, double duration_s, double dwell_s,
                  const std::vector<int>& observe, const MoleculeSpec& mol) {
  if (state.spins() != mol.size()) throw ValidationError("state does not match the molecule");
  AcquisitionPlan plan = plan_acquisition(duration_s, dwell_s, observe, mol);
  return run_acquisition(state.logical_matrix(), plan, dwell_s, observe);
}

FidRecord acquire(const EnsembleState& ens, double duration_s, double dwell_s,
                  const std::vector<int>& observe, const MoleculeSpec& mol) {
  // no gradient can occur inside an acquisition window, so averaging first is exact
  return acquire(average(ens), duration_s, dwell_s, observe, mol);
}

Spectrum dft(const FidRecord& fid) {
  const Eigen::Index n = static_cast<Eigen::Index>(fid.samples.size());
  if (n < 2) throw ValidationError("FID must hold at least 2 samples");
  Eigen::FFT<double> fft;
  std::vector<Complex> raw(fid.samples.size());
  fft.fwd(raw, fid.samples);

  Spectrum spec;
  spec.resolution_hz = 1.0 / (fid.dwell_s * double(n));
  spec.freq_hz.resize(n);
  spec.amplitude.resize(n);
  // reorder so frequencies ascend over (-1/(2 dwell), +1/(2 dwell)]
  const Eigen::Index split = n / 2 + 1;  // raw indices [0, split) are non-negative freqs
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index raw_idx = (j + split) % n;
    double cycles = double(raw_idx <= n / 2 ? raw_idx : raw_idx - n);
    spec.freq_hz[j] = cycles * spec.resolution_hz;
    spec.amplitude[j] = raw[raw_idx] * fid.dwell_s;
  }

  double time_energy = 0.0, freq_energy = 0.0;
  for (const Complex& m : fid.samples) time_energy += std::norm(m) * fid.dwell_s;
  for (const Complex& a : spec.amplitude) freq_energy += std::norm(a) / (double(n) * fid.dwell_s);
  if (std::abs(time_energy - freq_energy) > 1e-9 * std::max(1.0, time_energy))
    throw NumericError("Parseval check failed in dft");
  return spec;
}

TransitionTable transition_table(const MoleculeSpec& mol, const std::vector<int>& observe) {
  TransitionTable table;
  const int n = mol.size();
  for (int a : observe) {
    if (a < 0 || a >= n) throw ValidationError("observe index out of range");
    std::vector<Transition> group;
    const int others = n - 1;
    const Eigen::Index count = Eigen::Index(1) << others;
    for (Eigen::Index pat = 0; pat < count; ++pat) {
      std::string label(others, 'u');
      double f = mol.spin(a).shift_hz;
      int pos = 0;
      for (int b = 0; b < n; ++b) {
        if (b == a) continue;
        bool down = (pat >> (others - 1 - pos)) & 1;
        if (down) label[pos] = 'd';
        f += mol.coupling_hz(a, b) / 2.0 * (down ? -1.0 : 1.0);
        ++pos;
      }
      group.push_back({label, f});
    }
    table[a] = std::move(group);
  }
  return table;
}

Complex peak_amplitude(const FidRecord& fid, double freq_hz, double lambda_hint) {
  if (std::abs(freq_hz) > 0.5 / fid.dwell_s + 1e-12)
    throw ValidationError("frequency outside the Nyquist band");
  Complex corr = 0.0;
  double norm = 0.0;
  for (size_t k = 0; k < fid.samples.size(); ++k) {
    double t = double(k) * fid.dwell_s;
    Complex tone = std::exp((kI * kTwoPi * freq_hz - lambda_hint) * t);
    corr += fid.samples[k] * std::conj(tone);
    norm += std::norm(tone);
  }
  return corr / norm;
}

std::vector<Complex> peak_group_amplitudes(const FidRecord& fid, const std::vector<double>& freqs_hz,
                                           double lambda) {
  const Eigen::Index k = static_cast<Eigen::Index>(freqs_hz.size());
  const Eigen::Index n = static_cast<Eigen::Index>(fid.samples.size());
  if (k == 0) throw ValidationError("empty frequency list");
  Eigen::MatrixXcd tones(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      double t = double(i) * fid.dwell_s;
      tones(i, j) = std::exp((kI * kTwoPi * freqs_hz[j] - lambda) * t);
    }
  Eigen::Map<const Eigen::VectorXcd> m(fid.samples.data(), n);
  Eigen::VectorXcd sol = (tones.adjoint() * tones).ldlt().solve(tones.adjoint() * m);
  return {sol.data(), sol.data() + k};
}

std::vector<Complex> transition_amplitudes(const LabState& state, const MoleculeSpec& mol, int spin) {
  const int n = mol.size();
  if (spin < 0 || spin >= n) throw ValidationError("spin index out of range");
  SpinOperator rho = state.logical_matrix();
  TransitionTable table = transition_table(mol, {spin});
  std::vector<Complex> amps;
  for (const auto& tr : table[spin]) {
    SpinOperator op = SpinOperator::Identity(1, 1);
    int pos = 0;
    for (int b = 0; b < n; ++b) {
      if (b == spin) {
        op = kron(op, pauli(PauliLabel::Plus));
      } else {
        op = kron(op, pauli(tr.label[pos] == 'u' ? PauliLabel::EUp : PauliLabel::EDn));
        ++pos;
      }
    }
    amps.push_back((rho * op).trace());
  }
  return amps;
}

double infer_expectation(const MoleculeSpec& mol, int spin,
                         const std::vector<std::pair<std::string, Complex>>& peak_amps,
                         const std::string& target_letters) {
  const int n = mol.size();
  if (static_cast<int>(target_letters.size()) != n)
    throw ValidationError("target length does not match spin count");
  char planar = target_letters[spin];
  if (planar != 'X' && planar != 'Y')
    throw ValidationError("target must carry X or Y on the observed spin");
  std::string z_pattern;
  for (int b = 0; b < n; ++b) {
    if (b == spin) continue;
    char c = target_letters[b];
    if (c != 'I' && c != 'Z')
      throw ValidationError("target letters away from the observed spin must be I or Z");
    z_pattern += c;
  }
  if (peak_amps.size() != size_t(1) << (n - 1))
    throw ValidationError("peak group is incomplete");
  double acc = 0.0;
  for (const auto& [pattern, amp] : peak_amps) {
    if (pattern.size() != z_pattern.size()) throw ValidationError("bad peak label length");
    double part = planar == 'X' ? amp.real() : amp.imag();
    acc += pattern_sign(pattern, z_pattern) * part;
  }
  return acc / double(Eigen::Index(1) << n);
}

ReadoutProbability probability_from_signals(double a_initial, double a_final) {
  if (a_initial == 0.0) throw ValidationError("no reference signal: initial amplitude is zero");
  double p = (1.0 - a_final / a_initial) / 2.0;
  ReadoutProbability out{p, 0.0};
  if (p < 0.0) {
    out.out_of_range = -p;
    out.p = 0.0;
  } else if (p > 1.0) {
    out.out_of_range = p - 1.0;
    out.p = 1.0;
  }
  return out;
}

std::vector<int> find_peaks(const Spectrum& spec, double rel_threshold) {
  std::vector<int> peaks;
  double max_mag = 0.0;
  for (const Complex& a : spec.amplitude) max_mag = std::max(max_mag, std::abs(a));
  const int n = static_cast<int>(spec.amplitude.size());
  for (int j = 1; j + 1 < n; ++j) {
    double m = std::abs(spec.amplitude[j]);
    if (m > rel_threshold * max_mag && m > std::abs(spec.amplitude[j - 1]) &&
        m > std::abs(spec.amplitude[j + 1]))
      peaks.push_back(j);
  }
  return peaks;
}

double peak_hwhm(const Spectrum& spec, int peak_index) {
  const int n = static_cast<int>(spec.amplitude.size());
  if (peak_index <= 0 || peak_index >= n - 1) throw ValidationError("peak index out of range");
  auto power = [&](int j) { return std::norm(spec.amplitude[j]); };
  const double half = power(peak_index) / 2.0;
  auto crossing = [&](int dir) -> double {
    int j = peak_index;
    while (j + dir > 0 && j + dir < n - 1 && power(j + dir) > half) j += dir;
    // linear interpolation between bins j and j+dir
    double p0 = power(j), p1 = power(j + dir);
    double frac = p0 == p1 ? 0.0 : (p0 - half) / (p0 - p1);
    double f0 = spec.freq_hz[j], f1 = spec.freq_hz[j + dir];
    return f0 + frac * (f1 - f0);
  };
  return (crossing(+1) - crossing(-1)) / 2.0;
}

}  // namespace nmrsim
