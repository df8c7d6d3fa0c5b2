#pragma once

#include <map>

#include "nmrsim/ensemble.hpp"

namespace nmrsim {

// Complex time record M(t_k) = M_x + i M_y of the observed planar magnetization.
struct FidRecord {
  double dwell_s = 0.0;
  std::vector<Complex> samples;
  std::vector<int> observed;
};

struct Spectrum {
  std::vector<double> freq_hz;      // ascending, spanning (-1/(2 dwell), +1/(2 dwell)]
  std::vector<Complex> amplitude;
  double resolution_hz = 0.0;
};

struct Transition {
  std::string label;  // 'u'/'d' pattern over the other spins, in spin order
  double freq_hz;
};

// 2^(n-1) transition frequencies per observed spin.
using TransitionTable = std::map<int, std::vector<Transition>>;

// Sample sum_a tr(rho(t_k) sigma_plus(a)) over the observe set, evolving rho
// under the internal Hamiltonian with per-spin phase damping between samples.
// Frames are folded into the state when acquisition starts. The sample count
// is round(duration/dwell), first sample at t = 0.
FidRecord acquire(const LabState& state, double duration_s, double dwell_s,
                  const std::vector<int>& observe, const MoleculeSpec& mol);
FidRecord acquire(const EnsembleState& ens, double duration_s, double dwell_s,
                  const std::vector<int>& observe, const MoleculeSpec& mol);

// Discrete Fourier transform scaled by dwell. Checks Parseval to 1e-9 relative.
// A decaying tone amp*e^{(i 2 pi f0 - lambda) t} appears as a Lorentzian line
// centered within one bin of f0 whose squared-magnitude profile has
// half-width-at-half-maximum lambda/(2 pi) Hz.
Spectrum dft(const FidRecord& fid);

// Transition frequency of spin a with the other spins in pattern s:
//   f = shift_a + sum_b (J_ab / 2) * (+1 if s_b is 'u' else -1)
// so the most positive peak of a group is the all-'u' pattern for J > 0.
TransitionTable transition_table(const MoleculeSpec& mol, const std::vector<int>& observe);

// Normalized matched filter: correlate the FID with e^{(i 2 pi f - lambda) t};
// a unit-amplitude decaying tone at f returns exactly 1.
Complex peak_amplitude(const FidRecord& fid, double freq_hz, double lambda_hint);

// Joint least-squares amplitudes on the known tone dictionary; exact (to
// rounding) when the FID is a sum of exactly those tones.
std::vector<Complex> peak_group_amplitudes(const FidRecord& fid, const std::vector<double>& freqs_hz,
                                           double lambda);

// tr(rho sigma_plus(spin) P_pattern) for every pattern of the spin's peak
// group, from the state directly (ideal read-out; label order matches
// transition_table).
std::vector<Complex> transition_amplitudes(const LabState& state, const MoleculeSpec& mol, int spin);

// Recover the deviation coefficient of a product operator with exactly one
// planar letter (at `spin`) from the spin's peak-group amplitudes:
// coefficient = sum_s sign(s) * Re-or-Im(A_s) / 2^n.
double infer_expectation(const MoleculeSpec& mol, int spin,
                         const std::vector<std::pair<std::string, Complex>>& peak_amps,
                         const std::string& target_letters);

struct ReadoutProbability {
  double p;            // clamped to [0, 1]
  double out_of_range; // amount removed by clamping (0 when none)
};

// p1 = (1 - a_final/a_initial) / 2
ReadoutProbability probability_from_signals(double a_initial, double a_final);

// Indices of strict local maxima of |amplitude| above `rel_threshold` * max.
std::vector<int> find_peaks(const Spectrum& spec, double rel_threshold = 1e-6);

// Half-width at half-maximum (Hz) of the squared-magnitude profile around a peak bin.
double peak_hwhm(const Spectrum& spec, int peak_index);

}  // namespace nmrsim
