#pragma once

#include <vector>

#include "nmrsim/molecule.hpp"
#include "nmrsim/pauli_poly.hpp"
#include "nmrsim/program.hpp"

namespace nmrsim {

// Accumulated logical-frame phase per spin, radians. The frame of spin j
// advances with its precession (2*pi*shift_j per second of free evolution);
// virtual z-rotations adjust it directly.
struct FrameBook {
  std::vector<double> theta;

  explicit FrameBook(int n = 0) : theta(n, 0.0) {}
  double reduced(int spin) const;  // theta mod 2pi, for reporting
};

// Working state of one molecule (or one ensemble slice). The identity part of
// the density matrix is held out of the working matrix so that it is untouched
// by evolution and invisible to every observable, which makes deviation scale
// invariance exact rather than approximate.
struct LabState {
  SpinOperator work;       // traceless working matrix in the species reference frame
  double identity_coeff = 0.0;  // full state = work + identity_coeff * Id
  bool is_density = false;
  FrameBook frames;
  double elapsed_s = 0.0;

  static LabState deviation(const SpinOperator& dev);
  static LabState deviation(const PauliPolynomial& poly, int n);
  static LabState density(const SpinOperator& rho);

  int spins() const;
  SpinOperator full_matrix() const;
  // Working matrix re-expressed in the current logical frames.
  SpinOperator logical_matrix() const;
  PauliPolynomial logical_deviation() const;
};

// Event application. Each call enforces Hermiticity and trace preservation of
// the working matrix (NumericError on violation).
void apply_pulse(LabState& state, const BoundPulse& ev, const MoleculeSpec& mol);
void apply_zrot(LabState& state, const BoundZrot& ev);
// Explicit-unitary alternative to the frame implementation of zrot; kept for
// the frame-vs-unitary equivalence contract.
void apply_zrot_explicit(LabState& state, const BoundZrot& ev);
void apply_delay(LabState& state, const BoundDelay& ev, const MoleculeSpec& mol);
void apply_gate(LabState& state, const BoundGate& ev);

// Ideal gate unitaries in the logical basis.
SpinOperator gate_unitary(GateKind kind, const std::vector<int>& targets, int n);

// Composition of the program's exact logical-frame unitaries. Requires a
// purely unitary program: instantaneous pulses, no gradients/diffusion/acquire,
// no relaxation (zero rates or norelax delays).
SpinOperator net_unitary(const BoundProgram& prog, const MoleculeSpec& mol);

}  // namespace nmrsim
