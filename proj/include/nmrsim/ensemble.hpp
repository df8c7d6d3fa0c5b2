#pragma once

#include "nmrsim/engine.hpp"

namespace nmrsim {

// Sample model for gradient experiments: z-slices over [-a, a] at midpoint-rule
// positions, each carrying a copy of the spin state. All slices share one
// FrameBook (kept in lockstep by the runner).
struct EnsembleState {
  std::vector<double> z;
  std::vector<LabState> slices;
  double extent = 1.0;

  int spins() const { return slices.empty() ? 0 : slices.front().spins(); }
};

EnsembleState make_ensemble(const LabState& state, int n_slices, double extent);

// Per-spin z-rotation by sign * area * moment_ratio * z on the slice at z.
void apply_gradient(EnsembleState& ens, const BoundGradient& ev, const MoleculeSpec& mol);

// Replace every slice by (1-p) * slice + p * sample mean; p = 1 erases all
// memory of z, so later gradients cannot rephase earlier windings.
void apply_diffusion(EnsembleState& ens, double mixing = 1.0);

// Uniform sample mean, reduced with a fixed pairwise tree for bit-stable results.
LabState average(const EnsembleState& ens);

}  // namespace nmrsim
