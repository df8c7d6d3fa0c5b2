#include "nmrsim/ensemble.hpp"

#include <cmath>

#include "nmrsim/errors.hpp"

namespace nmrsim {

namespace {

const Complex kI(0.0, 1.0);

SpinOperator tree_sum(const std::vector<const SpinOperator*>& mats, size_t lo, size_t hi) {
  if (hi - lo == 1) return *mats[lo];
  size_t mid = lo + (hi - lo) / 2;
  return tree_sum(mats, lo, mid) + tree_sum(mats, mid, hi);
}

}  // namespace

EnsembleState make_ensemble(const LabState& state, int n_slices, double extent) {
  if (n_slices < 2) throw ValidationError("ensemble needs at least 2 slices");
  if (extent <= 0) throw ValidationError("ensemble extent must be positive");
  EnsembleState ens;
  ens.extent = extent;
  ens.z.reserve(n_slices);
  ens.slices.reserve(n_slices);
  for (int k = 0; k < n_slices; ++k) {
    ens.z.push_back(-extent + (k + 0.5) * 2.0 * extent / n_slices);
    ens.slices.push_back(state);
  }
  return ens;
}

void apply_gradient(EnsembleState& ens, const BoundGradient& ev, const MoleculeSpec& mol) {
  if (ens.slices.empty()) throw ValidationError("empty ensemble");
  const int n = ens.spins();
  if (n != mol.size()) throw ValidationError("ensemble does not match the molecule");
  const Eigen::Index dim = ens.slices.front().work.rows();
  for (size_t k = 0; k < ens.slices.size(); ++k) {
    Vec d(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
      double phase = 0.0;
      for (int s = 0; s < n; ++s) {
        double angle = ev.sign * ev.area * mol.spin(s).moment_ratio * ens.z[k];
        phase += angle / 2.0 * (((b >> (n - 1 - s)) & 1) ? -1.0 : 1.0);
      }
      d(b) = std::exp(-kI * phase);
    }
    SpinOperator& w = ens.slices[k].work;
    w = d.asDiagonal() * w * d.conjugate().asDiagonal();
  }
}

void apply_diffusion(EnsembleState& ens, double mixing) {
  if (mixing < 0.0 || mixing > 1.0) throw ValidationError("diffusion mixing must be in [0,1]");
  LabState mean = average(ens);
  for (auto& slice : ens.slices) {
    if (mixing == 1.0)
      slice.work = mean.work;
    else
      slice.work = (1.0 - mixing) * slice.work + mixing * mean.work;
  }
}

LabState average(const EnsembleState& ens) {
  if (ens.slices.empty()) throw ValidationError("empty ensemble");
  std::vector<const SpinOperator*> mats;
  mats.reserve(ens.slices.size());
  for (const auto& s : ens.slices) mats.push_back(&s.work);
  LabState out = ens.slices.front();
  out.work = tree_sum(mats, 0, mats.size()) / double(mats.size());
  return out;
}

}  // namespace nmrsim
