#include "nmrsim/run.hpp"

#include "nmrsim/errors.hpp"

namespace nmrsim {

namespace {

// One code path for both single-state and ensemble runs: a run context holds
// the slices (one slice, z unused, for the single-state case).
struct Runner {
  const MoleculeSpec& mol;
  const RunOptions& opts;
  bool has_ensemble;
  EnsembleState ens;  // single-state runs use slices[0] only
  RunResult result;

  void for_each_slice(auto&& f) {
    for (auto& slice : ens.slices) f(slice);
  }

  void operator()(const BoundPulse& ev) {
    for_each_slice([&](LabState& s) { apply_pulse(s, ev, mol); });
  }
  void operator()(const BoundZrot& ev) {
    if (opts.zrot_as_unitary)
      for_each_slice([&](LabState& s) { apply_zrot_explicit(s, ev); });
    else
      for_each_slice([&](LabState& s) { apply_zrot(s, ev); });
  }
  void operator()(const BoundDelay& ev) {
    for_each_slice([&](LabState& s) { apply_delay(s, ev, mol); });
  }
  void operator()(const BoundGate& ev) {
    for_each_slice([&](LabState& s) { apply_gate(s, ev); });
  }
  void operator()(const BoundGradient& ev) {
    if (!has_ensemble) throw ValidationError("gradient event without an ensemble context");
    apply_gradient(ens, ev, mol);
  }
  void operator()(const BoundDiffuse&) {
    if (!has_ensemble) throw ValidationError("diffuse event without an ensemble context");
    apply_diffusion(ens, opts.diffusion_mixing);
  }
  void operator()(const BoundCheckpoint& ev) {
    LabState mean = has_ensemble ? average(ens) : ens.slices.front();
    auto [it, inserted] = result.checkpoints.insert({ev.label, mean.logical_deviation()});
    if (!inserted) throw ValidationError("duplicate checkpoint label '" + ev.label + "'");
  }
  void operator()(const BoundAcquire& ev) {
    if (has_ensemble)
      result.fid = acquire(ens, ev.duration_s, ev.dwell_s, ev.observe, mol);
    else
      result.fid = acquire(ens.slices.front(), ev.duration_s, ev.dwell_s, ev.observe, mol);
  }

  RunResult finish() {
    if (has_ensemble)
      result.final_state = std::move(ens);
    else
      result.final_state = std::move(ens.slices.front());
    return std::move(result);
  }
};

}  // namespace

RunResult run_program(const LabState& initial, const BoundProgram& prog, const MoleculeSpec& mol,
                      const RunOptions& opts) {
  if (initial.spins() != mol.size()) throw ValidationError("state does not match the molecule");
  Runner r{mol, opts, false, {}, {}};
  r.ens.slices.push_back(initial);
  r.ens.z.push_back(0.0);
  for (const auto& ev : prog.events) std::visit(r, ev);
  return r.finish();
}

RunResult run_program(const EnsembleState& initial, const BoundProgram& prog,
                      const MoleculeSpec& mol, const RunOptions& opts) {
  if (initial.spins() != mol.size()) throw ValidationError("ensemble does not match the molecule");
  Runner r{mol, opts, true, initial, {}};
  for (const auto& ev : prog.events) std::visit(r, ev);
  return r.finish();
}

}  // namespace nmrsim
