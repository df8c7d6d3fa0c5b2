#pragma once

#include <map>
#include <optional>

#include "nmrsim/acquisition.hpp"

namespace nmrsim {

struct RunOptions {
  bool zrot_as_unitary = false;  // apply zrot events as explicit z-unitaries
  double diffusion_mixing = 1.0;
};

struct RunResult {
  std::variant<LabState, EnsembleState> final_state;
  std::map<std::string, PauliPolynomial> checkpoints;  // ensemble-averaged logical deviations
  std::optional<FidRecord> fid;

  const LabState& lab() const { return std::get<LabState>(final_state); }
  const EnsembleState& ensemble() const { return std::get<EnsembleState>(final_state); }
};

// Apply events in order. Gradient or diffuse events require an ensemble input.
RunResult run_program(const LabState& initial, const BoundProgram& prog, const MoleculeSpec& mol,
                      const RunOptions& opts = {});
RunResult run_program(const EnsembleState& initial, const BoundProgram& prog,
                      const MoleculeSpec& mol, const RunOptions& opts = {});

}  // namespace nmrsim
