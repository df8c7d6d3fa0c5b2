#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmrsim/operators.hpp"
#include "nmrsim/pauli_poly.hpp"

namespace nmrsim {

struct Spin {
  std::string name;
  std::string species;    // isotope tag, e.g. 13C; fixes the rotating frame
  double moment_ratio;    // relative magnetic moment (gradient winding scale)
  double shift_hz;        // chemical shift relative to the species frame
  double relax_rate;      // phase-relaxation rate lambda in 1/s
};

// Static description of the spin system. Shifts are stored per species frame,
// so absolute Larmor frequencies never enter the numerics.
class MoleculeSpec {
 public:
  MoleculeSpec(std::vector<Spin> spins, std::map<std::pair<int, int>, double> couplings);

  int size() const { return static_cast<int>(spins_.size()); }
  const std::vector<Spin>& spins() const { return spins_; }
  const Spin& spin(int i) const { return spins_.at(i); }
  int index_of(const std::string& name) const;               // -1 when absent
  int require_spin(const std::string& name) const;           // throws ValidationError

  double coupling_hz(int i, int j) const;                    // 0 when uncoupled
  const std::map<std::pair<int, int>, double>& couplings() const { return couplings_; }

 private:
  std::vector<Spin> spins_;
  std::map<std::pair<int, int>, double> couplings_;  // key (i,j) with i < j
};

// Parse the molecule-spec text format:
//   spin <name> species <tag> moment <float> shift <float> hz relax <float> persec
//   coupling <name> <name> <float> hz
// '#' starts a comment; blank lines are ignored.
MoleculeSpec parse_molecule(const std::string& text);

// H = sum_i pi*shift_i*sz(i) + sum_{i<j} (pi*J_ij/2)*sz(i)sz(j), in rad/s.
// Diagonal in the logical basis. Couplings touching any spin in `decoupled`
// are omitted.
SpinOperator internal_hamiltonian(const MoleculeSpec& mol,
                                  const std::vector<int>& decoupled = {});

// Diagonal of internal_hamiltonian as a real vector (rad/s).
Eigen::VectorXd hamiltonian_diagonal(const MoleculeSpec& mol,
                                     const std::vector<int>& decoupled = {});

// Thermal-state deviation sum_l eps_l * Z(l); positive bias = excess |0>.
PauliPolynomial equilibrium_deviation(const MoleculeSpec& mol, const std::vector<double>& epsilons);

}  // namespace nmrsim
