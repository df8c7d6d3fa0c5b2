#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

namespace nmrsim {

using Complex = std::complex<double>;
// Dense complex operator on 1..10 spin-1/2 sites (dim = 2^n).
// Site 0 is the leftmost tensor factor; |0> is the +1 eigenvector of sigma_z.
using SpinOperator = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr int kMaxSpins = 10;
inline constexpr double kHermTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

enum class PauliLabel { I, X, Y, Z, Plus, EUp, EDn };

// Standard single-spin operators. Plus is sigma_x + i*sigma_y = [[0,2],[0,0]];
// EUp/EDn are the |0><0| and |1><1| projectors.
SpinOperator pauli(PauliLabel label);
PauliLabel pauli_label_from_char(char c);
char pauli_char(PauliLabel label);

// Number of spins n for a 2^n-dimensional operator; rejects other sizes.
int spin_count(const SpinOperator& op);

SpinOperator kron(const SpinOperator& a, const SpinOperator& b);

// op acting on `site` of an n-spin register, identity elsewhere.
SpinOperator embed(const SpinOperator& op, int site, int n);

bool is_hermitian(const SpinOperator& op, double tol = kHermTol);
bool is_unitary(const SpinOperator& op, double tol = kUnitaryTol);

// exp(-i * G * angle / 2). Closed form when G is an involution (G^2 = 1),
// eigendecomposition otherwise. G must be Hermitian.
SpinOperator rotation_from_matrix(const SpinOperator& generator, double angle);

// u * state * u^dagger with a unitarity check on u.
SpinOperator conjugate(const SpinOperator& state, const SpinOperator& u);

// tr(state * obs)
Complex expectation(const SpinOperator& state, const SpinOperator& obs);

// (tr(rho sx), tr(rho sy), tr(rho sz)) for a trace-1 Hermitian 2x2 state.
std::array<double, 3> bloch_vector(const SpinOperator& state);

// exp(-i * H * t) for Hermitian H (eigendecomposition).
SpinOperator evolution(const SpinOperator& hamiltonian, double t);

// Trace out all sites except `keep` (ascending site order preserved).
SpinOperator partial_trace(const SpinOperator& state, const std::vector<int>& keep);

// min over global phase of ||a - e^{i phi} b||_F
double phase_invariant_distance(const SpinOperator& a, const SpinOperator& b);

double max_abs(const SpinOperator& m);

}  // namespace nmrsim
