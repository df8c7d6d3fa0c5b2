#include "nmrsim/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "nmrsim/errors.hpp"

namespace nmrsim {

namespace {
const Complex kI(0.0, 1.0);
}

SpinOperator pauli(PauliLabel label) {
  SpinOperator m(2, 2);
  switch (label) {
    case PauliLabel::I:
      m << 1, 0, 0, 1;
      break;
    case PauliLabel::X:
      m << 0, 1, 1, 0;
      break;
    case PauliLabel::Y:
      m << 0, -kI, kI, 0;
      break;
    case PauliLabel::Z:
      m << 1, 0, 0, -1;
      break;
    case PauliLabel::Plus:
      m << 0, 2, 0, 0;
      break;
    case PauliLabel::EUp:
      m << 1, 0, 0, 0;
      break;
    case PauliLabel::EDn:
      m << 0, 0, 0, 1;
      break;
    default:
      throw ValidationError("unknown pauli label");
  }
  return m;
}

PauliLabel pauli_label_from_char(char c) {
  switch (c) {
    case 'I': return PauliLabel::I;
    case 'X': return PauliLabel::X;
    case 'Y': return PauliLabel::Y;
    case 'Z': return PauliLabel::Z;
    case '+': return PauliLabel::Plus;
    case 'u': return PauliLabel::EUp;
    case 'd': return PauliLabel::EDn;
    default:
      throw ValidationError(std::string("unknown pauli letter '") + c + "'");
  }
}

char pauli_char(PauliLabel label) {
  switch (label) {
    case PauliLabel::I: return 'I';
    case PauliLabel::X: return 'X';
    case PauliLabel::Y: return 'Y';
    case PauliLabel::Z: return 'Z';
    case PauliLabel::Plus: return '+';
    case PauliLabel::EUp: return 'u';
    case PauliLabel::EDn: return 'd';
  }
  throw ValidationError("unknown pauli label");
}

int spin_count(const SpinOperator& op) {
  if (op.rows() != op.cols() || op.rows() < 2) throw ValidationError("operator is not square with dim >= 2");
  Eigen::Index dim = op.rows();
  int n = 0;
  while (dim > 1) {
    if (dim % 2 != 0) throw ValidationError("operator dimension is not a power of two");
    dim /= 2;
    ++n;
  }
  if (n > kMaxSpins) throw ValidationError("operator exceeds the 10-spin envelope");
  return n;
}

SpinOperator kron(const SpinOperator& a, const SpinOperator& b) {
  SpinOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SpinOperator embed(const SpinOperator& op, int site, int n) {
  if (op.rows() != 2 || op.cols() != 2) throw ValidationError("embed expects a single-spin operator");
  if (n < 1 || n > kMaxSpins) throw ValidationError("spin count out of range");
  if (site < 0 || site >= n) throw ValidationError("embed site out of range");
  SpinOperator out = SpinOperator::Identity(1, 1);
  for (int s = 0; s < n; ++s)
    out = kron(out, s == site ? op : SpinOperator(SpinOperator::Identity(2, 2)));
  return out;
}

bool is_hermitian(const SpinOperator& op, double tol) {
  return max_abs(op - op.adjoint()) <= tol;
}

bool is_unitary(const SpinOperator& op, double tol) {
  SpinOperator d = op.adjoint() * op - SpinOperator::Identity(op.rows(), op.cols());
  return max_abs(d) <= tol;
}

SpinOperator rotation_from_matrix(const SpinOperator& generator, double angle) {
  if (!is_hermitian(generator)) throw ValidationError("rotation generator must be Hermitian");
  const Eigen::Index dim = generator.rows();
  const SpinOperator id = SpinOperator::Identity(dim, dim);
  SpinOperator u;
  if (max_abs(generator * generator - id) <= kHermTol) {
    u = std::cos(angle / 2) * id - kI * std::sin(angle / 2) * generator;
  } else {
    Eigen::SelfAdjointEigenSolver<SpinOperator> es(generator);
    Vec phases(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
      phases(k) = std::exp(-kI * es.eigenvalues()(k) * (angle / 2));
    u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  if (!is_unitary(u)) throw NumericError("rotation produced a non-unitary operator");
  return u;
}

SpinOperator conjugate(const SpinOperator& state, const SpinOperator& u) {
  if (state.rows() != u.rows()) throw ValidationError("conjugate dimension mismatch");
  if (!is_unitary(u)) throw ValidationError("conjugate requires a unitary");
  return u * state * u.adjoint();
}

Complex expectation(const SpinOperator& state, const SpinOperator& obs) {
  if (state.rows() != obs.rows()) throw ValidationError("expectation dimension mismatch");
  return (state * obs).trace();
}

std::array<double, 3> bloch_vector(const SpinOperator& state) {
  if (state.rows() != 2) throw ValidationError("bloch_vector expects a single-spin state");
  if (!is_hermitian(state)) throw ValidationError("bloch_vector expects a Hermitian state");
  if (std::abs(state.trace() - Complex(1.0)) > 1e-10)
    throw ValidationError("bloch_vector expects a trace-1 state");
  std::array<double, 3> v{expectation(state, pauli(PauliLabel::X)).real(),
                          expectation(state, pauli(PauliLabel::Y)).real(),
                          expectation(state, pauli(PauliLabel::Z)).real()};
  double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (norm > 1.0 + 1e-10) throw ValidationError("bloch vector outside the unit ball");
  return v;
}

SpinOperator evolution(const SpinOperator& hamiltonian, double t) {
  return rotation_from_matrix(hamiltonian, 2.0 * t);
}

SpinOperator partial_trace(const SpinOperator& state, const std::vector<int>& keep) {
  const int n = spin_count(state);
  std::vector<bool> keep_mask(n, false);
  for (int s : keep) {
    if (s < 0 || s >= n) throw ValidationError("partial_trace site out of range");
    keep_mask[s] = true;
  }
  const int nk = static_cast<int>(keep.size());
  const Eigen::Index dk = Eigen::Index(1) << nk;
  const Eigen::Index dim = state.rows();
  SpinOperator out = SpinOperator::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      // skip elements off-diagonal in any traced-out site
      Eigen::Index rk = 0, ck = 0;
      bool diag = true;
      for (int s = 0; s < n; ++s) {
        const int shift = n - 1 - s;
        const Eigen::Index rb = (r >> shift) & 1, cb = (c >> shift) & 1;
        if (keep_mask[s]) {
          rk = (rk << 1) | rb;
          ck = (ck << 1) | cb;
        } else if (rb != cb) {
          diag = false;
          break;
        }
      }
      if (diag) out(rk, ck) += state(r, c);
    }
  }
  return out;
}

double phase_invariant_distance(const SpinOperator& a, const SpinOperator& b) {
  Complex overlap = (b.adjoint() * a).trace();
  Complex phase = std::abs(overlap) < 1e-300 ? Complex(1.0) : overlap / std::abs(overlap);
  return (a - phase * b).norm();
}

double max_abs(const SpinOperator& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace nmrsim
