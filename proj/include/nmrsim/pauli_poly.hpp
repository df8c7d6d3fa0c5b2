#pragma once

#include <string>
#include <vector>

#include "nmrsim/operators.hpp"

namespace nmrsim {

// One product-operator term: coeff * (letters tensor product) * e^(i*winding*u),
// where u is a formal per-slice gradient phase (0 for ordinary terms).
// Letters: 'I','X','Y','Z' plus the projectors 'u' (|0><0|) and 'd' (|1><1|).
struct PauliTerm {
  Complex coeff;
  std::string letters;
  int winding = 0;
};

// Canonically ordered, merged term list. No two terms share (letters, winding);
// exactly-zero coefficients are dropped.
struct PauliPolynomial {
  std::vector<PauliTerm> terms;

  PauliPolynomial() = default;
  PauliPolynomial(Complex c, std::string letters, int winding = 0);

  int site_count() const;
  bool empty() const { return terms.empty(); }

  PauliPolynomial& operator+=(const PauliPolynomial& other);
  PauliPolynomial& operator*=(Complex scale);
  friend PauliPolynomial operator+(PauliPolynomial a, const PauliPolynomial& b) { return a += b; }
  friend PauliPolynomial operator*(Complex scale, PauliPolynomial p) { return p *= scale; }

  std::string to_string() const;
};

PauliPolynomial term(const std::string& letters, Complex coeff = 1.0, int winding = 0);

// Sort by (letters, winding), merge duplicates, drop zero coefficients.
void normalize(PauliPolynomial& poly);

// Sum of coeff * tensor(letters), winding phases evaluated at u.
SpinOperator realize(const PauliPolynomial& poly, int n, double u = 0.0);

// Replace 'u'/'d' projector letters by (I+Z)/2 and (I-Z)/2.
PauliPolynomial expand_projectors(const PauliPolynomial& poly);

// Symbolic conjugation by exp(-i*G*angle/2) for a single Pauli-product
// generator G with letters in {I,X,Y,Z}. Commuting terms pass through;
// an anticommuting term T maps to cos(angle)*T + sin(angle)*(-i)*G*T.
// Angles within 1e-9 of a multiple of 90 degrees use exact trig values, so
// quarter-turn sequences track with exactly representable coefficients.
PauliPolynomial po_rotate(const PauliPolynomial& poly, const std::string& generator, double angle);

// Symbolic z-gradient: every spin j acquires a z-rotation by angle steps*u (u is
// the formal slice phase). Planar letters are split into raising/lowering parts,
// which shift the winding by an integer, then recombined; all arithmetic is exact.
PauliPolynomial gradient_wind(const PauliPolynomial& poly, int steps);

// Multiply the coefficient of every term with a planar (X/Y) letter at `site` by `factor`.
PauliPolynomial scale_planar(const PauliPolynomial& poly, int site, double factor);

// Keep only winding-0 terms (sample average over an integer number of turns).
PauliPolynomial drop_winding(const PauliPolynomial& poly);

// Largest |coefficient| difference between two polynomials over merged keys.
double max_coeff_error(const PauliPolynomial& a, const PauliPolynomial& b);

struct Decomposition {
  double identity_coeff = 0.0;   // coefficient of the identity product
  PauliPolynomial traceless;     // all other Pauli products
};

// Exact expansion of a Hermitian operator in the Pauli-product basis,
// coefficient = tr(state * P) / 2^n.
Decomposition deviation_decompose(const SpinOperator& state);

}  // namespace nmrsim
