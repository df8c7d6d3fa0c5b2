#include "nmrsim/pauli_poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "nmrsim/errors.hpp"

namespace nmrsim {

namespace {

const Complex kI(0.0, 1.0);

bool is_letter(char c) {
  return c == 'I' || c == 'X' || c == 'Y' || c == 'Z' || c == 'u' || c == 'd';
}

void check_letters(const std::string& letters) {
  if (letters.empty()) throw ValidationError("empty letter string");
  for (char c : letters)
    if (!is_letter(c)) throw ValidationError(std::string("bad pauli letter '") + c + "'");
}

// Single-site product a*b for a,b in {I,X,Y,Z}: result letter and phase.
std::pair<char, Complex> letter_product(char a, char b) {
  if (a == 'I') return {b, 1.0};
  if (b == 'I') return {a, 1.0};
  if (a == b) return {'I', 1.0};
  // cyclic: XY=iZ, YZ=iX, ZX=iY; reversed order flips the sign
  static constexpr char next[3] = {'Y', 'Z', 'X'};
  auto idx = [](char c) { return c == 'X' ? 0 : c == 'Y' ? 1 : 2; };
  if (next[idx(a)] == b) {
    char rest = "XYZ"[3 - idx(a) - idx(b)];
    return {rest, kI};
  }
  char rest = "XYZ"[3 - idx(a) - idx(b)];
  return {rest, -kI};
}

// cos/sin with exact values when the angle is within 1e-9 of a quarter turn.
std::pair<double, double> trig(double angle) {
  const double quarter = std::numbers::pi / 2;
  double k = std::round(angle / quarter);
  if (std::abs(angle - k * quarter) < 1e-9) {
    static constexpr double cs[4] = {1, 0, -1, 0};
    int q = static_cast<int>(std::llround(k)) & 3;
    if (q < 0) q += 4;
    return {cs[q], cs[(q + 3) & 3]};
  }
  return {std::cos(angle), std::sin(angle)};
}

std::string format_real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string format_coeff(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  if (c.real() == 0.0) return format_real(c.imag()) + "i";
  return "(" + format_real(c.real()) + (c.imag() < 0 ? "" : "+") + format_real(c.imag()) + "i)";
}

}  // namespace

PauliPolynomial::PauliPolynomial(Complex c, std::string letters, int winding) {
  check_letters(letters);
  terms.push_back({c, std::move(letters), winding});
  normalize(*this);
}

int PauliPolynomial::site_count() const {
  if (terms.empty()) return 0;
  return static_cast<int>(terms.front().letters.size());
}

PauliPolynomial& PauliPolynomial::operator+=(const PauliPolynomial& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  normalize(*this);
  return *this;
}

PauliPolynomial& PauliPolynomial::operator*=(Complex scale) {
  for (auto& t : terms) t.coeff *= scale;
  normalize(*this);
  return *this;
}

std::string PauliPolynomial::to_string() const {
  if (terms.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    Complex c = t.coeff;
    if (i == 0) {
      // leading sign folds into the coefficient
    } else if (c.imag() == 0.0 && c.real() < 0) {
      out += " - ";
      c = -c;
    } else {
      out += " + ";
    }
    out += format_coeff(c) + "*" + t.letters;
    if (t.winding != 0)
      out += "[w" + std::string(t.winding > 0 ? "+" : "") + std::to_string(t.winding) + "]";
  }
  return out;
}

PauliPolynomial term(const std::string& letters, Complex coeff, int winding) {
  return PauliPolynomial(coeff, letters, winding);
}

void normalize(PauliPolynomial& poly) {
  for (const auto& t : poly.terms) {
    check_letters(t.letters);
    if (t.letters.size() != poly.terms.front().letters.size())
      throw ValidationError("mixed letter-string lengths in one polynomial");
  }
  std::sort(poly.terms.begin(), poly.terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
    return std::tie(a.letters, a.winding) < std::tie(b.letters, b.winding);
  });
  std::vector<PauliTerm> merged;
  for (const auto& t : poly.terms) {
    if (!merged.empty() && merged.back().letters == t.letters && merged.back().winding == t.winding)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const PauliTerm& t) { return t.coeff == Complex(0.0); });
  poly.terms = std::move(merged);
}

SpinOperator realize(const PauliPolynomial& poly, int n, double u) {
  if (n < 1 || n > kMaxSpins) throw ValidationError("spin count out of range");
  const Eigen::Index dim = Eigen::Index(1) << n;
  SpinOperator out = SpinOperator::Zero(dim, dim);
  for (const auto& t : poly.terms) {
    if (static_cast<int>(t.letters.size()) != n)
      throw ValidationError("letter string length does not match spin count");
    SpinOperator prod = SpinOperator::Identity(1, 1);
    for (char c : t.letters) prod = kron(prod, pauli(pauli_label_from_char(c)));
    Complex phase = t.winding == 0 ? Complex(1.0) : std::exp(kI * double(t.winding) * u);
    out += t.coeff * phase * prod;
  }
  return out;
}

PauliPolynomial expand_projectors(const PauliPolynomial& poly) {
  PauliPolynomial out;
  for (const auto& t : poly.terms) {
    std::vector<PauliTerm> acc{{t.coeff, std::string(), t.winding}};
    for (char c : t.letters) {
      std::vector<PauliTerm> next;
      for (const auto& partial : acc) {
        if (c == 'u' || c == 'd') {
          next.push_back({partial.coeff * 0.5, partial.letters + 'I', partial.winding});
          next.push_back({partial.coeff * (c == 'u' ? 0.5 : -0.5), partial.letters + 'Z', partial.winding});
        } else {
          next.push_back({partial.coeff, partial.letters + c, partial.winding});
        }
      }
      acc = std::move(next);
    }
    for (auto& t2 : acc) out.terms.push_back(std::move(t2));
  }
  normalize(out);
  return out;
}

PauliPolynomial po_rotate(const PauliPolynomial& poly, const std::string& generator, double angle) {
  for (char c : generator)
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
      throw ValidationError("po_rotate generator letters must be in {I,X,Y,Z}");
  PauliPolynomial expanded = expand_projectors(poly);
  if (!expanded.terms.empty() && expanded.terms.front().letters.size() != generator.size())
    throw ValidationError("generator length does not match polynomial");
  auto [c, s] = trig(angle);
  PauliPolynomial out;
  for (const auto& t : expanded.terms) {
    int anti_sites = 0;
    for (size_t k = 0; k < generator.size(); ++k) {
      char g = generator[k], a = t.letters[k];
      if (g != 'I' && a != 'I' && g != a) ++anti_sites;
    }
    if (anti_sites % 2 == 0) {
      out.terms.push_back(t);
      continue;
    }
    // T -> cos(angle) T + sin(angle) (-i) G T
    out.terms.push_back({t.coeff * c, t.letters, t.winding});
    Complex phase = -kI;
    std::string prod(generator.size(), 'I');
    for (size_t k = 0; k < generator.size(); ++k) {
      auto [letter, ph] = letter_product(generator[k], t.letters[k]);
      prod[k] = letter;
      phase *= ph;
    }
    out.terms.push_back({t.coeff * s * phase, prod, t.winding});
  }
  normalize(out);
  return out;
}

PauliPolynomial gradient_wind(const PauliPolynomial& poly, int steps) {
  if (steps == 0) return poly;
  // interim letters: 'P' = X+iY (winding -steps), 'M' = X-iY (winding +steps)
  std::vector<PauliTerm> acc;
  for (const auto& t : poly.terms) {
    std::vector<PauliTerm> partials{{t.coeff, std::string(), t.winding}};
    for (char c : t.letters) {
      std::vector<PauliTerm> next;
      for (const auto& p : partials) {
        if (c == 'X') {
          next.push_back({p.coeff * 0.5, p.letters + 'P', p.winding - steps});
          next.push_back({p.coeff * 0.5, p.letters + 'M', p.winding + steps});
        } else if (c == 'Y') {
          next.push_back({p.coeff * (-0.5 * kI), p.letters + 'P', p.winding - steps});
          next.push_back({p.coeff * (0.5 * kI), p.letters + 'M', p.winding + steps});
        } else {
          next.push_back({p.coeff, p.letters + c, p.winding});
        }
      }
      partials = std::move(next);
    }
    acc.insert(acc.end(), partials.begin(), partials.end());
  }
  // back to X/Y: P = X + iY, M = X - iY
  PauliPolynomial out;
  for (const auto& t : acc) {
    std::vector<PauliTerm> partials{{t.coeff, std::string(), t.winding}};
    for (char c : t.letters) {
      std::vector<PauliTerm> next;
      for (const auto& p : partials) {
        if (c == 'P' || c == 'M') {
          next.push_back({p.coeff, p.letters + 'X', p.winding});
          next.push_back({p.coeff * (c == 'P' ? kI : -kI), p.letters + 'Y', p.winding});
        } else {
          next.push_back({p.coeff, p.letters + c, p.winding});
        }
      }
      partials = std::move(next);
    }
    for (auto& t2 : partials) out.terms.push_back(std::move(t2));
  }
  normalize(out);
  return out;
}

PauliPolynomial scale_planar(const PauliPolynomial& poly, int site, double factor) {
  PauliPolynomial out = poly;
  for (auto& t : out.terms) {
    if (site < 0 || site >= static_cast<int>(t.letters.size()))
      throw ValidationError("scale_planar site out of range");
    char c = t.letters[site];
    if (c == 'X' || c == 'Y') t.coeff *= factor;
  }
  normalize(out);
  return out;
}

PauliPolynomial drop_winding(const PauliPolynomial& poly) {
  PauliPolynomial out = poly;
  std::erase_if(out.terms, [](const PauliTerm& t) { return t.winding != 0; });
  normalize(out);
  return out;
}

double max_coeff_error(const PauliPolynomial& a, const PauliPolynomial& b) {
  PauliPolynomial diff = a;
  PauliPolynomial neg = b;
  neg *= Complex(-1.0);
  diff += neg;
  double err = 0.0;
  for (const auto& t : diff.terms) err = std::max(err, std::abs(t.coeff));
  return err;
}

Decomposition deviation_decompose(const SpinOperator& state) {
  if (!is_hermitian(state)) throw ValidationError("deviation_decompose expects a Hermitian operator");
  const int n = spin_count(state);
  const Eigen::Index dim = state.rows();
  Decomposition out;
  std::string letters(n, 'I');
  // every Pauli product has one nonzero entry per column: row = column ^ flip,
  // entry phase determined sitewise
  std::vector<int> digits(n, 0);
  const long total = 1L << (2 * n);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    Eigen::Index flip = 0;
    for (int s = n - 1; s >= 0; --s) {
      int d = rem & 3;
      rem >>= 2;
      digits[s] = d;
      letters[s] = "IXYZ"[d];
      if (d == 1 || d == 2) flip |= Eigen::Index(1) << (n - 1 - s);
    }
    Complex sum = 0.0;
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::Index row = col ^ flip;
      Complex entry(1.0);
      for (int s = 0; s < n; ++s) {
        const Eigen::Index cb = (col >> (n - 1 - s)) & 1;
        switch (digits[s]) {
          case 0: break;
          case 1: break;                                  // X: entry 1
          case 2: entry *= (cb == 0) ? kI : -kI; break;   // Y_{1,0}=i, Y_{0,1}=-i
          case 3: entry *= (cb == 0) ? 1.0 : -1.0; break; // Z
        }
      }
      sum += state(col, row) * entry;
    }
    Complex coeff = sum / double(dim);
    if (idx == 0)
      out.identity_coeff = coeff.real();
    else if (coeff != Complex(0.0))
      out.traceless.terms.push_back({coeff, letters, 0});
  }
  normalize(out.traceless);
  return out;
}

}  // namespace nmrsim
