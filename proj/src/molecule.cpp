#include "nmrsim/molecule.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nmrsim/errors.hpp"

namespace nmrsim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kWeakCouplingRatio = 0.2;
}  // namespace

MoleculeSpec::MoleculeSpec(std::vector<Spin> spins, std::map<std::pair<int, int>, double> couplings)
    : spins_(std::move(spins)), couplings_(std::move(couplings)) {
  if (spins_.empty()) throw ValidationError("molecule has no spins");
  if (static_cast<int>(spins_.size()) > kMaxSpins)
    throw ValidationError("molecule exceeds the 10-spin envelope");
  for (size_t i = 0; i < spins_.size(); ++i) {
    for (size_t j = i + 1; j < spins_.size(); ++j)
      if (spins_[i].name == spins_[j].name)
        throw ValidationError("duplicate spin name '" + spins_[i].name + "'");
    if (spins_[i].relax_rate < 0)
      throw ValidationError("negative relaxation rate on spin '" + spins_[i].name + "'");
  }
  for (const auto& [key, j_hz] : couplings_) {
    auto [a, b] = key;
    if (a < 0 || b < 0 || a >= size() || b >= size())
      throw ValidationError("coupling references an unknown spin index");
    if (a >= b) throw ValidationError("coupling keys must have i < j");
    // same-species pairs must satisfy the weak-coupling condition
    if (spins_[a].species == spins_[b].species) {
      double delta = std::abs(spins_[a].shift_hz - spins_[b].shift_hz);
      if (std::abs(j_hz) > kWeakCouplingRatio * delta)
        throw ValidationError("strong coupling between same-species spins '" + spins_[a].name +
                              "' and '" + spins_[b].name + "': |J| exceeds " +
                              std::to_string(kWeakCouplingRatio) + " of the shift difference");
    }
  }
}

int MoleculeSpec::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (spins_[i].name == name) return i;
  return -1;
}

int MoleculeSpec::require_spin(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw ValidationError("unknown spin '" + name + "'");
  return i;
}

double MoleculeSpec::coupling_hz(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = couplings_.find({i, j});
  return it == couplings_.end() ? 0.0 : it->second;
}

namespace {

struct LineLexer {
  std::vector<std::string> tokens;
  std::vector<int> columns;
  int line;

  LineLexer(const std::string& text, int line_no) : line(line_no) {
    size_t i = 0;
    while (i < text.size()) {
      if (text[i] == '#') break;
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') ++i;
      tokens.push_back(text.substr(start, i - start));
      columns.push_back(static_cast<int>(start) + 1);
    }
  }
};

class MoleculeParser {
 public:
  explicit MoleculeParser(const std::string& text) : text_(text) {}

  MoleculeSpec parse() {
    std::istringstream in(text_);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      LineLexer lex(raw, line_no);
      if (lex.tokens.empty()) continue;
      if (lex.tokens[0] == "spin")
        parse_spin(lex);
      else if (lex.tokens[0] == "coupling")
        parse_coupling(lex);
      else
        throw ParseError("expected 'spin' or 'coupling', got '" + lex.tokens[0] + "'", line_no,
                         lex.columns[0]);
    }
    if (spins_.empty()) throw ParseError("molecule file declares no spins", line_no, 1);
    std::map<std::pair<int, int>, double> resolved;
    for (const auto& c : raw_couplings_) {
      int a = index_of(c.a), b = index_of(c.b);
      if (a < 0) throw ParseError("coupling references unknown spin '" + c.a + "'", c.line, 1);
      if (b < 0) throw ParseError("coupling references unknown spin '" + c.b + "'", c.line, 1);
      if (a == b) throw ParseError("self-coupling on spin '" + c.a + "'", c.line, 1);
      auto key = std::minmax(a, b);
      auto [it, inserted] = resolved.insert({{key.first, key.second}, c.j_hz});
      if (!inserted) {
        if (it->second != c.j_hz)
          throw ParseError("asymmetric coupling declaration for '" + c.a + "'/'" + c.b + "': " +
                               std::to_string(it->second) + " vs " + std::to_string(c.j_hz),
                           c.line, 1);
        throw ParseError("duplicate coupling declaration for '" + c.a + "'/'" + c.b + "'", c.line, 1);
      }
    }
    return MoleculeSpec(std::move(spins_), std::move(resolved));
  }

 private:
  struct RawCoupling {
    std::string a, b;
    double j_hz;
    int line;
  };

  int index_of(const std::string& name) const {
    for (size_t i = 0; i < spins_.size(); ++i)
      if (spins_[i].name == name) return static_cast<int>(i);
    return -1;
  }

  const std::string& expect(const LineLexer& lex, size_t i, const char* what) {
    if (i >= lex.tokens.size())
      throw ParseError(std::string("missing ") + what, lex.line,
                       lex.columns.empty() ? 1 : lex.columns.back() + 1);
    return lex.tokens[i];
  }

  void expect_keyword(const LineLexer& lex, size_t i, const std::string& kw) {
    const std::string& tok = expect(lex, i, kw.c_str());
    if (tok != kw)
      throw ParseError("expected '" + kw + "', got '" + tok + "'", lex.line, lex.columns[i]);
  }

  double number(const LineLexer& lex, size_t i, const char* what) {
    const std::string& tok = expect(lex, i, what);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
      throw ParseError(std::string("bad number for ") + what + ": '" + tok + "'", lex.line,
                       lex.columns[i]);
    return v;
  }

  void parse_spin(const LineLexer& lex) {
    // spin <name> species <tag> moment <f> shift <f> hz relax <f> persec
    const std::string& name = expect(lex, 1, "spin name");
    expect_keyword(lex, 2, "species");
    const std::string& species = expect(lex, 3, "species tag");
    expect_keyword(lex, 4, "moment");
    double moment = number(lex, 5, "moment");
    expect_keyword(lex, 6, "shift");
    double shift = number(lex, 7, "shift");
    expect_keyword(lex, 8, "hz");
    expect_keyword(lex, 9, "relax");
    double relax = number(lex, 10, "relax rate");
    expect_keyword(lex, 11, "persec");
    if (lex.tokens.size() > 12)
      throw ParseError("trailing tokens after spin declaration", lex.line, lex.columns[12]);
    if (index_of(name) >= 0) throw ParseError("duplicate spin '" + name + "'", lex.line, lex.columns[1]);
    spins_.push_back({name, species, moment, shift, relax});
  }

  void parse_coupling(const LineLexer& lex) {
    const std::string& a = expect(lex, 1, "first spin name");
    const std::string& b = expect(lex, 2, "second spin name");
    double j = number(lex, 3, "coupling in hz");
    expect_keyword(lex, 4, "hz");
    if (lex.tokens.size() > 5)
      throw ParseError("trailing tokens after coupling declaration", lex.line, lex.columns[5]);
    raw_couplings_.push_back({a, b, j, lex.line});
  }

  std::string text_;
  std::vector<Spin> spins_;
  std::vector<RawCoupling> raw_couplings_;
};

}  // namespace

MoleculeSpec parse_molecule(const std::string& text) { return MoleculeParser(text).parse(); }

Eigen::VectorXd hamiltonian_diagonal(const MoleculeSpec& mol, const std::vector<int>& decoupled) {
  const int n = mol.size();
  std::vector<bool> off(n, false);
  for (int s : decoupled) {
    if (s < 0 || s >= n) throw ValidationError("decoupled spin index out of range");
    off[s] = true;
  }
  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    double e = 0.0;
    auto zv = [&](int s) { return ((b >> (n - 1 - s)) & 1) ? -1.0 : 1.0; };
    for (int s = 0; s < n; ++s) e += kPi * mol.spin(s).shift_hz * zv(s);
    for (const auto& [key, j_hz] : mol.couplings()) {
      if (off[key.first] || off[key.second]) continue;
      e += kPi * j_hz / 2.0 * zv(key.first) * zv(key.second);
    }
    diag(b) = e;
  }
  return diag;
}

SpinOperator internal_hamiltonian(const MoleculeSpec& mol, const std::vector<int>& decoupled) {
  Eigen::VectorXd diag = hamiltonian_diagonal(mol, decoupled);
  SpinOperator h = SpinOperator::Zero(diag.size(), diag.size());
  h.diagonal() = diag.cast<Complex>();
  return h;
}

PauliPolynomial equilibrium_deviation(const MoleculeSpec& mol, const std::vector<double>& epsilons) {
  if (static_cast<int>(epsilons.size()) != mol.size())
    throw ValidationError("bias list length does not match spin count");
  PauliPolynomial out;
  for (int s = 0; s < mol.size(); ++s) {
    if (epsilons[s] < 0) throw ValidationError("equilibrium bias must be non-negative");
    if (epsilons[s] == 0) continue;
    std::string letters(mol.size(), 'I');
    letters[s] = 'Z';
    out += term(letters, epsilons[s]);
  }
  return out;
}

}  // namespace nmrsim
