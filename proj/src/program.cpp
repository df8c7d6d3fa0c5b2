#include "nmrsim/program.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>

#include "nmrsim/errors.hpp"

namespace nmrsim {

double normalize_angle_deg(double deg) {
  double x = std::fmod(deg, 720.0);
  if (x <= -360.0) x += 720.0;
  if (x > 360.0) x -= 720.0;
  return x;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

enum class Tok { Ident, Number, String, LBrace, RBrace, Comma, Plus, Minus, End };

struct Token {
  Tok kind;
  std::string text;
  double value = 0.0;
  int line = 1;
  int column = 1;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { scan(); }
  const std::vector<Token>& tokens() const { return tokens_; }

 private:
  void scan() {
    size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](size_t k) {
      for (size_t j = 0; j < k; ++j, ++i) {
        if (text_[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < text_.size()) {
      char c = text_[i];
      if (c == '#') {
        while (i < text_.size() && text_[i] != '\n') advance(1);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      int tl = line, tc = col;
      if (c == '{' || c == '}' || c == ',' || c == '+' || c == '-') {
        Tok k = c == '{'   ? Tok::LBrace
                : c == '}' ? Tok::RBrace
                : c == ',' ? Tok::Comma
                : c == '+' ? Tok::Plus
                           : Tok::Minus;
        tokens_.push_back({k, std::string(1, c), 0.0, tl, tc});
        advance(1);
        continue;
      }
      if (c == '"') {
        advance(1);
        size_t start = i;
        while (i < text_.size() && text_[i] != '"' && text_[i] != '\n') advance(1);
        if (i >= text_.size() || text_[i] != '"')
          throw ParseError("unterminated string", tl, tc);
        std::string s = text_.substr(start, i - start);
        advance(1);
        tokens_.push_back({Tok::String, std::move(s), 0.0, tl, tc});
        continue;
      }
      if (word_char(c)) {
        size_t start = i;
        bool numeric_start = std::isdigit(static_cast<unsigned char>(c)) || c == '.';
        while (i < text_.size() && word_char(text_[i])) {
          // keep scientific-notation exponents like 5e-3 in one token
          if ((text_[i] == 'e' || text_[i] == 'E') && numeric_start && i > start &&
              i + 2 < text_.size() && (text_[i + 1] == '+' || text_[i + 1] == '-') &&
              std::isdigit(static_cast<unsigned char>(text_[i + 2]))) {
            advance(3);
            continue;
          }
          advance(1);
        }
        std::string w = text_.substr(start, i - start);
        char* end = nullptr;
        double v = std::strtod(w.c_str(), &end);
        if (end == w.c_str() + w.size() && !w.empty())
          tokens_.push_back({Tok::Number, std::move(w), v, tl, tc});
        else
          tokens_.push_back({Tok::Ident, std::move(w), 0.0, tl, tc});
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    tokens_.push_back({Tok::End, "<end>", 0.0, line, col});
  }

  const std::string& text_;
  std::vector<Token> tokens_;
};

class ProgramParser {
 public:
  explicit ProgramParser(const std::string& text) : lexer_(text) {}

  PulseProgram parse() {
    PulseProgram prog;
    expect_ident("program");
    prog.name = ident("program name");
    expect_ident("uses");
    prog.molecule = ident("molecule name");
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) throw err("missing '}'");
      prog.events.push_back(event());
    }
    expect(Tok::RBrace, "'}'");
    if (!at(Tok::End)) throw err("trailing tokens after program");
    return prog;
  }

 private:
  const Token& cur() const { return lexer_.tokens()[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  ParseError err(const std::string& msg) const { return ParseError(msg, cur().line, cur().column); }

  const Token& take() { return lexer_.tokens()[pos_++]; }

  void expect(Tok k, const char* what) {
    if (!at(k)) throw err(std::string("expected ") + what + ", got '" + cur().text + "'");
    ++pos_;
  }

  void expect_ident(const std::string& kw) {
    if (!at(Tok::Ident) || cur().text != kw)
      throw err("expected '" + kw + "', got '" + cur().text + "'");
    ++pos_;
  }

  std::string ident(const char* what) {
    if (!at(Tok::Ident)) throw err(std::string("expected ") + what + ", got '" + cur().text + "'");
    return take().text;
  }

  bool peek_ident(const std::string& kw) const { return at(Tok::Ident) && cur().text == kw; }

  double signed_number(const char* what) {
    double sign = 1.0;
    while (at(Tok::Plus) || at(Tok::Minus)) {
      if (at(Tok::Minus)) sign = -sign;
      ++pos_;
    }
    if (!at(Tok::Number)) throw err(std::string("expected ") + what + ", got '" + cur().text + "'");
    return sign * take().value;
  }

  double duration(const char* what) {
    const Token& numeric = cur();
    double v = signed_number(what);
    std::string unit = ident("time unit");
    double scale;
    if (unit == "s")
      scale = 1.0;
    else if (unit == "ms")
      scale = 1e-3;
    else if (unit == "us")
      scale = 1e-6;
    else
      throw err("unknown time unit '" + unit + "'");
    if (v < 0)
      throw ParseError(std::string("negative duration for ") + what, numeric.line, numeric.column);
    return v * scale;
  }

  TargetSpec targets() {
    if (peek_ident("all")) {
      ++pos_;
      return TargetSpec::all(ident("species tag"));
    }
    TargetSpec t;
    t.names.push_back(ident("spin name"));
    while (at(Tok::Comma)) {
      ++pos_;
      t.names.push_back(ident("spin name"));
    }
    return t;
  }

  PulseEvent event() {
    std::string kw = ident("event keyword");
    if (kw == "pulse") return pulse();
    if (kw == "zrot") return zrot();
    if (kw == "delay") return delay();
    if (kw == "gradient") return gradient();
    if (kw == "diffuse") return DiffuseEv{};
    if (kw == "gate") return gate();
    if (kw == "acquire") return acquire();
    if (kw == "checkpoint") return checkpoint();
    --pos_;
    throw err("unknown event keyword '" + kw + "'");
  }

  PulseEvent pulse() {
    PulseEv ev;
    ev.targets = targets();
    // axis
    if (at(Tok::Minus)) {
      ++pos_;
      std::string ax = ident("axis");
      if (ax == "x")
        ev.phase_deg = 180.0;
      else if (ax == "y")
        ev.phase_deg = 270.0;
      else
        throw err("unknown axis '-" + ax + "'");
    } else if (peek_ident("phase")) {
      ++pos_;
      ev.phase_deg = signed_number("phase angle");
    } else {
      std::string ax = ident("axis");
      if (ax == "x")
        ev.phase_deg = 0.0;
      else if (ax == "y")
        ev.phase_deg = 90.0;
      else
        throw err("unknown axis '" + ax + "'");
    }
    ev.phase_deg = std::fmod(ev.phase_deg, 360.0);
    if (ev.phase_deg < 0) ev.phase_deg += 360.0;
    ev.angle_deg = normalize_angle_deg(signed_number("rotation angle"));
    if (peek_ident("for")) {
      ++pos_;
      ev.duration_s = duration("pulse width");
    }
    return ev;
  }

  PulseEvent zrot() {
    ZrotEv ev;
    ev.target = ident("spin name");
    ev.angle_deg = normalize_angle_deg(signed_number("rotation angle"));
    return ev;
  }

  PulseEvent delay() {
    DelayEv ev;
    ev.duration_s = duration("delay");
    while (true) {
      if (peek_ident("decouple")) {
        ++pos_;
        ev.decouple = targets();
      } else if (peek_ident("norelax")) {
        ++pos_;
        ev.relax = false;
      } else {
        break;
      }
    }
    return ev;
  }

  PulseEvent gradient() {
    GradientEv ev;
    if (at(Tok::Plus))
      ev.sign = 1;
    else if (at(Tok::Minus))
      ev.sign = -1;
    else
      throw err("gradient needs an explicit '+' or '-' sign");
    ++pos_;
    if (!at(Tok::Number)) throw err("expected gradient area, got '" + cur().text + "'");
    ev.area = take().value;
    return ev;
  }

  PulseEvent gate() {
    GateEv ev;
    std::string kind = ident("gate name");
    if (kind == "cnot")
      ev.kind = GateKind::Cnot;
    else if (kind == "toffoli")
      ev.kind = GateKind::Toffoli;
    else
      throw err("unknown gate '" + kind + "'");
    TargetSpec t = targets();
    if (!t.species.empty()) throw err("gate targets must be named spins");
    ev.targets = t.names;
    return ev;
  }

  PulseEvent acquire() {
    AcquireEv ev;
    ev.duration_s = duration("acquisition window");
    expect_ident("dwell");
    ev.dwell_s = duration("dwell");
    expect_ident("observe");
    ev.observe = targets();
    return ev;
  }

  PulseEvent checkpoint() {
    if (!at(Tok::String)) throw err("checkpoint needs a quoted label");
    return CheckpointEv{take().text};
  }

  Lexer lexer_;
  size_t pos_ = 0;
};

std::string targets_text(const TargetSpec& t) {
  if (!t.species.empty()) return "all " + t.species;
  std::string out;
  for (size_t i = 0; i < t.names.size(); ++i) {
    if (i) out += ",";
    out += t.names[i];
  }
  return out;
}

std::string axis_text(double phase_deg) {
  if (phase_deg == 0.0) return "x";
  if (phase_deg == 90.0) return "y";
  if (phase_deg == 180.0) return "-x";
  if (phase_deg == 270.0) return "-y";
  return "phase " + format_double(phase_deg);
}

struct Printer {
  std::string out;

  void line(const std::string& s) { out += "  " + s + "\n"; }

  void operator()(const PulseEv& ev) {
    std::string s = "pulse " + targets_text(ev.targets) + " " + axis_text(ev.phase_deg) + " " +
                    format_double(ev.angle_deg);
    if (ev.duration_s) s += " for " + format_double(*ev.duration_s) + " s";
    line(s);
  }
  void operator()(const ZrotEv& ev) {
    line("zrot " + ev.target + " " + format_double(ev.angle_deg));
  }
  void operator()(const DelayEv& ev) {
    std::string s = "delay " + format_double(ev.duration_s) + " s";
    if (!ev.decouple.names.empty() || !ev.decouple.species.empty())
      s += " decouple " + targets_text(ev.decouple);
    if (!ev.relax) s += " norelax";
    line(s);
  }
  void operator()(const GradientEv& ev) {
    line(std::string("gradient ") + (ev.sign >= 0 ? "+" : "-") + " " + format_double(ev.area));
  }
  void operator()(const DiffuseEv&) { line("diffuse"); }
  void operator()(const GateEv& ev) {
    std::string names;
    for (size_t i = 0; i < ev.targets.size(); ++i) {
      if (i) names += ",";
      names += ev.targets[i];
    }
    line(std::string("gate ") + (ev.kind == GateKind::Cnot ? "cnot" : "toffoli") + " " + names);
  }
  void operator()(const AcquireEv& ev) {
    line("acquire " + format_double(ev.duration_s) + " s dwell " + format_double(ev.dwell_s) +
         " s observe " + targets_text(ev.observe));
  }
  void operator()(const CheckpointEv& ev) { line("checkpoint \"" + ev.label + "\""); }
};

std::vector<int> resolve(const TargetSpec& t, const MoleculeSpec& mol, const char* what) {
  std::vector<int> out;
  if (!t.species.empty()) {
    for (int i = 0; i < mol.size(); ++i)
      if (mol.spin(i).species == t.species) out.push_back(i);
    if (out.empty())
      throw ValidationError(std::string(what) + ": no spins of species '" + t.species + "'");
    return out;
  }
  std::set<int> seen;
  for (const auto& name : t.names) {
    int idx = mol.index_of(name);
    if (idx < 0) throw ValidationError(std::string(what) + ": unknown spin '" + name + "'");
    if (!seen.insert(idx).second)
      throw ValidationError(std::string(what) + ": spin '" + name + "' listed twice");
    out.push_back(idx);
  }
  return out;
}

struct Binder {
  const MoleculeSpec& mol;
  BoundProgram& out;

  void operator()(const PulseEv& ev) {
    BoundPulse b;
    b.targets = resolve(ev.targets, mol, "pulse");
    b.phase_rad = ev.phase_deg * kDegToRad;
    b.angle_rad = ev.angle_deg * kDegToRad;
    if (ev.duration_s) {
      if (*ev.duration_s < 0) throw ValidationError("pulse width must be non-negative");
      b.duration_s = ev.duration_s;
    }
    out.events.push_back(b);
  }
  void operator()(const ZrotEv& ev) {
    out.events.push_back(BoundZrot{mol.require_spin(ev.target), ev.angle_deg * kDegToRad});
  }
  void operator()(const DelayEv& ev) {
    if (ev.duration_s < 0) throw ValidationError("delay must be non-negative");
    std::vector<int> dec;
    if (!ev.decouple.names.empty() || !ev.decouple.species.empty())
      dec = resolve(ev.decouple, mol, "decouple");
    out.events.push_back(BoundDelay{ev.duration_s, std::move(dec), ev.relax});
  }
  void operator()(const GradientEv& ev) {
    if (ev.area < 0) throw ValidationError("gradient area must be non-negative");
    out.events.push_back(BoundGradient{ev.sign, ev.area});
  }
  void operator()(const DiffuseEv&) { out.events.push_back(BoundDiffuse{}); }
  void operator()(const GateEv& ev) {
    TargetSpec t;
    t.names = ev.targets;
    std::vector<int> idx = resolve(t, mol, "gate");
    size_t arity = ev.kind == GateKind::Cnot ? 2 : 3;
    if (idx.size() != arity)
      throw ValidationError(std::string("gate ") + (ev.kind == GateKind::Cnot ? "cnot" : "toffoli") +
                            " needs exactly " + std::to_string(arity) + " targets");
    out.events.push_back(BoundGate{ev.kind, std::move(idx)});
  }
  void operator()(const AcquireEv& ev) {
    if (ev.dwell_s <= 0) throw ValidationError("dwell must be positive");
    if (ev.dwell_s > ev.duration_s) throw ValidationError("dwell exceeds the acquisition window");
    out.events.push_back(
        BoundAcquire{ev.duration_s, ev.dwell_s, resolve(ev.observe, mol, "observe")});
  }
  void operator()(const CheckpointEv& ev) { out.events.push_back(BoundCheckpoint{ev.label}); }
};

}  // namespace

PulseProgram parse_program(const std::string& text) { return ProgramParser(text).parse(); }

std::string pretty_print(const PulseProgram& prog) {
  Printer p;
  p.out = "program " + prog.name + " uses " + prog.molecule + " {\n";
  for (const auto& ev : prog.events) std::visit(p, ev);
  p.out += "}\n";
  return p.out;
}

BoundProgram validate(const PulseProgram& prog, const MoleculeSpec& mol) {
  BoundProgram out;
  out.name = prog.name;
  Binder binder{mol, out};
  for (size_t i = 0; i < prog.events.size(); ++i) {
    if (std::holds_alternative<AcquireEv>(prog.events[i]) && i + 1 != prog.events.size())
      throw ValidationError("acquire must be the final event");
    std::visit(binder, prog.events[i]);
  }
  return out;
}

}  // namespace nmrsim
