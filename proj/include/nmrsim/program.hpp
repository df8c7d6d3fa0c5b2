#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nmrsim/molecule.hpp"

namespace nmrsim {

// Spin target set: an explicit name list, or every spin of one species.
struct TargetSpec {
  std::vector<std::string> names;
  std::string species;  // nonempty selects all spins of the species

  static TargetSpec of(std::initializer_list<std::string> ns) { return {ns, ""}; }
  static TargetSpec all(std::string sp) { return {{}, std::move(sp)}; }
};

enum class GateKind { Cnot, Toffoli };

struct PulseEv {
  TargetSpec targets;
  double phase_deg;   // axis angle in the plane, measured from +x (x=0, y=90)
  double angle_deg;
  std::optional<double> duration_s;  // finite-width pulse when present
};
struct ZrotEv {
  std::string target;
  double angle_deg;
};
struct DelayEv {
  double duration_s;
  TargetSpec decouple;  // couplings touching these spins are idealized off
  bool relax = true;
};
struct GradientEv {
  int sign;     // +1 or -1
  double area;  // winding in rad per unit z for a moment-ratio-1 spin
};
struct DiffuseEv {};
struct GateEv {
  GateKind kind;
  std::vector<std::string> targets;  // controls first, flipped spin last
};
struct AcquireEv {
  double duration_s;
  double dwell_s;
  TargetSpec observe;
};
struct CheckpointEv {
  std::string label;
};

using PulseEvent = std::variant<PulseEv, ZrotEv, DelayEv, GradientEv, DiffuseEv, GateEv, AcquireEv,
                                CheckpointEv>;

struct PulseProgram {
  std::string name;
  std::string molecule;  // binding label from the 'uses' clause
  std::vector<PulseEvent> events;
};

// Grammar:
//   program    := "program" IDENT "uses" IDENT "{" event* "}"
//   event      := pulse | zrot | delay | grad | diffuse | gate | acquire | checkpoint
//   pulse      := "pulse" targets axis NUMBER ["for" NUMBER unit]
//   axis       := "x" | "y" | "-x" | "-y" | "phase" NUMBER
//   zrot       := "zrot" IDENT NUMBER
//   delay      := "delay" NUMBER unit ["decouple" targets] ["norelax"]
//   grad       := "gradient" ("+"|"-") NUMBER
//   diffuse    := "diffuse"
//   gate       := "gate" ("cnot"|"toffoli") targets
//   acquire    := "acquire" NUMBER unit "dwell" NUMBER unit "observe" targets
//   checkpoint := "checkpoint" STRING
//   targets    := IDENT ("," IDENT)* | "all" IDENT
//   unit       := "s" | "ms" | "us"
// '#' starts a comment. Rotation angles are degrees in (-360, 360].
PulseProgram parse_program(const std::string& text);

// Canonical source form; parse(pretty_print(p)) == p.
std::string pretty_print(const PulseProgram& prog);

// Events with spin names resolved against a molecule and angles in radians.
struct BoundPulse {
  std::vector<int> targets;
  double phase_rad;
  double angle_rad;
  std::optional<double> duration_s;
};
struct BoundZrot {
  int target;
  double angle_rad;
};
struct BoundDelay {
  double duration_s;
  std::vector<int> decouple;
  bool relax;
};
struct BoundGradient {
  int sign;
  double area;
};
struct BoundDiffuse {};
struct BoundGate {
  GateKind kind;
  std::vector<int> targets;
};
struct BoundAcquire {
  double duration_s;
  double dwell_s;
  std::vector<int> observe;
};
struct BoundCheckpoint {
  std::string label;
};

using BoundEvent = std::variant<BoundPulse, BoundZrot, BoundDelay, BoundGradient, BoundDiffuse,
                                BoundGate, BoundAcquire, BoundCheckpoint>;

struct BoundProgram {
  std::string name;
  std::vector<BoundEvent> events;
};

// Resolve targets, enforce placement rules (at most one acquire and it is
// terminal, gate arities, positive dwell), convert degrees to radians.
BoundProgram validate(const PulseProgram& prog, const MoleculeSpec& mol);

double normalize_angle_deg(double deg);  // into (-360, 360]
std::string format_double(double v);     // shortest round-trip decimal form

}  // namespace nmrsim
