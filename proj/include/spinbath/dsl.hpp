#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spinbath/bath.hpp"
#include "spinbath/pulse.hpp"

namespace spinbath {

// Line-oriented experiment description format. `#` starts a comment,
// keywords are case-sensitive, numbers carry their unit with no space:
//
//   rabi 5.37MHz
//   method quadrature:64        # or mc:100000:seed
//   spectrum bath:
//     mode 0.3333 -2.170MHz 0.163MHz
//   seq ramsey:
//     pulse X 90
//     delay 400ns               # also us
//     oracle U3                 # expands to the three oracle pulses
//
// Angles are degrees in the file and radians everywhere else.

enum class DslErrorCode {
  UnknownKeyword,
  DuplicateName,
  UndefinedReference,
  MalformedNumber,
  BadUnit,
  BadAxis,
  BadOracle,
  BadStructure,
  InvalidValue,
};

std::string_view dsl_error_code_name(DslErrorCode code);

class ParseError : public Error {
 public:
  ParseError(DslErrorCode code, std::size_t line, std::size_t column,
             const std::string& message);

  DslErrorCode code;
  std::size_t line;    // 1-based; 0 when not tied to a location
  std::size_t column;  // 1-based
};

struct DslPulse {
  Axis axis = Axis::X;
  double angle_deg = 0;
  bool operator==(const DslPulse&) const = default;
};

struct DslDelay {
  double duration_ns = 0;
  bool operator==(const DslDelay&) const = default;
};

using DslStep = std::variant<DslPulse, DslDelay>;

struct DslSequence {
  std::vector<DslStep> steps;
  bool operator==(const DslSequence&) const = default;
};

struct DslDocument {
  std::map<std::string, DslSequence> sequences;
  std::map<std::string, std::vector<BathMode>> spectra;  // as written, unnormalised
  std::optional<double> rabi_mhz;
  std::optional<EnsembleMethod> default_method;

  bool operator==(const DslDocument&) const = default;
};

DslDocument parse_dsl(std::string_view text);

// Canonical text form; parse(serialize(doc)) == doc (floats are written with
// shortest round-trip precision).
std::string serialize_dsl(const DslDocument& doc);

// Realise a parsed sequence as finite pulses at the given Rabi frequency.
PulseSequence to_pulse_sequence(const DslSequence& seq, double rabi_mhz,
                                std::string label);

BathSpectrum to_bath_spectrum(const std::vector<BathMode>& modes);

// Lookup helpers raising UndefinedReference errors with the name in message.
const DslSequence& find_sequence(const DslDocument& doc,
                                 const std::string& name);
BathSpectrum find_spectrum(const DslDocument& doc, const std::string& name);

}  // namespace spinbath
