#include "spinbath/dsl.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spinbath/protocols.hpp"

namespace spinbath {

namespace {

struct Token {
  std::string text;
  std::size_t col;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    toks.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return toks;
}

[[noreturn]] void fail(DslErrorCode code, std::size_t line, std::size_t col,
                       const std::string& msg) {
  throw ParseError(code, line, col, msg);
}

// Number possibly followed by a unit glued onto the same token.
struct NumberTail {
  double value;
  std::string unit;
  std::size_t unit_col;
};

NumberTail parse_number(const Token& tok, std::size_t line) {
  NumberTail out;
  const char* begin = tok.text.data();
  const char* end = begin + tok.text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out.value);
  if (ec != std::errc() || ptr == begin) {
    fail(DslErrorCode::MalformedNumber, line, tok.col,
         "malformed number '" + tok.text + "'");
  }
  out.unit = std::string(ptr, end);
  out.unit_col = tok.col + static_cast<std::size_t>(ptr - begin);
  return out;
}

double parse_with_unit(const Token& tok, std::size_t line,
                       std::string_view unit) {
  const NumberTail n = parse_number(tok, line);
  if (n.unit != unit) {
    fail(DslErrorCode::BadUnit, line, n.unit_col,
         "expected unit '" + std::string(unit) + "' directly after the number");
  }
  return n.value;
}

double parse_duration_ns(const Token& tok, std::size_t line) {
  const NumberTail n = parse_number(tok, line);
  if (n.unit == "ns") return n.value;
  if (n.unit == "us") return n.value * 1e3;
  fail(DslErrorCode::BadUnit, line, n.unit_col,
       "expected 'ns' or 'us' directly after the number");
}

Axis parse_axis(const Token& tok, std::size_t line) {
  if (tok.text == "X") return Axis::X;
  if (tok.text == "Y") return Axis::Y;
  if (tok.text == "-X") return Axis::MinusX;
  if (tok.text == "-Y") return Axis::MinusY;
  fail(DslErrorCode::BadAxis, line, tok.col,
       "unknown axis '" + tok.text + "', expected X, Y, -X or -Y");
}

EnsembleMethod parse_method(const Token& tok, std::size_t line) {
  const std::string& t = tok.text;
  auto number_after = [&](std::size_t pos, std::size_t stop) -> long long {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data() + pos, t.data() + stop, v);
    if (ec != std::errc() || ptr != t.data() + stop || v <= 0) {
      fail(DslErrorCode::MalformedNumber, line, tok.col + pos,
           "malformed count in method '" + t + "'");
    }
    return v;
  };
  if (t.rfind("quadrature:", 0) == 0) {
    return EnsembleMethod::quadrature(
        static_cast<int>(number_after(11, t.size())));
  }
  if (t.rfind("mc:", 0) == 0) {
    const std::size_t second = t.find(':', 3);
    if (second == std::string::npos) {
      return EnsembleMethod::monte_carlo(
          static_cast<int>(number_after(3, t.size())), 1);
    }
    const long long n = number_after(3, second);
    const long long seed = number_after(second + 1, t.size());
    return EnsembleMethod::monte_carlo(static_cast<int>(n),
                                       static_cast<std::uint64_t>(seed));
  }
  fail(DslErrorCode::UnknownKeyword, line, tok.col,
       "unknown method '" + t + "', expected quadrature:N or mc:N[:seed]");
}

std::string block_name(const Token& tok, std::size_t line) {
  std::string name = tok.text;
  if (name.size() < 2 || name.back() != ':') {
    fail(DslErrorCode::BadStructure, line, tok.col,
         "block header must end with ':'");
  }
  name.pop_back();
  return name;
}

void format_double(std::ostringstream& os, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, ptr - buf);
  (void)ec;
}

}  // namespace

std::string_view dsl_error_code_name(DslErrorCode code) {
  switch (code) {
    case DslErrorCode::UnknownKeyword:
      return "unknown-keyword";
    case DslErrorCode::DuplicateName:
      return "duplicate-name";
    case DslErrorCode::UndefinedReference:
      return "undefined-reference";
    case DslErrorCode::MalformedNumber:
      return "malformed-number";
    case DslErrorCode::BadUnit:
      return "bad-unit";
    case DslErrorCode::BadAxis:
      return "bad-axis";
    case DslErrorCode::BadOracle:
      return "bad-oracle";
    case DslErrorCode::BadStructure:
      return "bad-structure";
    case DslErrorCode::InvalidValue:
      return "invalid-value";
  }
  return "unknown";
}

ParseError::ParseError(DslErrorCode code, std::size_t line, std::size_t column,
                       const std::string& message)
    : Error([&] {
        std::ostringstream os;
        os << "[" << dsl_error_code_name(code) << "]";
        if (line > 0) os << " line " << line << ", column " << column << ":";
        os << " " << message;
        return os.str();
      }()),
      code(code),
      line(line),
      column(column) {}

DslDocument parse_dsl(std::string_view text) {
  DslDocument doc;
  enum class Block { None, Spectrum, Sequence };
  Block block = Block::None;
  std::string block_key;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;

    if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const bool indented = !raw.empty() && (raw[0] == ' ' || raw[0] == '\t');
    const std::vector<Token> toks = tokenize(raw);
    if (toks.empty()) continue;

    if (!indented) {
      const Token& kw = toks[0];
      if (kw.text == "rabi") {
        if (toks.size() != 2) {
          fail(DslErrorCode::BadStructure, lineno, kw.col,
               "expected: rabi <float>MHz");
        }
        const double v = parse_with_unit(toks[1], lineno, "MHz");
        if (!(v > 0)) {
          fail(DslErrorCode::InvalidValue, lineno, toks[1].col,
               "Rabi frequency must be > 0");
        }
        doc.rabi_mhz = v;
      } else if (kw.text == "method") {
        if (toks.size() != 2) {
          fail(DslErrorCode::BadStructure, lineno, kw.col,
               "expected: method quadrature:N | mc:N[:seed]");
        }
        doc.default_method = parse_method(toks[1], lineno);
      } else if (kw.text == "spectrum") {
        if (toks.size() != 2) {
          fail(DslErrorCode::BadStructure, lineno, kw.col,
               "expected: spectrum <name>:");
        }
        const std::string name = block_name(toks[1], lineno);
        if (doc.spectra.count(name)) {
          fail(DslErrorCode::DuplicateName, lineno, toks[1].col,
               "spectrum '" + name + "' already defined");
        }
        doc.spectra[name] = {};
        block = Block::Spectrum;
        block_key = name;
      } else if (kw.text == "seq") {
        if (toks.size() != 2) {
          fail(DslErrorCode::BadStructure, lineno, kw.col,
               "expected: seq <name>:");
        }
        const std::string name = block_name(toks[1], lineno);
        if (doc.sequences.count(name)) {
          fail(DslErrorCode::DuplicateName, lineno, toks[1].col,
               "sequence '" + name + "' already defined");
        }
        doc.sequences[name] = {};
        block = Block::Sequence;
        block_key = name;
      } else {
        fail(DslErrorCode::UnknownKeyword, lineno, kw.col,
             "unknown keyword '" + kw.text + "'");
      }
      continue;
    }

    // Indented: block content.
    if (block == Block::None) {
      fail(DslErrorCode::BadStructure, lineno, toks[0].col,
           "indented line outside of a spectrum/seq block");
    }
    const Token& kw = toks[0];
    if (block == Block::Spectrum) {
      if (kw.text != "mode") {
        fail(DslErrorCode::UnknownKeyword, lineno, kw.col,
             "expected 'mode' inside a spectrum block");
      }
      if (toks.size() != 4) {
        fail(DslErrorCode::BadStructure, lineno, kw.col,
             "expected: mode <weight> <center>MHz <sigma>MHz");
      }
      BathMode m;
      const NumberTail w = parse_number(toks[1], lineno);
      if (!w.unit.empty()) {
        fail(DslErrorCode::BadUnit, lineno, w.unit_col,
             "mode weight is unitless");
      }
      m.weight = w.value;
      m.center_mhz = parse_with_unit(toks[2], lineno, "MHz");
      m.sigma_mhz = parse_with_unit(toks[3], lineno, "MHz");
      if (m.weight < 0 || m.sigma_mhz < 0) {
        fail(DslErrorCode::InvalidValue, lineno, toks[1].col,
             "mode weight and width must be >= 0");
      }
      doc.spectra[block_key].push_back(m);
    } else {
      auto& steps = doc.sequences[block_key].steps;
      if (kw.text == "pulse") {
        if (toks.size() != 3) {
          fail(DslErrorCode::BadStructure, lineno, kw.col,
               "expected: pulse <X|Y|-X|-Y> <angle_deg>");
        }
        const Axis axis = parse_axis(toks[1], lineno);
        const NumberTail a = parse_number(toks[2], lineno);
        if (!a.unit.empty()) {
          fail(DslErrorCode::BadUnit, lineno, a.unit_col,
               "pulse angles are plain degrees");
        }
        if (!(a.value > 0)) {
          fail(DslErrorCode::InvalidValue, lineno, toks[2].col,
               "pulse angle must be > 0 (use -X/-Y for reversed rotations)");
        }
        steps.push_back(DslPulse{axis, a.value});
      } else if (kw.text == "delay") {
        if (toks.size() != 2) {
          fail(DslErrorCode::BadStructure, lineno, kw.col,
               "expected: delay <float>ns|us");
        }
        const double d = parse_duration_ns(toks[1], lineno);
        if (d < 0) {
          fail(DslErrorCode::InvalidValue, lineno, toks[1].col,
               "delay must be >= 0");
        }
        steps.push_back(DslDelay{d});
      } else if (kw.text == "oracle") {
        if (toks.size() != 2) {
          fail(DslErrorCode::BadStructure, lineno, kw.col,
               "expected: oracle <U1|U2|U3|U4>");
        }
        Oracle o;
        try {
          o = Oracle::from_name(toks[1].text);
        } catch (const InputError&) {
          fail(DslErrorCode::BadOracle, lineno, toks[1].col,
               "unknown oracle '" + toks[1].text + "'");
        }
        const double phi_deg = o.phase_rad() * 180.0 / std::numbers::pi;
        steps.push_back(DslPulse{Axis::X, 90.0});
        if (phi_deg > 0) steps.push_back(DslPulse{Axis::Y, phi_deg});
        steps.push_back(DslPulse{Axis::MinusX, 90.0});
      } else {
        fail(DslErrorCode::UnknownKeyword, lineno, kw.col,
             "expected 'pulse', 'delay' or 'oracle' inside a seq block");
      }
    }
  }

  for (const auto& [name, modes] : doc.spectra) {
    if (modes.empty()) {
      fail(DslErrorCode::InvalidValue, 0, 0,
           "spectrum '" + name + "' has no modes");
    }
  }
  return doc;
}

std::string serialize_dsl(const DslDocument& doc) {
  std::ostringstream os;
  if (doc.rabi_mhz) {
    os << "rabi ";
    format_double(os, *doc.rabi_mhz);
    os << "MHz\n";
  }
  if (doc.default_method) {
    os << "method " << doc.default_method->describe() << "\n";
  }
  for (const auto& [name, modes] : doc.spectra) {
    os << "spectrum " << name << ":\n";
    for (const auto& m : modes) {
      os << "  mode ";
      format_double(os, m.weight);
      os << " ";
      format_double(os, m.center_mhz);
      os << "MHz ";
      format_double(os, m.sigma_mhz);
      os << "MHz\n";
    }
  }
  for (const auto& [name, seq] : doc.sequences) {
    os << "seq " << name << ":\n";
    for (const auto& step : seq.steps) {
      if (const auto* p = std::get_if<DslPulse>(&step)) {
        os << "  pulse ";
        switch (p->axis) {
          case Axis::X:
            os << "X";
            break;
          case Axis::Y:
            os << "Y";
            break;
          case Axis::MinusX:
            os << "-X";
            break;
          case Axis::MinusY:
            os << "-Y";
            break;
        }
        os << " ";
        format_double(os, p->angle_deg);
        os << "\n";
      } else {
        os << "  delay ";
        format_double(os, std::get<DslDelay>(step).duration_ns);
        os << "ns\n";
      }
    }
  }
  return os.str();
}

PulseSequence to_pulse_sequence(const DslSequence& seq, double rabi_mhz,
                                std::string label) {
  if (!(rabi_mhz > 0)) {
    throw ConfigError("a Rabi frequency is required to realise DSL pulses");
  }
  PulseSequence out;
  out.label = std::move(label);
  for (const auto& step : seq.steps) {
    if (const auto* p = std::get_if<DslPulse>(&step)) {
      out.segments.push_back(rotation_pulse(
          p->axis, p->angle_deg * std::numbers::pi / 180.0, rabi_mhz));
    } else {
      out.segments.push_back(
          PulseSegment::delay(std::get<DslDelay>(step).duration_ns));
    }
  }
  return out;
}

BathSpectrum to_bath_spectrum(const std::vector<BathMode>& modes) {
  return BathSpectrum::from_modes(modes);
}

const DslSequence& find_sequence(const DslDocument& doc,
                                 const std::string& name) {
  const auto it = doc.sequences.find(name);
  if (it == doc.sequences.end()) {
    throw ParseError(DslErrorCode::UndefinedReference, 0, 0,
                     "sequence '" + name + "' is not defined");
  }
  return it->second;
}

BathSpectrum find_spectrum(const DslDocument& doc, const std::string& name) {
  const auto it = doc.spectra.find(name);
  if (it == doc.spectra.end()) {
    throw ParseError(DslErrorCode::UndefinedReference, 0, 0,
                     "spectrum '" + name + "' is not defined");
  }
  return to_bath_spectrum(it->second);
}

}  // namespace spinbath
