#pragma once

// Flat `key = value` documents (UTF-8, `#` comments) for protocol and
// feasibility configuration. Numbers are parsed and printed with
// std::from_chars / std::to_chars, so the format never depends on locale.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "optomech/errors.hpp"
#include "optomech/feasibility.hpp"
#include "optomech/protocol.hpp"

namespace optomech {

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    KeyValue kv{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
    if (kv.key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    out.push_back(std::move(kv));
  }
  return out;
}

/// Splits "key=value" as given on the command line.
inline KeyValue parse_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(text) + "'");
  KeyValue kv{std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1))), 0};
  if (kv.key.empty()) throw ConfigError("empty key in '" + std::string(text) + "'");
  return kv;
}

inline double parse_double(std::string_view text, std::string_view key = "value") {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("'" + std::string(key) + "': not a number: '" + std::string(text) + "'");
  return v;
}

inline int parse_int(std::string_view text, std::string_view key) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("'" + std::string(key) + "': not an integer: '" + std::string(text) + "'");
  return v;
}

inline bool parse_bool(std::string_view text, std::string_view key) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("'" + std::string(key) + "': expected true or false");
}

/// Shortest representation that parses back to the same double.
inline std::string format_exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Fixed significant-digit output for CSV and reports.
inline std::string format_sig(double v, int digits = 12) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

inline std::string_view to_string(Engine e) { return e == Engine::gaussian ? "gaussian" : "fock"; }
inline std::string_view to_string(PhaseNoiseConvention c) {
  return c == PhaseNoiseConvention::paper_literal ? "paper_literal" : "propagated_mean";
}
inline std::string_view to_string(UndisplacementConvention c) {
  return c == UndisplacementConvention::paper_literal ? "paper_literal" : "propagated_mean";
}

/// Applies one protocol key. Returns false if the key is not a protocol key.
inline bool apply_protocol_setting(ProtocolConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : kNumericFields)
    if (f.name == key) {
      cfg.*f.member = parse_double(value, key);
      return true;
    }
  if (key == "engine") {
    if (value == "gaussian") cfg.engine = Engine::gaussian;
    else if (value == "fock") cfg.engine = Engine::fock;
    else throw ConfigError("engine must be gaussian or fock");
  } else if (key == "phase_noise_convention" || key == "undisplacement") {
    const bool literal = value == "paper_literal";
    if (!literal && value != "propagated_mean")
      throw ConfigError(key + " must be paper_literal or propagated_mean");
    if (key == "phase_noise_convention")
      cfg.phase_noise_convention = literal ? PhaseNoiseConvention::paper_literal : PhaseNoiseConvention::propagated_mean;
    else
      cfg.undisplacement = literal ? UndisplacementConvention::paper_literal : UndisplacementConvention::propagated_mean;
  } else if (key == "fock_dims") {
    cfg.fock_dims = parse_int(value, key);
  } else if (key == "quadrature_nodes") {
    cfg.quadrature_nodes = parse_int(value, key);
  } else if (key == "truncation_override") {
    cfg.truncation_override = parse_bool(value, key);
  } else {
    return false;
  }
  return true;
}

inline void apply_protocol_settings(ProtocolConfig& cfg, const std::vector<KeyValue>& kvs) {
  for (const auto& kv : kvs)
    if (!apply_protocol_setting(cfg, kv.key, kv.value)) throw ConfigError("unknown config key '" + kv.key + "'");
}

inline std::string serialize(const ProtocolConfig& cfg) {
  std::string out;
  for (const auto& f : kNumericFields) out += std::string(f.name) + " = " + format_exact(cfg.*f.member) + "\n";
  out += "engine = " + std::string(to_string(cfg.engine)) + "\n";
  out += "phase_noise_convention = " + std::string(to_string(cfg.phase_noise_convention)) + "\n";
  out += "undisplacement = " + std::string(to_string(cfg.undisplacement)) + "\n";
  out += "fock_dims = " + std::to_string(cfg.fock_dims) + "\n";
  out += "quadrature_nodes = " + std::to_string(cfg.quadrature_nodes) + "\n";
  out += std::string("truncation_override = ") + (cfg.truncation_override ? "true" : "false") + "\n";
  return out;
}

inline ProtocolConfig parse_protocol_config(std::string_view text, ProtocolConfig base = {}) {
  apply_protocol_settings(base, parse_key_values(text));
  return base;
}

// ---------------------------------------------------------------------------
// Feasibility input

inline void apply_feasibility_settings(FeasibilityInput& in, const std::vector<KeyValue>& kvs) {
  for (const auto& kv : kvs) {
    const double v = parse_double(kv.value, kv.key);
    if (kv.key == "omega_m") in.omega_m = v;
    else if (kv.key == "kappa") in.kappa = v;
    else if (kv.key == "gamma") in.gamma = v;
    else if (kv.key == "Q") in.Q = v;
    else if (kv.key == "g") in.g = v;
    else if (kv.key == "G") in.G = v;
    else if (kv.key == "tau") in.tau = v;
    else if (kv.key == "T") in.T = v;
    else if (kv.key == "ratio_threshold") in.ratio_threshold = v;
    else if (kv.key == "detectable_threshold") in.detectable_threshold = v;
    else throw ConfigError("unknown feasibility key '" + kv.key + "'");
  }
}

/// Human-readable report; frequencies are also given as multiples of 2 pi Hz.
inline std::string format_report(const FeasibilityReport& r) {
  auto hz = [](double omega) { return format_sig(omega / kTwoPi, 6); };
  std::string out;
  out += "G = 2pi x " + hz(r.G) + " Hz (" + format_sig(r.G) + " rad/s)\n";
  out += "g = 2pi x " + hz(r.g) + " Hz\n";
  out += "gamma = 2pi x " + hz(r.gamma) + " Hz\n";
  out += "x = gamma/G = " + format_sig(r.x, 6) + "\n";
  if (r.y_G) out += "y_G = exp(-G tau) = " + format_sig(*r.y_G, 6) + "\n";
  if (r.y_Gprime) out += "y_Gprime = exp(-(G+gamma) tau) = " + format_sig(*r.y_Gprime, 6) + "\n";
  out += "N_th = " + format_sig(r.N_th, 6) + "\n";
  out += "N_th x = " + format_sig(r.N_th * r.x, 6) + "\n";
  out += "suppression (kappa/omega_m)^2 = " + format_sig(r.suppression, 6) + "\n";
  out += "decoherence_rate N_th gamma = 2pi x " + hz(r.decoherence_rate) + " Hz\n";
  out += "decoherence_time 1/(N_th gamma) = " + format_sig(r.decoherence_time, 6) + " s\n";
  out += std::string("resolved_sideband = ") + (r.resolved_sideband ? "true" : "false") + "\n";
  out += std::string("adiabatic = ") + (r.adiabatic ? "true" : "false") + "\n";
  out += std::string("detectable = ") + (r.detectable ? "true" : "false") + "\n";
  for (const auto& n : r.notes) out += "note: " + n + "\n";
  return out;
}

}  // namespace optomech
