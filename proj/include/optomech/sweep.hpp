#pragma once

// Parameter sweeps over ProtocolConfig and the figure presets, rendered as
// deterministic CSV.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/errors.hpp"
#include "optomech/protocol.hpp"

namespace optomech {

struct Axis {
  std::string parameter;
  std::vector<double> values;
};

struct SweepSpec {
  ProtocolConfig base;
  Axis axis1;
  std::optional<Axis> axis2;
  std::optional<Axis> series;  ///< one metric column per value
};

inline Axis linear_axis(std::string parameter, double lo, double hi, int n) {
  if (n < 1) throw ConfigError("grid needs at least one point");
  Axis a{std::move(parameter), {}};
  a.values.reserve(n);
  if (n == 1) {
    a.values.push_back(lo);
    return a;
  }
  for (int i = 0; i < n; ++i) a.values.push_back(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
  return a;
}

inline Axis log_axis(std::string parameter, double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > 0.0)) throw ConfigError("log grid needs positive bounds");
  Axis a = linear_axis(std::move(parameter), std::log10(lo), std::log10(hi), n);
  for (double& v : a.values) v = std::pow(10.0, v);
  a.values.front() = lo;
  if (n > 1) a.values.back() = hi;
  return a;
}

inline void validate(const Axis& a) {
  numeric_field(a.parameter);
  if (a.values.empty()) throw ConfigError("axis '" + a.parameter + "' has no values");
  const bool up = a.values.size() < 2 || a.values[1] > a.values[0];
  for (std::size_t i = 1; i < a.values.size(); ++i)
    if (up ? !(a.values[i] > a.values[i - 1]) : !(a.values[i] < a.values[i - 1]))
      throw ConfigError("axis '" + a.parameter + "' must be strictly monotone");
}

inline void validate(const SweepSpec& s) {
  validate(s.axis1);
  if (s.axis2) validate(*s.axis2);
  if (s.series) validate(*s.series);
}

// ---------------------------------------------------------------------------
// Presets

inline constexpr int kPresetPoints = 61;

/// Parameters shared by the Gaussian figures.
inline ProtocolConfig figure_base() {
  ProtocolConfig c;
  c.r = 0.5;
  c.N_D = 5000.0;
  c.y = 0.1;
  c.x = 0.01;
  c.N_in = 1.0;
  c.N_th = 10.0;
  c.sigma = 0.01;
  c.eta1 = c.eta2 = c.eta_c = 0.8;
  return c;
}

/// Single-photon pipeline: x=0.01, y=0.1, N_th=10, N_in=1, eta1=eta2=0.8,
/// eta_c left at 1.
inline ProtocolConfig fock_figure_base() {
  ProtocolConfig c = figure_base();
  c.engine = Engine::fock;
  c.eta_c = 1.0;
  c.truncation_override = true;
  return c;
}

namespace detail {

// Largest threshold over the series, found on a coarse tolerance.
inline double largest_threshold(const ProtocolConfig& base, const std::string& param, double lo, double hi,
                                const Axis& series) {
  double best = lo;
  for (double v : series.values) {
    const auto cfg = with_value(base, series.parameter, v);
    best = std::max(best, find_threshold(cfg, param, lo, hi, (hi - lo) * 1e-6));
  }
  return best;
}

}  // namespace detail

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "figA1"};
  return names;
}

/// Axis ranges that cannot be read off the figures run to 1.5x the largest
/// entanglement threshold of the series.
inline SweepSpec preset(const std::string& name) {
  SweepSpec s;
  if (name == "fig2") {
    s.base = figure_base();
    s.axis1 = linear_axis("y", 0.01, 0.99, 99);
    s.series = Axis{"N_in", {0.0, 1.0, 10.0}};
  } else if (name == "fig3") {
    s.base = figure_base();
    s.series = Axis{"sigma", {0.005, 0.01, 0.02}};
    const double top = detail::largest_threshold(s.base, "N_D", 1.0, 1e9, *s.series);
    s.axis1 = log_axis("N_D", 1.0, 1.5 * top, kPresetPoints);
  } else if (name == "fig4") {
    s.base = figure_base();
    s.series = Axis{"N_th", {5.0, 10.0, 20.0}};
    const double top = detail::largest_threshold(s.base, "x", 0.0, 1.0, *s.series);
    s.axis1 = linear_axis("x", 0.0, 1.5 * top, kPresetPoints);
  } else if (name == "fig5") {
    s.base = figure_base();
    s.axis1 = linear_axis("eta1", 0.0, 1.0, 101);
    s.series = Axis{"eta2", {0.5, 0.8, 1.0}};
  } else if (name == "figA1") {
    s.base = fock_figure_base();
    s.series = Axis{"sigma", {0.005, 0.01, 0.02}};
    const double top = detail::largest_threshold(s.base, "N_D", 0.0, 1e7, *s.series);
    s.axis1 = linear_axis("N_D", 0.0, 1.5 * top, 31);
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Config-file sweep keys: axis1.param, axis1.values (comma list) or
// axis1.lo/.hi/.n/.scale (linear|log); same for axis2 and series.

namespace detail {

struct AxisDraft {
  std::string param;
  std::vector<double> values;
  std::optional<double> lo, hi;
  int n = 0;
  bool log = false;
  bool touched = false;

  Axis build(const std::string& which) const {
    if (param.empty()) throw ConfigError(which + ".param is required");
    if (!values.empty()) return Axis{param, values};
    if (!lo || !hi || n < 1) throw ConfigError(which + " needs either .values or .lo/.hi/.n");
    return log ? log_axis(param, *lo, *hi, n) : linear_axis(param, *lo, *hi, n);
  }
};

inline std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_double(rest.substr(0, comma), key));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace detail

/// Protocol keys update spec.base; sweep keys rebuild the axes they mention.
inline void apply_sweep_settings(SweepSpec& spec, const std::vector<KeyValue>& kvs) {
  std::map<std::string, detail::AxisDraft> drafts;
  for (const auto& kv : kvs) {
    if (apply_protocol_setting(spec.base, kv.key, kv.value)) continue;
    const auto dot = kv.key.find('.');
    const std::string which = kv.key.substr(0, dot);
    if (dot == std::string::npos || (which != "axis1" && which != "axis2" && which != "series"))
      throw ConfigError("unknown config key '" + kv.key + "'");
    const std::string field = kv.key.substr(dot + 1);
    auto& d = drafts[which];
    d.touched = true;
    if (field == "param") d.param = kv.value;
    else if (field == "values") d.values = detail::parse_list(kv.value, kv.key);
    else if (field == "lo") d.lo = parse_double(kv.value, kv.key);
    else if (field == "hi") d.hi = parse_double(kv.value, kv.key);
    else if (field == "n") d.n = parse_int(kv.value, kv.key);
    else if (field == "scale") {
      if (kv.value != "linear" && kv.value != "log") throw ConfigError(kv.key + " must be linear or log");
      d.log = kv.value == "log";
    } else {
      throw ConfigError("unknown config key '" + kv.key + "'");
    }
  }
  for (auto& [which, d] : drafts) {
    // A draft without .param keeps the parameter of the axis it replaces.
    if (d.param.empty()) {
      if (which == "axis1") d.param = spec.axis1.parameter;
      else if (which == "axis2" && spec.axis2) d.param = spec.axis2->parameter;
      else if (which == "series" && spec.series) d.param = spec.series->parameter;
    }
    const Axis a = d.build(which);
    if (which == "axis1") spec.axis1 = a;
    else if (which == "axis2") spec.axis2 = a;
    else spec.series = a;
  }
}

/// Layers settings in increasing precedence: preset defaults, then the
/// config document, then `key=value` overrides.
inline SweepSpec resolve_sweep_spec(const std::optional<std::string>& preset_name,
                                    const std::optional<std::string>& config_text,
                                    const std::vector<std::string>& overrides) {
  SweepSpec spec;
  if (preset_name) spec = preset(*preset_name);
  if (config_text) apply_sweep_settings(spec, parse_key_values(*config_text));
  std::vector<KeyValue> kvs;
  for (const auto& o : overrides) kvs.push_back(parse_assignment(o));
  apply_sweep_settings(spec, kvs);
  return spec;
}

// ---------------------------------------------------------------------------
// Evaluation

struct SweepResult {
  std::string csv;
  Warnings warnings;
};

/// Evaluates every (axis2, axis1, series) point, `workers` at a time, and
/// assembles rows in axis order (axis2 outer). Output does not depend on
/// `workers`.
inline SweepResult run_sweep(const SweepSpec& spec, int workers = 1) {
  validate(spec);
  const Axis outer = spec.axis2.value_or(Axis{"", {0.0}});
  const Axis series = spec.series.value_or(Axis{"", {0.0}});
  const std::size_t n1 = spec.axis1.values.size();
  const std::size_t ns = series.values.size();
  const std::size_t total = outer.values.size() * n1 * ns;

  struct Point {
    double metric = 0.0;
    Warnings warnings;
    std::exception_ptr error;
  };
  std::vector<Point> points(total);

  auto coordinates = [&](std::size_t idx) {
    const std::size_t s = idx % ns, i1 = (idx / ns) % n1, i2 = idx / (ns * n1);
    ProtocolConfig cfg = with_value(spec.base, spec.axis1.parameter, spec.axis1.values[i1]);
    std::string where = spec.axis1.parameter + "=" + format_sig(spec.axis1.values[i1]);
    if (spec.axis2) {
      cfg = with_value(cfg, outer.parameter, outer.values[i2]);
      where += ", " + outer.parameter + "=" + format_sig(outer.values[i2]);
    }
    if (spec.series) {
      cfg = with_value(cfg, series.parameter, series.values[s]);
      where += ", " + series.parameter + "=" + format_sig(series.values[s]);
    }
    return std::make_pair(cfg, where);
  };

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      auto& p = points[idx];
      try {
        p.metric = entanglement_metric(coordinates(idx).first, &p.warnings);
      } catch (...) {
        p.error = std::current_exception();
      }
    }
  };
  const int n_threads = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(total, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  SweepResult res;
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (points[idx].error) {
      const std::string where = coordinates(idx).second;
      try {
        std::rethrow_exception(points[idx].error);
      } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " at " + where);
      } catch (const std::exception& e) {
        throw NumericalError(std::string(e.what()) + " at " + where);
      }
    }
    for (const auto& w : points[idx].warnings.messages) res.warnings.add(coordinates(idx).second + ": " + w);
  }

  const std::string metric = spec.base.engine == Engine::gaussian ? "E_N" : "concurrence";
  std::string& csv = res.csv;
  if (spec.axis2) csv += outer.parameter + ",";
  csv += spec.axis1.parameter;
  for (std::size_t s = 0; s < ns; ++s)
    csv += "," + (spec.series ? metric + "[" + series.parameter + "=" + format_sig(series.values[s]) + "]" : metric);
  csv += "\n";
  for (std::size_t i2 = 0; i2 < outer.values.size(); ++i2)
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      if (spec.axis2) csv += format_sig(outer.values[i2]) + ",";
      csv += format_sig(spec.axis1.values[i1]);
      for (std::size_t s = 0; s < ns; ++s) csv += "," + format_sig(points[(i2 * n1 + i1) * ns + s].metric);
      csv += "\n";
    }
  return res;
}

}  // namespace optomech
