// Copyright 2026 The holocnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-text device configuration. One `key = value` per line, `#` starts a
// comment. Frequencies are linear MHz (value = omega / 2 pi), times are ns.
// Conversion to rad/s and s happens here and nowhere else.

#pragma once

#include "evolve.hpp"
#include "hilbert.hpp"
#include "integrator.hpp"
#include "model.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace holocnot {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The device defaults as a configuration file.
inline const char* default_config_text() {
  return R"(# Two-qutrit device coupled through a bus resonator.
# Frequencies in MHz (linear), times in ns.

omega_r = 5584
omega_1 = 5580
omega_2 = 5584
alpha_1 = 242
alpha_2 = 249
lambda_1 = 20.8
lambda_2 = 19.9

omega_ge = 2.2
omega_ef = 2.2
ramp_time = 10
gate_time = 237.27272727272728

t1_e_1 = 23900
t1_e_2 = 15900
t1_f_1 = 13000
t1_f_2 = 10700
t_phi_1 = 40000
t_phi_2 = 40000
kappa = 0

full_crosstalk = false
delta1_convention = single
drive_tuning = dressed

levels = 4
fock_dim = 5
max_step = 2
tolerance = 1e-10
)";
}

struct Config {
  DeviceParams device;
  HilbertSpace space;
  IntegratorSettings integrator;
  std::string source;  // path, or "default"
  std::string digest;  // FNV-1a of the text, hex

  PulseSchedule schedule() const { return make_schedule(device); }
};

/// 64-bit FNV-1a, 16 hex digits.
inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& value, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects true or false, got '" + value + "'");
}

inline int parse_int(const std::string& key, const std::string& value, int line) {
  const double v = parse_number(key, value, line);
  if (v != static_cast<int>(v)) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects an integer, got '" + value + "'");
  }
  return static_cast<int>(v);
}

}  // namespace detail

/// Parses configuration text. Keys not set keep the defaults; unknown keys,
/// repeated keys, malformed values and out-of-range parameters throw
/// ConfigError.
inline Config parse_config(const std::string& text, const std::string& source = "<text>") {
  Config cfg;
  cfg.source = source;
  cfg.digest = fnv1a_hex(text);
  DeviceParams& d = cfg.device;
  std::optional<std::array<double, 2>> t2_star;
  std::array<bool, 2> t_phi_set{};

  using Setter = std::function<void(const std::string&, const std::string&, int)>;
  auto freq = [](double& target) -> Setter {
    return [&target](const std::string& k, const std::string& v, int line) { target = mhz(detail::parse_number(k, v, line)); };
  };
  auto time = [](double& target) -> Setter {
    return [&target](const std::string& k, const std::string& v, int line) { target = ns(detail::parse_number(k, v, line)); };
  };
  const std::map<std::string, Setter> setters{
      {"omega_r", freq(d.omega_r)},
      {"omega_1", freq(d.omega[0])},
      {"omega_2", freq(d.omega[1])},
      {"alpha_1", freq(d.alpha[0])},
      {"alpha_2", freq(d.alpha[1])},
      {"lambda_1", freq(d.lambda[0])},
      {"lambda_2", freq(d.lambda[1])},
      {"omega_ge", freq(d.omega_ge_drive)},
      {"omega_ef", freq(d.omega_ef_drive)},
      {"kappa", freq(d.kappa)},
      {"ramp_time", time(d.ramp_time)},
      {"gate_time", time(d.gate_time)},
      {"t1_e_1", time(d.t1_e[0])},
      {"t1_e_2", time(d.t1_e[1])},
      {"t1_f_1", time(d.t1_f[0])},
      {"t1_f_2", time(d.t1_f[1])},
      {"t_phi_1", [&](const std::string& k, const std::string& v, int l) { d.t_phi[0] = ns(detail::parse_number(k, v, l)); t_phi_set[0] = true; }},
      {"t_phi_2", [&](const std::string& k, const std::string& v, int l) { d.t_phi[1] = ns(detail::parse_number(k, v, l)); t_phi_set[1] = true; }},
      {"t2_star_1", [&](const std::string& k, const std::string& v, int l) { if (!t2_star) t2_star.emplace(); (*t2_star)[0] = ns(detail::parse_number(k, v, l)); }},
      {"t2_star_2", [&](const std::string& k, const std::string& v, int l) { if (!t2_star) t2_star.emplace(); (*t2_star)[1] = ns(detail::parse_number(k, v, l)); }},
      {"full_crosstalk", [&](const std::string& k, const std::string& v, int l) { d.full_crosstalk = detail::parse_bool(k, v, l); }},
      {"delta1_convention",
       [&](const std::string& k, const std::string& v, int l) {
         if (v == "single") d.delta1_convention = Delta1Convention::single;
         else if (v == "doubled") d.delta1_convention = Delta1Convention::doubled;
         else throw ConfigError("line " + std::to_string(l) + ": '" + k + "' expects single or doubled");
       }},
      {"drive_tuning",
       [&](const std::string& k, const std::string& v, int l) {
         if (v == "dressed") d.drive_tuning = DriveTuning::dressed;
         else if (v == "analytic") d.drive_tuning = DriveTuning::analytic;
         else throw ConfigError("line " + std::to_string(l) + ": '" + k + "' expects dressed or analytic");
       }},
      {"levels",
       [&](const std::string& k, const std::string& v, int l) {
         cfg.space.levels_q1 = cfg.space.levels_q2 = detail::parse_int(k, v, l);
       }},
      {"fock_dim", [&](const std::string& k, const std::string& v, int l) { cfg.space.fock_dim = detail::parse_int(k, v, l); }},
      {"max_step", [&](const std::string& k, const std::string& v, int l) { cfg.integrator.max_step = ns(detail::parse_number(k, v, l)); }},
      {"tolerance", [&](const std::string& k, const std::string& v, int l) { cfg.integrator.tolerance = detail::parse_number(k, v, l); }},
      {"columns", [&](const std::string& k, const std::string& v, int l) { cfg.integrator.columns = detail::parse_int(k, v, l); }},
  };

  std::istringstream in(text);
  std::string raw;
  std::map<std::string, int> seen;
  for (int line = 1; std::getline(in, raw); ++line) {
    const std::string body = detail::trim(raw.substr(0, raw.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    if (auto [pos, fresh] = seen.emplace(key, line); !fresh) {
      throw ConfigError("line " + std::to_string(line) + ": '" + key + "' already set on line " +
                        std::to_string(pos->second));
    }
    it->second(key, value, line);
  }

  try {
    if (t2_star) {
      for (int j = 0; j < 2; ++j) {
        const std::string name = "t2_star_" + std::to_string(j + 1);
        if (!seen.count(name)) throw ConfigError("'" + name + "' missing: set both T2* values or neither");
        if (t_phi_set[j]) throw ConfigError("'" + name + "' conflicts with 't_phi_" + std::to_string(j + 1) + "'");
        d.t_phi[j] = pure_dephasing_from_t2star(d.t1_e[j], (*t2_star)[j]);
      }
    }
    d.validate();
    cfg.space.validate();
    if (cfg.space.levels_q1 < 3) throw ConfigError("levels must be at least 3");
    if (!(cfg.integrator.max_step > 0.0)) throw ConfigError("max_step must be positive");
    if (!(cfg.integrator.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (cfg.integrator.columns < 1) throw ConfigError("columns must be at least 1");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("range error: ") + e.what());
  }
  return cfg;
}

/// Loads `path`, or the bundled defaults when `path` is "default".
inline Config load_config(const std::string& path) {
  if (path == "default") return parse_config(default_config_text(), "default");
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  try {
    return parse_config(buf.str(), path);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace holocnot
