#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "dicke/model.hpp"

namespace dicke {

/// Parses a plain-text key=value configuration file (one key per line,
/// '#' starts a comment).  Unknown keys are an error so typos do not pass
/// silently.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("ConfigFileNotFound", path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("ConfigParse",
                  path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline double parse_energy(const std::string& s) {
  if (s == "inf" || s == "infinity") return infinity;
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw Error("ConfigParse", "bad number: " + s);
  return v;
}

/// Applies key=value pairs onto ModelParams; keys mirror field names exactly.
inline ModelParams apply_params(ModelParams p,
                                const std::map<std::string, std::string>& kv) {
  for (const auto& [key, val] : kv) {
    if (key == "omega_c") p.omega_c = parse_energy(val);
    else if (key == "omega_z") p.omega_z = parse_energy(val);
    else if (key == "lambda") p.lambda = parse_energy(val);
    else if (key == "lambda_prime") p.lambda_prime = parse_energy(val);
    else if (key == "kappa") p.kappa = parse_energy(val);
    else if (key == "gamma") p.gamma = parse_energy(val);
    else if (key == "gamma_down") p.gamma_down = parse_energy(val);
    else if (key == "gamma_phi") p.gamma_phi = parse_energy(val);
    else if (key == "gamma_up") p.gamma_up = parse_energy(val);
    else if (key == "n_atoms") p.n_atoms = std::stoi(val);
    else if (key == "beta") p.beta = parse_energy(val);
    else throw Error("ConfigUnknownKey", key);
  }
  return p;
}

inline ModelParams params_from_file(const std::string& path) {
  return apply_params(ModelParams{}, read_config_file(path));
}

}  // namespace dicke
