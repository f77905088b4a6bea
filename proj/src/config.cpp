#include "nozzleflow/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

namespace {

std::string trim(const std::string& s) {
  const auto lo = s.find_first_not_of(" \t\r");
  if (lo == std::string::npos) return {};
  const auto hi = s.find_last_not_of(" \t\r");
  return s.substr(lo, hi - lo + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != static_cast<int>(x)) throw ConfigError("config: " + key + " expects an integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("config: " + key + " expects a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <class T>
Setter num(T RunConfig::*f) {
  return [f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = to_double(k, v); };
}
Setter opt(std::optional<double> RunConfig::*f) {
  return [f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = to_double(k, v); };
}
Setter integer(int RunConfig::*f) {
  return [f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = to_int(k, v); };
}
Setter flag(bool RunConfig::*f) {
  return [f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = to_bool(k, v); };
}
Setter str(std::string RunConfig::*f) {
  return [f](RunConfig& c, const std::string&, const std::string& v) { c.*f = v; };
}
Setter list(std::vector<double> RunConfig::*f) {
  return [f](RunConfig& c, const std::string& k, const std::string& v) { c.*f = to_list(k, v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"gamma", num(&RunConfig::gamma)},
      {"kappa", opt(&RunConfig::kappa)},
      {"delta", opt(&RunConfig::delta)},
      {"profile", str(&RunConfig::profile)},
      {"profile_params", list(&RunConfig::profile_params)},
      {"profile_table", str(&RunConfig::profile_table)},
      {"bc", str(&RunConfig::bc)},
      {"rho_left", num(&RunConfig::rho_left)},
      {"u_left", num(&RunConfig::u_left)},
      {"rho_right", num(&RunConfig::rho_right)},
      {"u_right", num(&RunConfig::u_right)},
      {"rho_bar", num(&RunConfig::rho_bar)},
      {"initial", str(&RunConfig::initial)},
      {"x_jump", num(&RunConfig::x_jump)},
      {"bump_amp", num(&RunConfig::bump_amp)},
      {"bump_center", num(&RunConfig::bump_center)},
      {"bump_width", num(&RunConfig::bump_width)},
      {"bump_speed", num(&RunConfig::bump_speed)},
      {"mollify", num(&RunConfig::mollify)},
      {"blend", num(&RunConfig::blend)},
      {"eps", num(&RunConfig::eps)},
      {"eps0", num(&RunConfig::eps0)},
      {"n_eps", integer(&RunConfig::n_eps)},
      {"eps_list", list(&RunConfig::eps_list)},
      {"beta", num(&RunConfig::beta)},
      {"q", num(&RunConfig::q)},
      {"L0", num(&RunConfig::L0)},
      {"M_budget", num(&RunConfig::M_budget)},
      {"a", opt(&RunConfig::a)},
      {"b", opt(&RunConfig::b)},
      {"force", flag(&RunConfig::force)},
      {"dx", num(&RunConfig::dx)},
      {"cells", integer(&RunConfig::cells)},
      {"cfl", num(&RunConfig::cfl)},
      {"t_end", num(&RunConfig::t_end)},
      {"snapshots", integer(&RunConfig::snapshots)},
      {"k_lo", num(&RunConfig::k_lo)},
      {"k_hi", num(&RunConfig::k_hi)},
      {"p", num(&RunConfig::p)},
      {"q_m", num(&RunConfig::q_m)},
      {"diag_energy", flag(&RunConfig::diag_energy)},
      {"diag_riemann", flag(&RunConfig::diag_riemann)},
      {"diag_integrability", flag(&RunConfig::diag_integrability)},
      {"diag_weak", flag(&RunConfig::diag_weak)},
      {"diag_quartic", flag(&RunConfig::diag_quartic)},
      {"rho_tilde", num(&RunConfig::rho_tilde)},
      {"energy_M", num(&RunConfig::energy_M)},
      {"energy_tol", num(&RunConfig::energy_tol)},
      {"entropy_tol", num(&RunConfig::entropy_tol)},
      {"threads", integer(&RunConfig::threads)},
      {"output_dir", str(&RunConfig::output_dir)},
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.seed = static_cast<unsigned>(to_int(k, v));
       }},
  };
  return m;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(c, key, value);
  }
  if (c.k_hi <= c.k_lo) throw ConfigError("config: k_hi must exceed k_lo");
  if (c.snapshots < 1) throw ConfigError("config: snapshots must be positive");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace nozzleflow
