#include "gscat/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "gscat/oracle.hpp"

namespace gscat {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string show(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double to_double(const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || std::isnan(x)) throw ConfigError("not a number: '" + v + "'");
  return x;
}

int to_int(const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || x < std::numeric_limits<int>::min() ||
      x > std::numeric_limits<int>::max())
    throw ConfigError("not an integer: '" + v + "'");
  return static_cast<int>(x);
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("not a boolean: '" + v + "'");
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

Field real(const char* s, const char* k, double RunConfig::*m) {
  return {s, k, [m](const RunConfig& c) { return show(c.*m); },
          [m](RunConfig& c, const std::string& v) { c.*m = to_double(v); }};
}
Field integer(const char* s, const char* k, int RunConfig::*m) {
  return {s, k, [m](const RunConfig& c) { return std::to_string(c.*m); },
          [m](RunConfig& c, const std::string& v) { c.*m = to_int(v); }};
}
Field flag(const char* s, const char* k, bool RunConfig::*m) {
  return {s, k, [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); },
          [m](RunConfig& c, const std::string& v) { c.*m = to_bool(v); }};
}
Field text(const char* s, const char* k, std::string RunConfig::*m) {
  return {s, k, [m](const RunConfig& c) { return c.*m; },
          [m](RunConfig& c, const std::string& v) { c.*m = v; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f{
      text("graph", "family", &RunConfig::family),
      text("graph", "file", &RunConfig::graph_file),
      real("scan", "e_min", &RunConfig::e_min),
      real("scan", "e_max", &RunConfig::e_max),
      integer("scan", "points", &RunConfig::points),
      real("scan", "band_cutoff", &RunConfig::band_cutoff),
      real("physics", "eps", &RunConfig::eps),
      integer("physics", "order", &RunConfig::order),
      integer("physics", "ejection_nodes", &RunConfig::ejection_nodes),
      flag("physics", "richardson", &RunConfig::richardson),
      {"physics", "statistics", [](const RunConfig& c) { return std::string(to_string(c.stats)); },
       [](RunConfig& c, const std::string& v) {
         try {
           c.stats = parse_statistics(v);
         } catch (const DomainError& e) {
           throw ConfigError(e.what());
         }
       }},
      real("physics", "u", &RunConfig::u),
      real("two", "p1", &RunConfig::p1),
      real("two", "p2", &RunConfig::p2),
      flag("two", "onshell", &RunConfig::onshell),
      integer("two", "grid_points", &RunConfig::grid_points),
      integer("budget", "chi", &RunConfig::chi),
      integer("budget", "rail", &RunConfig::rail),
      real("xsec", "e1", &RunConfig::e1),
      real("xsec", "e2", &RunConfig::e2),
      integer("xsec", "n1", &RunConfig::n1),
      integer("xsec", "n2", &RunConfig::n2),
      real("xsec", "delta", &RunConfig::delta),
      flag("xsec", "delta_scan", &RunConfig::delta_scan),
      integer("xsec", "nodes", &RunConfig::xsec_nodes),
      text("oracle", "scenario", &RunConfig::scenario),
      integer("oracle", "rail_length", &RunConfig::rail_length),
      real("oracle", "sigma", &RunConfig::sigma),
      integer("oracle", "samples", &RunConfig::samples),
      text("output", "dir", &RunConfig::out_dir),
  };
  return f;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (section == f.section && key == f.key) return &f;
  return nullptr;
}

}  // namespace

void set_config_value(RunConfig& c, const std::string& section, const std::string& key,
                      const std::string& value) {
  const Field* f = find_field(section, key);
  if (!f) throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
  f->set(c, value);
}

RunConfig parse_config(const std::string& content, const std::string& origin) {
  RunConfig c;
  std::istringstream in(content);
  std::string line, section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find_first_of("#;");
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const std::string where = origin + ":" + std::to_string(number) + ": ";
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      bool known = false;
      for (const auto& f : fields()) known = known || section == f.section;
      if (!known) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of a section");
    try {
      set_config_value(c, section, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return c;
}

RunConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::map<std::string, std::map<std::string, std::string>> config_entries(const RunConfig& c) {
  std::map<std::string, std::map<std::string, std::string>> out;
  for (const auto& f : fields()) out[f.section][f.key] = f.get(c);
  return out;
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) os << "\n";
      section = f.section;
      os << "[" << section << "]\n";
    }
    os << f.key << " = " << f.get(c) << "\n";
  }
  return os.str();
}

Graph RunConfig::graph() const {
  if (!family.empty() && !graph_file.empty())
    throw ConfigError("give either a family or a graph file, not both");
  if (!family.empty()) return make_family(parse_family(family));
  if (!graph_file.empty()) return read_graph_file(graph_file);
  throw ConfigError("no graph given (family or file)");
}

std::string RunConfig::output_dir() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv("GSCAT_OUT"); env && *env) return env;
  return ".";
}

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  need(band_cutoff > 0.0 && band_cutoff < 2.0, "band_cutoff must lie in (0, 2)");
  need(e_min < e_max, "empty scan: e_min must be below e_max");
  need(std::abs(e_min) <= band_cutoff && std::abs(e_max) <= band_cutoff,
       "scan range leaves the open band [-" + show(band_cutoff) + ", " + show(band_cutoff) + "]");
  need(points >= 1, "empty scan: points must be at least 1");
  need(eps > 0.0, "eps must be positive");
  need(order >= 2, "order must be at least 2");
  need(ejection_nodes >= 2, "ejection_nodes must be at least 2");
  need(!std::isnan(u), "u must be a number or inf");
  need(grid_points >= 1, "grid_points must be at least 1");
  need(std::abs(p1) > 0.0 && std::abs(p1) < kPi && std::abs(p2) > 0.0 && std::abs(p2) < kPi,
       "momenta must satisfy 0 < |p| < pi");
  need(rail >= 1 && n1 >= 1 && n2 >= 1, "rail indices start at 1");
  need(delta > 0.0, "delta must be positive");
  need(xsec_nodes >= 2, "xsec nodes must be at least 2");
  need(rail_length >= 10, "rail_length must be at least 10");
  need(sigma > 0.0, "sigma must be positive");
  need(samples >= 0, "samples must be non-negative");
  if (scenario != "all") {
    bool known = false;
    for (const auto& s : scenario_names()) known = known || s == scenario;
    need(known, "unknown oracle scenario '" + scenario + "'");
  }
}

}  // namespace gscat
