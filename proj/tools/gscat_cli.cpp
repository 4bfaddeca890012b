#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"

#include "gscat/commands.hpp"

using namespace gscat;

namespace {

struct Flag {
  const char* name;
  const char* section;
  const char* key;
  const char* help;
  bool is_switch = false;
};

const std::vector<Flag> kFlags{
    {"--family", "graph", "family", "graph family, e.g. C:10:5, AC:4, Line:27"},
    {"--graph", "graph", "file", "graph file (edge list format)"},
    {"--e-min", "scan", "e_min", "lowest scan energy"},
    {"--e-max", "scan", "e_max", "highest scan energy"},
    {"--points", "scan", "points", "number of scan points"},
    {"--band-cutoff", "scan", "band_cutoff", "scans must stay inside [-cutoff, cutoff]"},
    {"--eps", "physics", "eps", "limiting-absorption epsilon"},
    {"--order", "physics", "order", "Gauss-Legendre points per contour panel"},
    {"--ejection-nodes", "physics", "ejection_nodes", "nodes of the ejection integral"},
    {"--richardson", "physics", "richardson", "extrapolate J to eps -> 0", true},
    {"--stats", "physics", "statistics", "boson, fermion or distinguishable"},
    {"--u", "physics", "u", "on-site interaction (inf for hard core)"},
    {"--p1", "two", "p1", "first incoming momentum (sign: direction of travel)"},
    {"--p2", "two", "p2", "second incoming momentum"},
    {"--onshell", "two", "onshell", "R on the energy-conservation curve instead of a grid", true},
    {"--grid-points", "two", "grid_points", "grid size per momentum axis"},
    {"--chi", "budget", "chi", "bound-state index (default: highest evanescent)"},
    {"--rail", "budget", "rail", "incoming rail"},
    {"--E1", "xsec", "e1", "first packet energy"},
    {"--E2", "xsec", "e2", "second packet energy"},
    {"--n1", "xsec", "n1", "first packet rail"},
    {"--n2", "xsec", "n2", "second packet rail"},
    {"--delta", "xsec", "delta", "packet half width in energy"},
    {"--delta-scan", "xsec", "delta_scan", "scan delta from 1e-3 up", true},
    {"--xsec-nodes", "xsec", "nodes", "Gauss-Legendre nodes of the packet integrals"},
    {"--scenario", "oracle", "scenario", "oracle scenario or all"},
    {"--rail-length", "oracle", "rail_length", "sites per truncated rail"},
    {"--sigma", "oracle", "sigma", "packet width in sites"},
    {"--samples", "oracle", "samples", "time-series samples"},
    {"--out", "output", "dir", "output directory (default $GSCAT_OUT or .)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering on graphs in the quantum-walk model"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value file with [sections]")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "override as section.key=value");
  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;
  for (const std::string& verb : command_names()) {
    CLI::App* sub = app.add_subcommand(verb);
    sub->fallthrough();
    for (const Flag& f : kFlags) {
      if (f.is_switch)
        sub->add_flag_function(f.name, [&switches, &f](std::int64_t) { switches[f.name] = true; }, f.help);
      else
        sub->add_option_function<std::string>(f.name, [&values, &f](const std::string& v) { values[f.name] = v; },
                                              f.help);
    }
  }
  CLI11_PARSE(app, argc, argv);
  const std::string verb = app.get_subcommands().front()->get_name();

  try {
    RunConfig c = config_path.empty() ? RunConfig{} : read_config_file(config_path);
    for (const std::string& s : sets) {
      const auto dot = s.find('.'), eq = s.find('=');
      if (dot == std::string::npos || eq == std::string::npos || eq < dot)
        throw ConfigError("--set expects section.key=value, got '" + s + "'");
      set_config_value(c, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
    }
    for (const Flag& f : kFlags) {
      if (switches.count(f.name)) set_config_value(c, f.section, f.key, "true");
      if (auto it = values.find(f.name); it != values.end()) {
        try {
          set_config_value(c, f.section, f.key, it->second);
        } catch (const ConfigError& e) {
          throw ConfigError(std::string(f.name) + ": " + e.what());
        }
      }
    }
    const CommandResult r = run_command(verb, c);
    std::cout << r.summary << "\n";
    for (const auto& f : r.files) std::cout << "wrote " << f << "\n";
    return r.exit_code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
