#pragma once

#include <limits>
#include <map>
#include <string>

#include "gscat/graph.hpp"
#include "gscat/types.hpp"

namespace gscat {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Every knob of a run. Physics defaults live here and nowhere else.
struct RunConfig {
  // [graph]
  std::string family;      // e.g. C:10:5
  std::string graph_file;  // alternative to family
  // [scan]
  double e_min = -1.99, e_max = 1.99;
  int points = 201;
  double band_cutoff = 1.99;
  // [physics]
  double eps = 1e-3;
  int order = 12;  // GL points per contour panel for J
  int ejection_nodes = 512;
  bool richardson = false;
  Statistics stats = Statistics::Boson;
  double u = std::numeric_limits<double>::infinity();
  // [two]
  double p1 = -1.0, p2 = 0.5;
  bool onshell = false;
  int grid_points = 64;
  // [budget]
  int chi = -1;  // bound-state index; -1 picks the highest evanescent state
  int rail = 1;
  // [xsec]
  double e1 = 0.0, e2 = 1.41421356237309515;
  int n1 = 1, n2 = 2;
  double delta = 0.1;
  bool delta_scan = false;
  int xsec_nodes = 8;
  // [oracle]
  std::string scenario = "all";
  int rail_length = 400;
  double sigma = 20.0;
  int samples = 40;
  // [output]
  std::string out_dir;  // empty: $GSCAT_OUT, else the current directory

  Graph graph() const;
  std::string output_dir() const;
  // throws ConfigError on anything out of range
  void validate() const;
};

// key = value lines under [section] headers; '#' and ';' start comments.
// Unknown keys and malformed lines raise ConfigError naming the line.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig read_config_file(const std::string& path);
// apply one "section.key" = value (used for command-line overrides)
void set_config_value(RunConfig& c, const std::string& section, const std::string& key,
                      const std::string& value);
// canonical text form; parse_config(format_config(c)) == c
std::string format_config(const RunConfig& c);
// section -> key -> value, same content as format_config
std::map<std::string, std::map<std::string, std::string>> config_entries(const RunConfig& c);

}  // namespace gscat
