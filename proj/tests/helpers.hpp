#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "reebext/census.hpp"
#include "reebext/reeb_graph.hpp"

namespace testing {

inline std::string fixture_text(const std::string& name) {
  std::ifstream in(std::string(REEBEXT_FIXTURE_DIR) + "/" + name + ".txt");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline reebext::LabeledReebGraph fixture(const std::string& name) {
  return reebext::parse_instance(fixture_text(name));
}

// Sphere with its two extrema at slots 0 and 1.
inline reebext::LabeledReebGraph sphere(char born, char dies) {
  std::string text = "slots 2\nvertex a slot=0 sign=";
  text += born;
  text += "\nvertex b slot=1 sign=";
  text += dies;
  text += "\nedge e a -> b wraps=0\n";
  return reebext::parse_instance(text);
}

// Small instances shared by the property tests.
inline const std::vector<reebext::LabeledReebGraph>& small_instances() {
  static const auto instances = [] {
    reebext::CensusOptions o;
    o.max_vertices = 4;
    o.max_wraps = 1;
    o.max_strands = 3;
    return reebext::enumerate_instances(o);
  }();
  return instances;
}

}  // namespace testing
