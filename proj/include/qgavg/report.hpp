#pragma once

#include <string>
#include <vector>

namespace qgavg {

struct Check {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Report {
  std::string title;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  void add(const std::string& name, double residual, double tol);
  void merge(const Report& other);
  bool all_pass() const;
  double max_residual() const;
  std::string render_text() const;
  std::string render_json() const;
  std::string digest() const;  // over the json rendering
};

}  // namespace qgavg
