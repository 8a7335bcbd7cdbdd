#include "qgavg/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "qgavg/core.hpp"

namespace qgavg {

namespace {

std::string fmt_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", r);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void Report::add(const std::string& name, double residual, double tol) {
  checks.push_back({name, residual, tol, residual <= tol});
}

void Report::merge(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

double Report::max_residual() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.residual);
  return m;
}

std::string Report::render_text() const {
  std::ostringstream os;
  os << title << "\n";
  for (const auto& c : checks) {
    os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << "  residual "
       << fmt_residual(c.residual) << "  tol " << fmt_residual(c.tol) << "\n";
  }
  for (const auto& n : notes) os << "  note: " << n << "\n";
  os << (all_pass() ? "all checks passed" : "SOME CHECKS FAILED") << "\n";
  return os.str();
}

std::string Report::render_json() const {
  std::ostringstream os;
  os << "{\"title\":\"" << json_escape(title) << "\",\"checks\":[";
  for (size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    if (i) os << ",";
    os << "{\"name\":\"" << json_escape(c.name) << "\",\"residual\":\""
       << fmt_residual(c.residual) << "\",\"tol\":\"" << fmt_residual(c.tol)
       << "\",\"pass\":" << (c.pass ? "true" : "false") << "}";
  }
  os << "],\"notes\":[";
  for (size_t i = 0; i < notes.size(); ++i) {
    if (i) os << ",";
    os << "\"" << json_escape(notes[i]) << "\"";
  }
  os << "],\"all_pass\":" << (all_pass() ? "true" : "false") << "}";
  return os.str();
}

std::string Report::digest() const {
  const std::string j = render_json();
  return hex64(fnv1a64(j.data(), j.size()));
}

}  // namespace qgavg
