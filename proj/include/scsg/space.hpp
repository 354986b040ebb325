#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace scsg {

// Bits per component against the class's information-theoretic baseline.
struct SpaceReport {
  std::string cls;
  size_t n = 0, m = 0;
  std::vector<std::pair<std::string, size_t>> parts;     // succinct structure
  std::vector<std::pair<std::string, size_t>> overhead;  // vertex map and component table
  std::string unit;                                      // "m" or "n"
  double baseline = 0;                                   // bits per unit
  std::vector<std::pair<std::string, double>> other_baselines;

  size_t total() const {
    size_t t = 0;
    for (auto& [k, b] : parts) t += b;
    return t;
  }
  size_t units() const { return unit == "m" ? m : n; }
  double per_unit() const { return units() ? static_cast<double>(total()) / static_cast<double>(units()) : 0.0; }
  double ratio() const { return baseline > 0 ? per_unit() / baseline : 0.0; }

  std::string text() const {
    std::string s;
    char buf[160];
    std::snprintf(buf, sizeof buf, "class %s  n=%zu  m=%zu\n", cls.c_str(), n, m);
    s += buf;
    for (auto& [k, b] : parts) {
      std::snprintf(buf, sizeof buf, "  %-12s %12zu bits\n", k.c_str(), b);
      s += buf;
    }
    std::snprintf(buf, sizeof buf, "  %-12s %12zu bits  (%.3f bits/%s)\n", "total", total(), per_unit(), unit.c_str());
    s += buf;
    std::snprintf(buf, sizeof buf, "  baseline %.3f%s  ratio %.3f\n", baseline, unit.c_str(), ratio());
    s += buf;
    for (auto& [k, b] : other_baselines) {
      double u = k.back() == 'm' ? static_cast<double>(m) : static_cast<double>(n);
      std::snprintf(buf, sizeof buf, "  reference %s  ratio %.3f\n", k.c_str(),
                    u > 0 ? static_cast<double>(total()) / (b * u) : 0.0);
      s += buf;
    }
    for (auto& [k, b] : overhead) {
      std::snprintf(buf, sizeof buf, "  overhead %-12s %12zu bits (not in total)\n", k.c_str(), b);
      s += buf;
    }
    return s;
  }
};

}  // namespace scsg
