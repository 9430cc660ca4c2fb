#include <cmath>

#include "sglab/asymptotics.hpp"

namespace sglab {

HardyReport hardy_check(std::span<const Complex> c) {
  HardyReport report;
  Complex previous = 0.0;  // implicit c_0
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double n = double(i + 1);
    report.lhs += std::norm(c[i]) / (n * n);
    report.rhs += std::norm(c[i] - previous);
    previous = c[i];
  }
  report.rhs += std::norm(previous);  // drop to zero past the end
  report.ratio = report.rhs > 0.0 ? report.lhs / (4.0 * report.rhs) : 0.0;
  return report;
}

}  // namespace sglab
