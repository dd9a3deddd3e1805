#pragma once

#include <functional>
#include <vector>

namespace hrkit {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

struct QuadOptions {
  double r_min = 0.0;         // lower cutoff; 0 means 1e-12 * R
  double panel_ds = 0.05;     // panel width in s = log r
  double max_panel_dr = 0.0;  // panel width cap in r; 0 means R / 64
  bool tail = true;           // add a power-law tail estimate below r_min
};

// Integrates several integrands over (0, R] at once. eval(r, out) fills out[0..count).
// Panels are uniform in log r (plus the r cap) with the given breakpoints honoured;
// each panel uses 5-point Gauss-Legendre, the error estimate is |GL5 - GL3|.
std::vector<QuadResult> integrate_radial(const std::function<void(double, double*)>& eval,
                                         int count, double R, const QuadOptions& opts = {},
                                         const std::vector<double>& breakpoints = {});

QuadResult integrate_radial(const std::function<double(double)>& f, double R,
                            const QuadOptions& opts = {});

}  // namespace hrkit
