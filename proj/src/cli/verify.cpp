#include "cvdc/cli.hpp"

#include <array>
#include <cmath>

namespace cvdc::cli {

namespace {

Checkpoint absolute(std::string name, double value, double expected, double tol) {
  return {std::move(name), value, expected, tol, false, std::abs(value - expected) <= tol};
}

Checkpoint relative(std::string name, double value, double expected, double tol) {
  return {std::move(name), value, expected, tol, true, std::abs(value - expected) <= tol * std::abs(expected)};
}

double or_nan(const std::optional<double>& v) { return v ? *v : std::nan(""); }

}  // namespace

std::vector<Checkpoint> run_checkpoints() {
  constexpr std::array<double, 2> half3{0.5, 0.5};
  constexpr std::array<double, 3> half4{0.5, 0.5, 0.5};

  std::vector<Checkpoint> out;
  out.push_back(absolute("threshold_3mode_half_half", or_nan(threshold_energy(3, half3)), 8.15, 0.01));
  out.push_back(absolute("min_threshold_3mode", min_threshold_energy(3).nbar_th, 5.38, 0.02));
  out.push_back(absolute("threshold_4mode_half_half_half", or_nan(threshold_energy(4, half4)), 24.87, 0.01));
  out.push_back(absolute("min_threshold_4mode", min_threshold_energy(4).nbar_th, 11.45, 0.02));
  out.push_back(absolute("break_even_r_3mode", or_nan(break_even_squeezing(3, half3)), 1.10685, 0.001));
  out.push_back(absolute("break_even_r_4mode", or_nan(break_even_squeezing(4, half4)), 1.433, 0.002));
  out.push_back(relative("capacity_ratio_3mode_r20", asymptotic_ratio(3, half3, 20.0), 1.5, 0.01));
  out.push_back(relative("capacity_ratio_4mode_r20", asymptotic_ratio(4, half4, 20.0), 4.0 / 3.0, 0.01));
  return out;
}

}  // namespace cvdc::cli
