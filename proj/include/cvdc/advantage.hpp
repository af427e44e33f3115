#pragma once

// Quantum advantage of the dense-coding network over the best unentangled
// scheme at equal sender energy: thresholds, break-even squeezing,
// transmissivity boundaries and region scans.

#include "cvdc/dc_protocol.hpp"

#include <optional>
#include <span>
#include <vector>

namespace cvdc {

inline constexpr double kThresholdLowerBracket = 1e-6;
inline constexpr double kThresholdSearchCap = 1e4;
inline constexpr double kThresholdTolerance = 1e-6;

/// Capacity of n_senders independent single-mode channels sharing `nbar`
/// photons equally, sum_i (1+x)ln(1+x) - x ln x with x = nbar / n_senders.
/// Zero at nbar = 0.
double classical_capacity(int n_senders, double nbar);

/// C_quantum(taus, nbar) - C_classical(N-1, nbar).
double quantum_advantage(int n_modes, std::span<const double> taus, double nbar);

/// Energy at which the advantage turns positive: geometric bracketing from
/// kThresholdLowerBracket up to kThresholdSearchCap, then bisection to
/// kThresholdTolerance. std::nullopt when no sign change exists below the cap.
std::optional<double> threshold_energy(int n_modes, std::span<const double> taus);
std::optional<double> threshold_energy(const CapacityEvaluator& evaluator);

struct MinThresholdResult {
  double nbar_th = 0.0;
  std::vector<double> taus;
  /// Coarse-grid points whose threshold lies within 1e-4 of the best one.
  std::vector<std::vector<double>> coarse_ties;
};

/// Minimum threshold energy over the tau hypercube: coarse grid with
/// `grid_per_axis` points per axis, then box-projected Nelder-Mead. Defined
/// for three and four modes.
MinThresholdResult min_threshold_energy(int n_modes, int grid_per_axis = 64);

struct TauInterval {
  double lo = 0.0;
  double hi = 0.0;
  /// Closed-form values before clamping to [0, 1].
  double raw_lo = 0.0;
  double raw_hi = 0.0;
  bool empty = false;
  bool clamped = false;
};

/// Closed-form advantage boundary for the next free transmissivity given the
/// fixed prefix (three or four modes). Trailing free transmissivities are
/// taken at 0, where the advantage is largest, so the interval is the
/// projection of the advantage region onto the next axis.
///
/// prefix = {}          -> tau1 in [lo, hi], symmetric about 1/2
/// prefix = {tau1}      -> tau2 in [0, tau2_max]
/// prefix = {tau1,tau2} -> tau3 in [0, tau3_max]   (four modes)
///
/// An empty region (negative discriminant or negative maximum) is reported in
/// the result, not thrown.
TauInterval tau_boundaries(int n_modes, double nbar, std::span<const double> prefix);

/// r = 1/2 ln(1 + 2 N_th / (N-1)).
std::optional<double> break_even_squeezing(int n_modes, std::span<const double> taus);

/// C_quantum / C_classical at N = (N_modes-1) e^r sinh r, r >= 10.
double asymptotic_ratio(int n_modes, std::span<const double> taus, double r);

struct RegionRecord {
  std::vector<double> taus;
  double delta = 0.0;
  bool advantage = false;
};

struct RegionScan {
  int n_modes = 0;
  double nbar = 0.0;
  int grid = 0;
  /// Lexicographic in grid indices, tau1 slowest.
  std::vector<RegionRecord> records;

  std::size_t advantage_count() const;
};

/// Advantage on the uniform grid tau_i = k / (grid - 1). `workers` = 0 uses
/// the hardware concurrency; output does not depend on the worker count.
RegionScan region_scan(int n_modes, double nbar, int grid, unsigned workers = 0);

}  // namespace cvdc
