#include "cvdc/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace cvdc {

namespace {

void check_modes_taus(int n_modes, std::span<const double> taus, const char* what) {
  if (n_modes < 2) throw std::invalid_argument(std::string(what) + ": n_modes must be >= 2");
  if (static_cast<int>(taus.size()) != n_modes - 1) {
    throw std::invalid_argument(std::string(what) + ": expected n_modes - 1 transmissivities");
  }
}

double advantage(const CapacityEvaluator& eval, double nbar) {
  return eval.capacity(nbar) - classical_capacity(eval.n_modes() - 1, nbar);
}

// Threshold used as a minimization objective; points without a root sit
// above every attainable value.
double threshold_objective(int n_modes, std::span<const double> taus) {
  const auto th = threshold_energy(n_modes, taus);
  return th ? *th : 2.0 * kThresholdSearchCap;
}

std::vector<double> project_to_box(std::vector<double> x) {
  for (auto& v : x) v = std::clamp(v, 0.0, 1.0);
  return x;
}

struct Simplex {
  std::vector<std::vector<double>> points;
  std::vector<double> values;
};

// Nelder-Mead with the usual coefficients on the box [0,1]^d; candidates are
// projected onto the box before evaluation.
template <class F>
std::pair<std::vector<double>, double> nelder_mead(F&& f, std::vector<double> start, double step, double tol,
                                                   int max_iter) {
  const std::size_t d = start.size();
  Simplex s;
  s.points.push_back(project_to_box(start));
  for (std::size_t i = 0; i < d; ++i) {
    auto p = start;
    p[i] += (p[i] + step <= 1.0) ? step : -step;
    s.points.push_back(project_to_box(p));
  }
  for (const auto& p : s.points) s.values.push_back(f(p));

  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return project_to_box(out);
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<std::size_t> order(d + 1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return s.values[a] < s.values[b]; });
    Simplex sorted;
    for (auto i : order) {
      sorted.points.push_back(s.points[i]);
      sorted.values.push_back(s.values[i]);
    }
    s = std::move(sorted);

    double diameter = 0.0;
    for (std::size_t k = 1; k <= d; ++k) {
      for (std::size_t i = 0; i < d; ++i) diameter = std::max(diameter, std::abs(s.points[k][i] - s.points[0][i]));
    }
    if (diameter < tol) break;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < d; ++i) centroid[i] += s.points[k][i] / static_cast<double>(d);
    }
    const auto& worst = s.points[d];
    const auto reflected = combine(centroid, worst, -1.0);
    const double fr = f(reflected);
    if (fr < s.values[0]) {
      const auto expanded = combine(centroid, worst, -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        s.points[d] = expanded;
        s.values[d] = fe;
      } else {
        s.points[d] = reflected;
        s.values[d] = fr;
      }
      continue;
    }
    if (fr < s.values[d - 1]) {
      s.points[d] = reflected;
      s.values[d] = fr;
      continue;
    }
    const bool outside = fr < s.values[d];
    const auto contracted = outside ? combine(centroid, reflected, 0.5) : combine(centroid, worst, 0.5);
    const double fc = f(contracted);
    if (fc < std::min(fr, s.values[d])) {
      s.points[d] = contracted;
      s.values[d] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= d; ++k) {
      s.points[k] = combine(s.points[0], s.points[k], 0.5);
      s.values[k] = f(s.points[k]);
    }
  }
  const auto best = std::min_element(s.values.begin(), s.values.end()) - s.values.begin();
  return {s.points[best], s.values[best]};
}

// ln(nbar^{-2 nbar} (nbar + c)^{2 nbar + 2c}); exponentiating the two factors
// separately overflows for moderate nbar.
double log_energy_term(double nbar, double c) {
  return 2.0 * nbar * std::log1p(c / nbar) + 2.0 * c * std::log(nbar + c);
}

TauInterval finish_upper(double raw_hi) {
  TauInterval out;
  out.raw_lo = 0.0;
  out.raw_hi = raw_hi;
  out.lo = 0.0;
  if (!(raw_hi >= 0.0)) {
    out.empty = true;
    out.hi = 0.0;
    return out;
  }
  out.clamped = raw_hi > 1.0;
  out.hi = std::min(raw_hi, 1.0);
  return out;
}

TauInterval finish_symmetric(double discriminant, double denominator) {
  TauInterval out;
  if (!(discriminant >= 0.0)) {
    out.empty = true;
    out.lo = out.hi = out.raw_lo = out.raw_hi = 0.5;
    return out;
  }
  const double half = std::sqrt(discriminant) / denominator;
  out.raw_lo = 0.5 - half;
  out.raw_hi = 0.5 + half;
  out.clamped = out.raw_lo < 0.0 || out.raw_hi > 1.0;
  out.lo = std::max(out.raw_lo, 0.0);
  out.hi = std::min(out.raw_hi, 1.0);
  return out;
}

TauInterval three_mode_boundary(double nbar, std::span<const double> prefix) {
  const double y = nbar * (nbar + 2.0);
  const double x = 2.0 * y;
  const double log_p = log_energy_term(nbar, 2.0);
  if (prefix.empty()) {
    const double disc = 16.0 * (y + 3.0) * (y + 3.0) - 27.0 * std::exp(log_p) / (x + 3.0);
    return finish_symmetric(disc, 8.0 * y);
  }
  const double t1 = prefix[0];
  const double last = 27.0 * std::exp(log_p - std::log(nbar) - std::log(nbar + 2.0)) /
                      (32.0 * t1 * (x + 3.0) * (x * (1.0 - t1) + 3.0));
  return finish_upper(1.0 + 3.0 / (x * t1) - last);
}

TauInterval four_mode_boundary(double nbar, std::span<const double> prefix) {
  const double y = nbar * (nbar + 3.0);
  const double p = std::exp(log_energy_term(nbar, 3.0));
  if (prefix.empty()) {
    const double disc = 9.0 * (y + 6.0) * (y + 6.0) - 4.0 * p / ((y + 3.0) * (y + 3.0));
    return finish_symmetric(disc, 6.0 * y);
  }
  const double t1 = prefix[0];
  if (prefix.size() == 1) {
    const double num = p / ((y + 3.0) * (y + 3.0) * (y * (t1 - 1.0) - 3.0)) + 9.0 * y * t1 + 27.0;
    return finish_upper(num / (9.0 * y * t1));
  }
  const double t2 = prefix[1];
  const double a = y * (t1 - 1.0) - 3.0;
  const double b = y * t1 * (t2 - 1.0) - 3.0;
  const double c = (y + 3.0) * (t1 - 1.0) - 3.0 * t1 * t2;
  const double num = 9.0 * (y + 3.0) * (y + 3.0) * a * b - p;
  const double den = 9.0 * y * (y + 3.0) * b * c;
  return finish_upper(num / den);
}

}  // namespace

double classical_capacity(int n_senders, double nbar) {
  if (n_senders < 1) throw std::invalid_argument("classical_capacity: n_senders must be >= 1");
  if (!(nbar >= 0.0)) throw std::invalid_argument("classical_capacity: nbar must be >= 0");
  if (nbar == 0.0) return 0.0;
  const double x = nbar / n_senders;
  // (1+x)ln(1+x) - x ln x, rearranged to avoid cancellation at large x.
  return n_senders * (std::log1p(x) + x * std::log1p(1.0 / x));
}

double quantum_advantage(int n_modes, std::span<const double> taus, double nbar) {
  const auto rep = capacity(n_modes, taus, nbar);
  return rep.delta;
}

std::optional<double> threshold_energy(int n_modes, std::span<const double> taus) {
  check_modes_taus(n_modes, taus, "threshold_energy");
  return threshold_energy(CapacityEvaluator(n_modes, taus));
}

std::optional<double> threshold_energy(const CapacityEvaluator& eval) {
  double lo = kThresholdLowerBracket;
  if (advantage(eval, lo) > 0.0) return lo;
  double hi = lo;
  while (true) {
    hi = std::min(2.0 * hi, kThresholdSearchCap);
    if (advantage(eval, hi) > 0.0) break;
    if (hi >= kThresholdSearchCap) return std::nullopt;
    lo = hi;
  }
  while (hi - lo >= kThresholdTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (advantage(eval, mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MinThresholdResult min_threshold_energy(int n_modes, int grid_per_axis) {
  if (n_modes != 3 && n_modes != 4) throw std::invalid_argument("min_threshold_energy: defined for 3 or 4 modes");
  if (grid_per_axis < 2) throw std::invalid_argument("min_threshold_energy: grid needs at least 2 points");
  const int dims = n_modes - 1;
  std::size_t total = 1;
  for (int k = 0; k < dims; ++k) total *= static_cast<std::size_t>(grid_per_axis);
  const double h = 1.0 / (grid_per_axis - 1);

  auto point_at = [&](std::size_t flat) {
    std::vector<double> taus(dims);
    for (int k = dims - 1; k >= 0; --k) {
      taus[k] = static_cast<double>(flat % grid_per_axis) * h;
      flat /= grid_per_axis;
    }
    return taus;
  };

  std::vector<double> values(total);
  for (std::size_t i = 0; i < total; ++i) values[i] = threshold_objective(n_modes, point_at(i));
  const double best = *std::min_element(values.begin(), values.end());

  MinThresholdResult out;
  std::size_t best_index = total;
  for (std::size_t i = 0; i < total; ++i) {
    if (values[i] <= best + 1e-4) {
      out.coarse_ties.push_back(point_at(i));
      if (best_index == total || values[i] < values[best_index]) best_index = i;
    }
  }

  auto objective = [&](const std::vector<double>& t) { return threshold_objective(n_modes, t); };
  auto [taus, value] = nelder_mead(objective, point_at(best_index), h, 1e-6, 2000);
  if (value <= values[best_index]) {
    out.taus = std::move(taus);
    out.nbar_th = value;
  } else {
    out.taus = point_at(best_index);
    out.nbar_th = values[best_index];
  }
  return out;
}

TauInterval tau_boundaries(int n_modes, double nbar, std::span<const double> prefix) {
  if (n_modes != 3 && n_modes != 4) throw std::invalid_argument("tau_boundaries: closed forms exist for 3 or 4 modes");
  if (static_cast<int>(prefix.size()) >= n_modes - 1) {
    throw std::invalid_argument("tau_boundaries: prefix must leave at least one free transmissivity");
  }
  if (!(nbar > 0.0) || !std::isfinite(nbar)) throw std::invalid_argument("tau_boundaries: nbar must be > 0");
  for (double t : prefix) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("tau_boundaries: prefix tau outside [0, 1]");
  }
  if (!prefix.empty() && !(prefix[0] > 0.0)) {
    throw std::invalid_argument("tau_boundaries: tau1 = 0 decouples the remaining transmissivities");
  }
  if (prefix.size() == 2 && prefix[0] == 1.0 && prefix[1] == 0.0) {
    throw std::invalid_argument("tau_boundaries: (tau1, tau2) = (1, 0) decouples tau3");
  }
  return n_modes == 3 ? three_mode_boundary(nbar, prefix) : four_mode_boundary(nbar, prefix);
}

std::optional<double> break_even_squeezing(int n_modes, std::span<const double> taus) {
  const auto th = threshold_energy(n_modes, taus);
  if (!th) return std::nullopt;
  return optimal_params(n_modes, *th).squeezing;
}

double asymptotic_ratio(int n_modes, std::span<const double> taus, double r) {
  check_modes_taus(n_modes, taus, "asymptotic_ratio");
  if (!(r >= 10.0)) throw std::invalid_argument("asymptotic_ratio: r must be >= 10");
  const double nbar = (n_modes - 1) * std::exp(r) * std::sinh(r);
  const CapacityEvaluator eval(n_modes, taus);
  return mutual_information(eval.channel_at(nbar)) / classical_capacity(n_modes - 1, nbar);
}

std::size_t RegionScan::advantage_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const RegionRecord& r) { return r.advantage; }));
}

RegionScan region_scan(int n_modes, double nbar, int grid, unsigned workers) {
  if (n_modes < 2) throw std::invalid_argument("region_scan: n_modes must be >= 2");
  if (grid < 8) throw std::invalid_argument("region_scan: grid resolution must be >= 8");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw std::invalid_argument("region_scan: nbar must be >= 0");

  const int dims = n_modes - 1;
  std::size_t total = 1;
  for (int k = 0; k < dims; ++k) total *= static_cast<std::size_t>(grid);
  const double h = 1.0 / (grid - 1);
  const double c_cl = classical_capacity(n_modes - 1, nbar);

  RegionScan scan;
  scan.n_modes = n_modes;
  scan.nbar = nbar;
  scan.grid = grid;
  scan.records.resize(total);

  auto fill = [&](std::size_t begin, std::size_t end) {
    std::vector<double> taus(dims);
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t flat = i;
      for (int k = dims - 1; k >= 0; --k) {
        taus[k] = static_cast<double>(flat % grid) * h;
        flat /= grid;
      }
      const CapacityEvaluator eval(n_modes, taus);
      auto& rec = scan.records[i];
      rec.taus = taus;
      rec.delta = eval.capacity(nbar) - c_cl;
      rec.advantage = rec.delta > 0.0;
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  if (workers <= 1) {
    fill(0, total);
    return scan;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (total + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(total, w * chunk);
    const std::size_t end = std::min(total, begin + chunk);
    pool.emplace_back(fill, begin, end);
  }
  for (auto& t : pool) t.join();
  return scan;
}

}  // namespace cvdc
