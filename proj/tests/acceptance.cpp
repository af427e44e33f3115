// Acceptance suite. Prints one PASS/FAIL line per criterion; with a numeric
// argument only that criterion runs. Exit status is nonzero if any selected
// criterion fails.

#include "cvdc/advantage.hpp"
#include "cvdc/cli.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

using namespace cvdc;

namespace {

constexpr auto P = Quadrature::Momentum;
constexpr auto X = Quadrature::Position;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ResourceSpec spec_of(double r, std::vector<double> taus) {
  return {static_cast<int>(taus.size()) + 1, r, std::move(taus)};
}

// 1. Prepared three-mode covariance against the closed form on a 10^3 grid.
Outcome convention_calibration() {
  double worst = 0, worst_lib = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      for (int k = 0; k < 10; ++k) {
        const double r = 2.0 * i / 9, t1 = j / 9.0, t2 = k / 9.0;
        const Matrix got = prepare_resource(spec_of(r, {t1, t2})).covariance();
        worst = std::max(worst, (got - oracle::three_mode_cov(r, t1, t2)).cwiseAbs().maxCoeff());
        worst_lib = std::max(worst_lib, (got - three_mode_reference_cov(r, t1, t2)).cwiseAbs().maxCoeff());
      }
    }
  }
  return {worst <= 1e-12 && worst_lib <= 1e-12,
          fmt("max |sigma - closed form| = %.2e (library reference %.2e), tol 1e-12", worst, worst_lib)};
}

// 2. Generic channel against the factored closed forms.
Outcome closed_form_equivalence() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> rd(0.0, 2.0), td(0.0, 1.0), sd(0.05, 3.0), nd(0.0, 60.0);
  double worst_mi = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double r = rd(rng), t1 = td(rng), t2 = td(rng), s = sd(rng);
    const auto ch = build_channel(spec_of(r, {t1, t2}), EncodingPlan::standard(3, s), {P, X, P});
    const double ref = oracle::mi3(r, s * s, t1, t2);
    worst_mi = std::max(worst_mi, std::abs(mutual_information(ch) - ref) / std::max(1.0, std::abs(ref)));
  }
  double worst_cap = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double nbar = nd(rng), t1 = td(rng), t2 = td(rng);
    const std::vector<double> taus{t1, t2};
    worst_cap = std::max(worst_cap, std::abs(capacity(3, taus, nbar).c_quantum - oracle::cap3(nbar, t1, t2)));
  }
  double worst_fixed = 0;
  const std::vector<double> h3{0.5, 0.5}, h4{0.5, 0.5, 0.5}, q4{1.0 / 3, 0.25, 0.8};
  for (int i = 0; i <= 200; ++i) {
    const double nbar = 0.25 * i;
    worst_fixed = std::max({worst_fixed, std::abs(capacity(3, h3, nbar).c_quantum - oracle::cap3_half(nbar)),
                            std::abs(capacity(4, h4, nbar).c_quantum - oracle::cap4_half(nbar)),
                            std::abs(capacity(4, q4, nbar).c_quantum - oracle::cap4_third_quarter(nbar))});
  }
  return {worst_mi <= 1e-10 && worst_cap <= 1e-10 && worst_fixed <= 1e-10,
          fmt("MI rel err %.2e over 1e4 draws; capacity err %.2e (random tau), %.2e (fixed tau); tol 1e-10",
              worst_mi, worst_cap, worst_fixed)};
}

// 3. Reference checkpoints.
Outcome checkpoints() {
  bool all = true;
  std::string detail;
  for (const auto& c : cli::run_checkpoints()) {
    all = all && c.passed;
    detail += fmt("\n    %s %-32s %.6f (expected %.6f %s %g)", c.passed ? "ok  " : "MISS", c.name.c_str(), c.value,
                  c.expected, c.relative ? "rel" : "+-", c.tolerance);
  }
  return {all, "checkpoint suite" + detail};
}

bool nested(const RegionScan& inner, const RegionScan& outer) {
  for (std::size_t i = 0; i < inner.records.size(); ++i) {
    if (inner.records[i].advantage && !outer.records[i].advantage) return false;
  }
  return inner.advantage_count() < outer.advantage_count();
}

bool has_central_point(const RegionScan& s) {
  for (const auto& r : s.records) {
    if (r.advantage && r.taus[0] >= 0.45 && r.taus[0] <= 0.55) return true;
  }
  return false;
}

// 4. Advantage regions: non-empty, strictly nested, containing the central slice.
Outcome region_reproduction() {
  bool ok = true;
  std::string detail;
  for (const auto& [n, grid, energies] :
       {std::tuple{3, 200, std::vector<double>{7, 10, 15, 20}}, std::tuple{4, 64, std::vector<double>{15, 20, 25}}}) {
    std::vector<RegionScan> scans;
    for (double nbar : energies) scans.push_back(region_scan(n, nbar, grid));
    detail += fmt(" %d-mode counts:", n);
    for (std::size_t i = 0; i < scans.size(); ++i) {
      const auto& s = scans[i];
      detail += fmt(" %zu", s.advantage_count());
      ok = ok && s.advantage_count() > 0 && has_central_point(s);
      if (i > 0) ok = ok && nested(scans[i - 1], s);
    }
    detail += ";";
  }
  return {ok, "non-empty, strictly nested, central point present:" + detail};
}

// 5. Monte Carlo estimate against the closed form.
Outcome monte_carlo() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rd(0.2, 1.5), td(0.05, 0.95), sd(0.3, 2.0);
  int outside = 0;
  double worst_z = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 2 ? 4 : 3;
    std::vector<double> taus(n - 1);
    for (auto& t : taus) t = td(rng);
    const double r = rd(rng), s = sd(rng);
    const auto ch = build_channel(spec_of(r, taus), EncodingPlan::standard(n, s), alternating_pattern(n));
    const double ref = n == 3 ? oracle::mi3(r, s * s, taus[0], taus[1])
                              : oracle::mi4(r, s * s, taus[0], taus[1], taus[2]);
    const auto est = mutual_information_mc(ch, 1000000, 1000 + trial);
    const double z = std::abs(est.estimate - ref) / est.std_error;
    worst_z = std::max(worst_z, z);
    if (z > 3) ++outside;
  }
  return {outside <= 1, fmt("%d of 20 configurations outside 3 standard errors (max |z| = %.2f), allowance 1",
                            outside, worst_z)};
}

double oracle_delta(int n, const std::vector<double>& taus, double nbar) {
  return n == 3 ? oracle::delta3(nbar, taus[0], taus[1]) : oracle::delta4(nbar, taus[0], taus[1], taus[2]);
}

// Threshold energy of the slice with every free transmissivity but the first at 0.
double slice_threshold(int n, std::vector<double> taus) {
  return *oracle::bisect([&](double e) { return oracle_delta(n, taus, e); }, 0.5, 1e4, 1e-10);
}

double min_first_axis_threshold(int n) {
  auto f = [&](double t1) {
    std::vector<double> taus(n - 1, 0.0);
    taus[0] = t1;
    return slice_threshold(n, taus);
  };
  double a = 0.2, b = 0.8;
  const double g = (std::sqrt(5.0) - 1) / 2;
  while (b - a > 1e-9) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return f(0.5 * (a + b));
}

// 6. Closed-form boundaries against numeric roots of the advantage.
Outcome boundary_formulas() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> nd(3.0, 40.0), td(0.05, 0.95);
  const double min3 = min_first_axis_threshold(3), min4 = min_first_axis_threshold(4);
  double worst = 0;
  int empties = 0, disc_mismatch = 0, checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = trial % 2 ? 4 : 3;
    const int prefix_len = std::uniform_int_distribution<int>(0, n - 2)(rng);
    const double nbar = nd(rng);
    std::vector<double> prefix(prefix_len);
    for (auto& t : prefix) t = td(rng);
    const auto iv = tau_boundaries(n, nbar, prefix);

    std::vector<double> taus(n - 1, 0.0);
    std::copy(prefix.begin(), prefix.end(), taus.begin());
    const std::size_t axis = prefix.size();
    auto delta_at = [&](double t) {
      auto x = taus;
      x[axis] = t;
      return oracle_delta(n, x, nbar);
    };

    bool expect_empty;
    if (axis == 0) {
      expect_empty = nbar < (n == 3 ? min3 : min4);
    } else {
      expect_empty = delta_at(0.0) <= 0;
    }
    if (iv.empty != expect_empty) ++disc_mismatch;
    if (iv.empty) {
      ++empties;
      continue;
    }
    ++checked;
    if (axis == 0) {
      const double lo = delta_at(0.0) > 0 ? 0.0 : *oracle::bisect(delta_at, 0.0, 0.5);
      const double hi = delta_at(1.0) > 0 ? 1.0 : *oracle::bisect(delta_at, 0.5, 1.0);
      worst = std::max({worst, std::abs(iv.lo - lo), std::abs(iv.hi - hi)});
    } else {
      const double hi = delta_at(1.0) > 0 ? 1.0 : *oracle::bisect(delta_at, 0.0, 1.0);
      worst = std::max(worst, std::abs(iv.hi - hi));
    }
  }
  return {worst <= 1e-4 && disc_mismatch == 0,
          fmt("50 slices (%d non-empty, %d empty): max |boundary - root| = %.2e, tol 1e-4; "
              "empty-region mismatches %d (minimum thresholds %.4f / %.4f)",
              checked, empties, worst, disc_mismatch, min3, min4)};
}

// 7. Symplectic and physicality property suites.
Outcome invariants() {
  std::mt19937_64 rng(7);
  int failures = 0;
  std::uniform_int_distribution<int> nd(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = nd(rng);
    const auto s = gen::random_gaussian_unitary(rng, n, 8);
    const Matrix j = symplectic_form(n);
    const bool symplectic = (s.matrix() * j * s.matrix().transpose() - j).cwiseAbs().maxCoeff() <= 1e-10;
    const bool unimodular = std::abs(s.matrix().determinant() - 1) <= 1e-9;
    const auto in = gen::random_state(rng, n);
    const bool physical = is_physical(in) && is_physical(apply_symplectic(in, s));
    if (!(symplectic && unimodular && physical)) ++failures;
  }
  std::uniform_real_distribution<double> rd(0.0, 2.0), td(0.0, 1.0);
  std::uniform_int_distribution<int> md(2, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = md(rng);
    std::vector<double> taus(n - 1);
    for (auto& t : taus) t = td(rng);
    const auto state = prepare_resource(spec_of(rd(rng), taus));
    const Vector nu = symplectic_eigenvalues(state.covariance());
    const bool pure = (nu.array() - 0.5).abs().maxCoeff() <= 1e-9;
    const bool zero_mean = state.displacement().isZero(0.0);
    if (!(pure && zero_mean && is_physical(state))) ++failures;
  }
  return {failures == 0, fmt("%d failures in 2000 randomized cases (phase space 1000, resource 1000)", failures)};
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"convention calibration", 5, convention_calibration},
      {"closed-form equivalence", 10, closed_form_equivalence},
      {"reference checkpoints", 60, checkpoints},
      {"region reproduction", 120, region_reproduction},
      {"Monte Carlo oracle", 120, monte_carlo},
      {"boundary formulas", 0, boundary_formulas},
      {"symplectic and physicality invariants", 0, invariants},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "usage: %s [criterion 1-%zu]\n", argv[0], criteria.size());
    return 2;
  }

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    const auto out = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && (c.budget_s <= 0 || secs <= c.budget_s);
    all = all && pass;
    const std::string timing = c.budget_s > 0 ? fmt("%.1f s, budget %.0f s", secs, c.budget_s) : fmt("%.1f s", secs);
    std::printf("[%s] criterion %zu: %s (%s): %s\n", pass ? "PASS" : "FAIL", i + 1, c.name, timing.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
