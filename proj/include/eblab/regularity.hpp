#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eblab/fixtures.hpp"
#include "eblab/manifolds.hpp"
#include "eblab/problems.hpp"

namespace eblab {

/// Samples with dist(x, S) at or below this are left out of every ratio.
inline constexpr double kMinRatioDistance = 1e-9;

struct Stratification {
  double on_manifold = 0.4;
  double off_manifold = 0.4;
  double mixed = 0.2;
};

struct SamplePlan {
  Vector center;
  std::vector<double> radii;  // strictly decreasing
  int per_radius_count = 100;
  std::uint64_t seed = 0;
  Stratification strata;

  void validate() const;
};

enum class SampleKind { kOnManifold, kOffManifold, kMixed };

struct Sample {
  std::size_t id = 0;
  std::size_t radius_index = 0;
  double radius = 0.0;
  SampleKind kind = SampleKind::kMixed;
  bool on_manifold = false;
  Vector x;
};

/// Deterministic in plan.seed. On-manifold samples are tangent draws at the
/// center corrected back onto M; off-manifold samples add a normal offset of
/// length in [0.1 r, r]; mixed samples are uniform in the ball.
std::vector<Sample> sample_points(const ManifoldChart& M, const SamplePlan& plan);

struct LabSettings {
  double step = 1.0;  // t in the proximal residual
  double probe_radius = 1e-4;
  int probe_count = 256;
  double activity_tol = kActivityTol;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Finite-identification run.
  std::optional<Vector> solver_start;
  double solver_step = 0.5;
  double solver_tol = 1e-10;
  int solver_max_iter = 1000;
};

/// Everything measured at one sample. Optional fields are absent where the
/// quantity does not apply (e.g. Riemannian gradient off the manifold).
struct LedgerRow {
  Sample sample;
  double f = 0.0;
  double dist_s = 0.0;
  double dist_subdiff = 0.0;
  std::optional<double> riem_grad_norm;
  std::optional<double> u_grad_norm;
  std::optional<double> u_grad_riem_gap;  // ||g_U - grad_M f||
  std::optional<double> prox_residual;
  std::optional<double> slope_est;
  std::optional<double> dist_m;  // ||x - P_M(x)|| off the manifold
  std::optional<double> f_proj;  // f(P_M(x))
};

struct Ledger {
  Vector xbar;
  std::vector<double> radii;
  std::vector<LedgerRow> rows;
};

Ledger evaluate_samples(const Fixture& fixture, const Vector& xbar, const SamplePlan& plan,
                        const LabSettings& settings);

/// Minimum of a per-sample ratio; value is nullopt when no sample qualifies
/// (VACUOUS).
struct Estimate {
  std::optional<double> value;
  std::optional<std::size_t> witness;
  std::vector<std::optional<double>> per_radius;

  bool vacuous() const { return !value.has_value(); }
};

Estimate estimate_eb_ambient(const Ledger& ledger);
Estimate estimate_eb_manifold(const Ledger& ledger);
Estimate estimate_eb_proximal(const Ledger& ledger);
Estimate sharpness_margin(const Ledger& ledger);
Estimate linear_growth_delta(const Ledger& ledger);

/// Max over random unit directions of the positive part of
/// (f(x) - f(x + r d)) / r.
double slope_sample(const CompositeProblem& p, const Vector& x, double probe_radius,
                    int probe_count, std::uint64_t seed = 0);

/// Same for f restricted to M: probes are tangent directions retracted onto M.
double restricted_slope_sample(const CompositeProblem& p, const ManifoldChart& M, const Vector& x,
                               double probe_radius, int probe_count, std::uint64_t seed = 0);

enum class Verdict { kPass, kFail, kSkipped };
std::string_view verdict_name(Verdict v);

struct ClaimResult {
  std::string id;
  Verdict verdict = Verdict::kSkipped;
  std::optional<std::size_t> witness;
  std::string value;
  std::string note;
};

struct RegularityReport {
  std::string fixture;
  double step = 1.0;
  Estimate mu_ambient;
  Estimate mu_manifold;
  std::optional<Estimate> mu_proximal;  // absent without a prox
  Estimate eta;
  Estimate delta;
  bool strict_complementarity = false;
  std::vector<ClaimResult> claims;
  Ledger ledger;
  std::optional<SolveTrace> trace;

  bool any_failed() const;
  const ClaimResult& claim(const std::string& id) const;
};

/// Claim ids switched off by configuration; they report SKIPPED.
using ClaimToggles = std::map<std::string, bool>;

RegularityReport check_equivalences(const Fixture& fixture, const Vector& xbar,
                                    const SamplePlan& plan, const LabSettings& settings,
                                    const ClaimToggles& toggles = {});

/// Columns: sample_id, radius, on_manifold, x_1..x_n, f, dist_S, dist_subdiff,
/// riem_grad_norm, prox_residual, slope_est. Missing values are empty cells.
void write_ledger_csv(std::ostream& out, const Ledger& ledger);

/// Columns: claim_id, verdict, witness_sample_id, value.
void write_summary_csv(std::ostream& out, const RegularityReport& report);

/// Columns: radius, mu_ambient, mu_manifold, mu_proximal, eta, delta.
void write_estimates_csv(std::ostream& out, const RegularityReport& report);

}  // namespace eblab
