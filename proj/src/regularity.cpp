#include "eblab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "eblab/format.hpp"
#include "eblab/solvers.hpp"
#include "eblab/subdiff_geometry.hpp"

namespace eblab {

void SamplePlan::validate() const {
  if (radii.empty()) throw LabError(ErrorCode::kInvalidArgument, "sample plan has no radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw LabError(ErrorCode::kInvalidArgument, "sample radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) {
      throw LabError(ErrorCode::kInvalidArgument, "sample radii must be strictly decreasing");
    }
  }
  if (per_radius_count < 1) throw LabError(ErrorCode::kInvalidArgument, "per_radius_count must be positive");
  const Stratification& s = strata;
  if (s.on_manifold < 0 || s.off_manifold < 0 || s.mixed < 0 ||
      std::abs(s.on_manifold + s.off_manifold + s.mixed - 1.0) > 1e-12) {
    throw LabError(ErrorCode::kInvalidArgument, "stratification fractions must be nonnegative and sum to 1");
  }
}

namespace {

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Vector unit_direction(std::mt19937_64& rng, Eigen::Index k) {
  std::normal_distribution<double> normal;
  Vector d(k);
  do {
    for (Eigen::Index i = 0; i < k; ++i) d[i] = normal(rng);
  } while (d.norm() < 1e-12);
  return d.normalized();
}

// Uniform point in the k-ball of the given radius, returned as coefficients.
Vector ball_coefficients(std::mt19937_64& rng, Eigen::Index k, double radius) {
  if (k == 0) return Vector::Zero(0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double magnitude = radius * std::pow(uniform(rng), 1.0 / static_cast<double>(k));
  return magnitude * unit_direction(rng, k);
}

Sample draw(const ManifoldChart& M, const TangentBases& at_center, const Vector& center,
            SampleKind kind, double radius, std::mt19937_64& rng) {
  Sample s;
  s.kind = kind;
  s.radius = radius;
  switch (kind) {
    case SampleKind::kOnManifold: {
      const Vector u = at_center.tangent * ball_coefficients(rng, at_center.tangent.cols(), radius);
      s.x = center + u + v_correction(M, center, u);
      s.on_manifold = true;
      break;
    }
    case SampleKind::kOffManifold: {
      std::uniform_real_distribution<double> offset(0.1 * radius, radius);
      const double normal_len = offset(rng);
      const double tangent_radius = std::sqrt(std::max(0.0, radius * radius - normal_len * normal_len));
      const Vector u = at_center.tangent * ball_coefficients(rng, at_center.tangent.cols(), tangent_radius);
      const Vector base = center + u + v_correction(M, center, u);
      const DenseMatrix normal = tangent_bases(M, base).normal;
      s.x = base + normal_len * (normal * unit_direction(rng, normal.cols()));
      s.on_manifold = false;
      break;
    }
    case SampleKind::kMixed: {
      s.x = center + ball_coefficients(rng, center.size(), radius);
      s.on_manifold = M.contains(s.x, 0.0);
      break;
    }
  }
  return s;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&](unsigned w) {
    for (std::size_t i = w; i < count; i += threads) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<Sample> sample_points(const ManifoldChart& M, const SamplePlan& plan) {
  plan.validate();
  require_same_dim(plan.center, M.dim(), "sample_points");
  if (plan.radii.front() > M.radius()) {
    throw LabError(ErrorCode::kInvalidArgument, "largest sample radius exceeds the chart radius");
  }
  const TangentBases at_center = tangent_bases(M, plan.center);
  const auto count = static_cast<std::size_t>(plan.per_radius_count);
  auto share = [count](double fraction) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(count)));
  };
  std::size_t n_on = std::min(count, share(plan.strata.on_manifold));
  std::size_t n_off = std::min(count - n_on, share(plan.strata.off_manifold));
  const std::size_t n_mixed = count - n_on - n_off;
  if (at_center.normal.cols() == 0) n_off = 0;  // M fills the space

  std::vector<Sample> samples;
  for (std::size_t r = 0; r < plan.radii.size(); ++r) {
    const double radius = plan.radii[r];
    auto emit = [&](SampleKind kind, std::size_t how_many, std::uint64_t stream) {
      for (std::size_t i = 0; i < how_many; ++i) {
        auto rng = sample_rng(plan.seed, stream + 8 * r, i);
        Sample s = draw(M, at_center, plan.center, kind, radius, rng);
        s.id = samples.size();
        s.radius_index = r;
        samples.push_back(std::move(s));
      }
    };
    emit(SampleKind::kOnManifold, n_on, 1);
    emit(SampleKind::kOffManifold, n_off, 2);
    emit(SampleKind::kMixed, n_mixed, 3);
  }
  return samples;
}

double slope_sample(const CompositeProblem& p, const Vector& x, double probe_radius, int probe_count,
                    std::uint64_t seed) {
  if (!(probe_radius > 0.0) || probe_radius > 1e-3) {
    throw LabError(ErrorCode::kInvalidArgument, "slope probe radius must lie in (0, 1e-3]");
  }
  const double fx = eval_f(p, x);
  double best = 0.0;
  auto rng = sample_rng(seed, 0x51ee, 0);
  for (int i = 0; i < probe_count; ++i) {
    const Vector d = unit_direction(rng, x.size());
    best = std::max(best, (fx - eval_f(p, x + probe_radius * d)) / probe_radius);
  }
  return best;
}

double restricted_slope_sample(const CompositeProblem& p, const ManifoldChart& M, const Vector& x,
                               double probe_radius, int probe_count, std::uint64_t seed) {
  if (!(probe_radius > 0.0) || probe_radius > 1e-3) {
    throw LabError(ErrorCode::kInvalidArgument, "slope probe radius must lie in (0, 1e-3]");
  }
  const DenseMatrix T = tangent_bases(M, x).tangent;
  if (T.cols() == 0) return 0.0;
  const double fx = eval_f(p, x);
  double best = 0.0;
  auto rng = sample_rng(seed, 0x51ef, 0);
  for (int i = 0; i < probe_count; ++i) {
    const Vector y = project_to_manifold(M, x + probe_radius * (T * unit_direction(rng, T.cols())));
    const double d = (y - x).norm();
    if (d > 0.0) best = std::max(best, (fx - eval_f(p, y)) / d);
  }
  return best;
}

Ledger evaluate_samples(const Fixture& fixture, const Vector& xbar, const SamplePlan& plan,
                        const LabSettings& settings) {
  const CompositeProblem& p = fixture.problem;
  const ManifoldChart& M = fixture.chart;
  Ledger ledger{xbar, plan.radii, {}};
  std::vector<Sample> samples = sample_points(M, plan);
  ledger.rows.resize(samples.size());
  parallel_for(samples.size(), settings.threads, [&](std::size_t i) {
    LedgerRow row;
    row.sample = std::move(samples[i]);
    const Vector& x = row.sample.x;
    const std::uint64_t probe_seed = plan.seed ^ (0x9e3779b97f4a7c15ULL * (row.sample.id + 1));
    row.f = eval_f(p, x);
    row.dist_s = (x - xbar).norm();
    const SubdiffSet S = subdiff_at(p, x, settings.activity_tol);
    row.dist_subdiff = dist_zero(S).distance;
    if (p.has_prox()) row.prox_residual = (x - prox_step(p, x, settings.step)).norm();
    if (row.sample.on_manifold) {
      const Vector riem = riemannian_grad(M, p, x);
      const Vector gu = aff_project_zero(S);
      row.riem_grad_norm = riem.norm();
      row.u_grad_norm = gu.norm();
      row.u_grad_riem_gap = (gu - riem).norm();
      row.slope_est = restricted_slope_sample(p, M, x, settings.probe_radius, settings.probe_count,
                                              probe_seed);
    } else {
      const Vector y = project_to_manifold(M, x);
      row.dist_m = (x - y).norm();
      row.f_proj = eval_f(p, y);
      // The slope is a local quantity; probes must not reach the kink set.
      if (row.sample.kind == SampleKind::kMixed && *row.dist_m >= 10.0 * settings.probe_radius) {
        row.slope_est = slope_sample(p, x, settings.probe_radius, settings.probe_count, probe_seed);
      }
    }
    ledger.rows[i] = std::move(row);
  });
  return ledger;
}

namespace {

template <typename Ratio>
Estimate min_over(const Ledger& ledger, Ratio ratio) {
  Estimate e;
  e.per_radius.assign(ledger.radii.size(), std::nullopt);
  for (const auto& row : ledger.rows) {
    const std::optional<double> r = ratio(row);
    if (!r) continue;
    auto& slot = e.per_radius[row.sample.radius_index];
    if (!slot || *r < *slot) slot = *r;
    if (!e.value || *r < *e.value) {
      e.value = *r;
      e.witness = row.sample.id;
    }
  }
  return e;
}

}  // namespace

Estimate estimate_eb_ambient(const Ledger& ledger) {
  return min_over(ledger, [](const LedgerRow& row) -> std::optional<double> {
    if (row.dist_s <= kMinRatioDistance) return std::nullopt;
    return row.dist_subdiff / row.dist_s;
  });
}

Estimate estimate_eb_manifold(const Ledger& ledger) {
  return min_over(ledger, [](const LedgerRow& row) -> std::optional<double> {
    if (!row.sample.on_manifold || row.dist_s <= kMinRatioDistance) return std::nullopt;
    return *row.riem_grad_norm / row.dist_s;
  });
}

Estimate estimate_eb_proximal(const Ledger& ledger) {
  for (const auto& row : ledger.rows) {
    if (!row.prox_residual) throw LabError(ErrorCode::kProxUnavailable, "ledger has no proximal residuals");
  }
  return min_over(ledger, [](const LedgerRow& row) -> std::optional<double> {
    if (row.dist_s <= kMinRatioDistance) return std::nullopt;
    return *row.prox_residual / row.dist_s;
  });
}

Estimate sharpness_margin(const Ledger& ledger) {
  return min_over(ledger, [](const LedgerRow& row) -> std::optional<double> {
    if (row.sample.on_manifold) return std::nullopt;
    return row.dist_subdiff;
  });
}

Estimate linear_growth_delta(const Ledger& ledger) {
  return min_over(ledger, [](const LedgerRow& row) -> std::optional<double> {
    if (row.sample.on_manifold || !row.dist_m || *row.dist_m <= kMinRatioDistance) return std::nullopt;
    return (row.f - *row.f_proj) / *row.dist_m;
  });
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kSkipped: return "SKIPPED";
  }
  return "?";
}

bool RegularityReport::any_failed() const {
  return std::any_of(claims.begin(), claims.end(),
                     [](const ClaimResult& c) { return c.verdict == Verdict::kFail; });
}

const ClaimResult& RegularityReport::claim(const std::string& id) const {
  for (const auto& c : claims)
    if (c.id == id) return c;
  throw LabError(ErrorCode::kInvalidArgument, "no claim '" + id + "' in report");
}

namespace {

std::string value_text(const Estimate& e) { return e.value ? format_real(*e.value) : "vacuous"; }

// Positive, or vacuously true.
bool holds(const Estimate& e) { return !e.value || *e.value > 0.0; }

Verdict pass_if(bool ok) { return ok ? Verdict::kPass : Verdict::kFail; }

struct WorstCase {
  double value = 0.0;
  std::optional<std::size_t> witness;
  std::size_t count = 0;

  void offer(double v, std::size_t id) {
    ++count;
    if (!witness || v > value) {
      value = v;
      witness = id;
    }
  }
};

class ClaimBook {
 public:
  ClaimBook(std::vector<ClaimResult>& out, const ClaimToggles& toggles)
      : out_(out), toggles_(toggles) {}

  bool enabled(const std::string& id) const {
    const auto it = toggles_.find(id);
    return it == toggles_.end() || it->second;
  }

  // Adds the claim unless it is switched off, in which case it is SKIPPED.
  void add(ClaimResult c) {
    if (!enabled(c.id)) {
      c.verdict = Verdict::kSkipped;
      c.note = "disabled by configuration";
    }
    out_.push_back(std::move(c));
  }

 private:
  std::vector<ClaimResult>& out_;
  const ClaimToggles& toggles_;
};

ClaimResult gated(std::string id, bool hypothesis, Verdict verdict, std::string value,
                  std::optional<std::size_t> witness, std::string note = {}) {
  ClaimResult c{std::move(id), verdict, witness, std::move(value), std::move(note)};
  if (!hypothesis) {
    c.verdict = Verdict::kSkipped;
    c.note = "hypothesis unmet: 0 is not in ri of the subdifferential at the reference point";
  }
  return c;
}

// Subgradient inequality f(y) >= f(x) + <s, y - x> - rho/2 ||y - x||^2 over
// consecutive ledger pairs and every extreme subgradient at x. Returns the
// smallest slack.
WorstCase subgradient_inequality(const CompositeProblem& p, const Ledger& ledger, double rho,
                                 double activity_tol) {
  WorstCase worst;  // tracks the most negative slack as a positive "violation"
  const auto& rows = ledger.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LedgerRow& a = rows[i];
    const LedgerRow& b = rows[(i + 1) % rows.size()];
    const Vector diff = b.sample.x - a.sample.x;
    for (const Vector& s : subdiff_at(p, a.sample.x, activity_tol).extreme_points()) {
      const double slack = b.f - a.f - s.dot(diff) + 0.5 * rho * diff.squaredNorm();
      worst.offer(-slack, a.sample.id);
    }
  }
  return worst;
}

}  // namespace

RegularityReport check_equivalences(const Fixture& fixture, const Vector& xbar,
                                    const SamplePlan& plan, const LabSettings& settings,
                                    const ClaimToggles& toggles) {
  const CompositeProblem& p = fixture.problem;
  RegularityReport report;
  report.fixture = fixture.name;
  report.step = settings.step;
  report.ledger = evaluate_samples(fixture, xbar, plan, settings);
  const Ledger& ledger = report.ledger;
  report.mu_ambient = estimate_eb_ambient(ledger);
  report.mu_manifold = estimate_eb_manifold(ledger);
  if (p.has_prox()) report.mu_proximal = estimate_eb_proximal(ledger);
  report.eta = sharpness_margin(ledger);
  report.delta = linear_growth_delta(ledger);

  ClaimBook book(report.claims, toggles);
  const SubdiffSet at_ref = subdiff_at(p, xbar, settings.activity_tol);

  const double ref_stationarity = dist_zero(at_ref).distance;
  book.add({"reference-stationarity", pass_if(ref_stationarity <= 1e-12), std::nullopt,
            format_real(ref_stationarity), "dist(0, df(xbar))"});

  const bool sc = ri_contains_zero(at_ref);
  report.strict_complementarity = sc;
  book.add({"strict-complementarity", pass_if(sc == fixture.strict_complementarity), std::nullopt,
            sc ? "true" : "false",
            std::string("fixture declares ") + (fixture.strict_complementarity ? "true" : "false")});

  const Estimate& mu_a = report.mu_ambient;
  const Estimate& mu_m = report.mu_manifold;
  book.add(gated("eb-ambient", sc, pass_if(holds(mu_a)), value_text(mu_a), mu_a.witness));
  book.add(gated("eb-manifold", sc, pass_if(holds(mu_m)), value_text(mu_m), mu_m.witness));
  book.add(gated("eb-equivalence", sc, pass_if(holds(mu_a) == holds(mu_m)),
                 holds(mu_a) && holds(mu_m) ? "both hold" : "mismatch or both fail", std::nullopt));
  book.add(gated("sharpness", sc, pass_if(holds(report.eta)), value_text(report.eta),
                 report.eta.witness));
  book.add(gated("linear-growth", sc, pass_if(holds(report.delta)), value_text(report.delta),
                 report.delta.witness));

  WorstCase ugrad_dist, ugrad_riem, riem_dist, slope_mixed, slope_manifold, prox_ineq;
  const double t = settings.step;
  for (const auto& row : ledger.rows) {
    const std::size_t id = row.sample.id;
    if (row.sample.on_manifold) {
      ugrad_dist.offer(std::abs(*row.u_grad_norm - row.dist_subdiff), id);
      ugrad_riem.offer(*row.u_grad_riem_gap, id);
      riem_dist.offer(std::abs(*row.riem_grad_norm - row.dist_subdiff), id);
      if (row.slope_est) {
        slope_manifold.offer(
            std::abs(*row.slope_est - *row.riem_grad_norm) / std::max(1.0, *row.riem_grad_norm), id);
      }
    } else if (row.slope_est) {
      slope_mixed.offer(std::abs(*row.slope_est - row.dist_subdiff) / row.dist_subdiff, id);
    }
    if (row.prox_residual) prox_ineq.offer(*row.prox_residual - t * row.dist_subdiff, id);
  }
  auto count_note = [](const WorstCase& w) { return std::to_string(w.count) + " samples"; };
  auto within = [](const WorstCase& w, double tol) { return w.count > 0 && w.value <= tol; };

  book.add(gated("u-gradient-distance", sc, pass_if(within(ugrad_dist, 1e-8)),
                 format_real(ugrad_dist.value), ugrad_dist.witness, count_note(ugrad_dist)));
  book.add(gated("u-gradient-riemannian", sc, pass_if(within(ugrad_riem, fixture.identity_tol)),
                 format_real(ugrad_riem.value), ugrad_riem.witness, count_note(ugrad_riem)));
  book.add(gated("riemannian-distance", sc, pass_if(within(riem_dist, fixture.identity_tol)),
                 format_real(riem_dist.value), riem_dist.witness, count_note(riem_dist)));

  book.add({"slope-consistency", pass_if(within(slope_mixed, 0.05)), slope_mixed.witness,
            format_real(slope_mixed.value), count_note(slope_mixed) + ", max relative error"});
  book.add({"slope-restriction", pass_if(within(slope_manifold, 0.05)), slope_manifold.witness,
            format_real(slope_manifold.value), count_note(slope_manifold)});

  {
    const double rho = fixture.convex ? 0.0 : p.smooth.lipschitz;
    const WorstCase w = subgradient_inequality(p, ledger, rho, settings.activity_tol);
    book.add({fixture.convex ? "subgradient-inequality" : "prox-regularity",
              pass_if(w.value <= 1e-10), w.witness, format_real(-w.value), "smallest slack"});
  }

  {
    const Vector g = at_ref.relative_center();
    ClaimResult c{"u-lagrangian-at0", Verdict::kFail, std::nullopt, "", "|L(0;g) - f(xbar)|"};
    if (book.enabled(c.id)) {
      const auto lag = u_lagrangian_eval(p, xbar, g, Vector::Zero(p.dim), fixture.u_lagrangian_ball);
      const double gap = std::abs(lag.value - eval_f(p, xbar));
      c.verdict = pass_if(gap <= 1e-10);
      c.value = format_real(gap);
    }
    book.add(std::move(c));
  }

  const std::string no_prox = "no proximal map for a max-type nonsmooth part";
  if (report.mu_proximal) {
    const Estimate& mu_p = *report.mu_proximal;
    book.add({"eb-proximal", pass_if(holds(mu_p)), mu_p.witness, value_text(mu_p), ""});
    book.add({"proximal-inequality", pass_if(prox_ineq.count > 0 && prox_ineq.value <= 1e-10),
              prox_ineq.witness, format_real(prox_ineq.value),
              count_note(prox_ineq) + ", max of ||x - xhat|| - t dist(0, df)"});
    if (mu_a.value && *mu_a.value > 0.0 && mu_p.value) {
      const double L = p.smooth.lipschitz;
      const double lower = 1.0 / (1.0 + (1.0 + t * L) / *mu_a.value) - 0.05;
      book.add({"proximal-chain-lower", pass_if(*mu_p.value >= lower), mu_p.witness,
                format_real(*mu_p.value), "bound " + format_real(lower)});
      book.add({"proximal-chain-upper", pass_if(*mu_p.value <= t * *mu_a.value + 1e-10), mu_p.witness,
                format_real(*mu_p.value), "bound " + format_real(t * *mu_a.value)});
    } else {
      book.add({"proximal-chain-lower", Verdict::kSkipped, std::nullopt, "", "ambient EB constant not positive"});
      book.add({"proximal-chain-upper", Verdict::kSkipped, std::nullopt, "", "ambient EB constant not positive"});
    }
    book.add(gated("eb-proximal-manifold", sc, pass_if(holds(mu_p) == holds(mu_m)),
                   holds(mu_p) && holds(mu_m) ? "both hold" : "mismatch or both fail", std::nullopt));

    ClaimResult ident{"finite-identification", Verdict::kFail, std::nullopt, "", ""};
    if (book.enabled(ident.id)) {
      const Vector start = settings.solver_start.value_or(fixture.start);
      report.trace = prox_gradient_solve(p, start, settings.solver_step, settings.solver_tol,
                                         settings.solver_max_iter);
      const Identification id = identification_index(*report.trace, fixture.chart);
      ident.value = id.index ? std::to_string(*id.index) : "not-identified";
      ident.note = std::to_string(report.trace->size() - 1) + " iterations";
      ident = gated(ident.id, sc, pass_if(id.index.has_value()), ident.value, std::nullopt, ident.note);
    }
    book.add(std::move(ident));
  } else {
    for (const char* id : {"eb-proximal", "proximal-inequality", "proximal-chain-lower",
                           "proximal-chain-upper", "eb-proximal-manifold", "finite-identification"}) {
      book.add({id, Verdict::kSkipped, std::nullopt, "", no_prox});
    }
  }
  return report;
}

void write_ledger_csv(std::ostream& out, const Ledger& ledger) {
  const Eigen::Index n = ledger.xbar.size();
  out << "sample_id,radius,on_manifold";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",f,dist_S,dist_subdiff,riem_grad_norm,prox_residual,slope_est\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  for (const auto& row : ledger.rows) {
    out << row.sample.id << ',' << format_real(row.sample.radius) << ','
        << (row.sample.on_manifold ? 1 : 0);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_real(row.sample.x[i]);
    out << ',' << format_real(row.f) << ',' << format_real(row.dist_s) << ','
        << format_real(row.dist_subdiff) << ',' << opt(row.riem_grad_norm) << ','
        << opt(row.prox_residual) << ',' << opt(row.slope_est) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const RegularityReport& report) {
  out << "claim_id,verdict,witness_sample_id,value\n";
  for (const auto& c : report.claims) {
    out << c.id << ',' << verdict_name(c.verdict) << ','
        << (c.witness ? std::to_string(*c.witness) : std::string()) << ',' << c.value << '\n';
  }
}

void write_estimates_csv(std::ostream& out, const RegularityReport& report) {
  out << "radius,mu_ambient,mu_manifold,mu_proximal,eta,delta\n";
  auto at = [](const Estimate& e, std::size_t r) {
    return r < e.per_radius.size() && e.per_radius[r] ? format_real(*e.per_radius[r]) : std::string();
  };
  for (std::size_t r = 0; r < report.ledger.radii.size(); ++r) {
    out << format_real(report.ledger.radii[r]) << ',' << at(report.mu_ambient, r) << ','
        << at(report.mu_manifold, r) << ','
        << (report.mu_proximal ? at(*report.mu_proximal, r) : std::string()) << ','
        << at(report.eta, r) << ',' << at(report.delta, r) << '\n';
  }
}

}  // namespace eblab
