// Acceptance gate: one PASS/FAIL line per criterion, every tolerance pinned
// below. Exit status is 0 iff all criteria pass.
//
// Usage: acceptance [path-to-dikin-qcqp]   (the CLI is used by criterion 8)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dikin/approx.hpp"
#include "dikin/barrier.hpp"
#include "dikin/center.hpp"
#include "dikin/cli.hpp"
#include "dikin/dikin.hpp"
#include "dikin/generate.hpp"
#include "dikin/oracle.hpp"
#include "dikin/rng.hpp"
#include "dikin/trs.hpp"
#include "support.hpp"

using namespace dikin;
namespace t = dikin::testing;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kCenterTol = 1e-8;
constexpr double kHessianTol = 1e-12;
constexpr double kInnerSlackTol = 1e-8;
constexpr double kOuterRadiusTol = 1e-6;
constexpr double kWitnessTol = 1e-6;
constexpr double kExample1Seconds = 1.0;
constexpr double kDikinNormSlack = 1e-6;
constexpr double kSuiteSeconds = 300.0;
constexpr double kTaylorRel = 1e-10;
constexpr double kDecompositionRel = 1e-9;
constexpr double kInequalitySlack = 1e-6;
constexpr double kCenterDecrement = 1e-10;
constexpr double kInnerMinSlack = -1e-8;
constexpr double kTrsRel = 1e-6;
constexpr double kRatioSlack = 5e-3;
constexpr double kEpsilon = 0.05;
constexpr double kSingleConstraintRatio = 1e-3;
constexpr double kFiniteDifferenceRel = 1e-5;
constexpr double kFiniteDifferenceStep = 1e-6;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.pass) ++failures;
  std::printf("[%s] AC%d %s | %s | %.2f s\n", out.pass ? "PASS" : "FAIL", id,
              name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

CenterResult center_of(const ProblemInstance& p) {
  return analytic_center(p.feasible_set, interior_start(p, 1));
}

// Shared by criteria 2 and 4.
struct SuiteEntry {
  ProblemInstance problem;
  CenterResult center;
};

std::vector<SuiteEntry>& suite() {
  static std::vector<SuiteEntry> s = [] {
    std::vector<SuiteEntry> out;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      ProblemInstance p = generate_instance(suite_options(seed));
      CenterResult cr = center_of(p);
      out.push_back({std::move(p), std::move(cr)});
    }
    return out;
  }();
  return s;
}

Outcome example1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Intersection f = example1_set();
  const CenterResult cr = analytic_center(f, find_interior_point(f, 1));
  OuterOptions o;
  o.samples = 1000;
  o.seed = 42;
  const ContainmentReport rep = containment_report(f, cr, o);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const double sqrt2 = std::sqrt(2.0);
  const bool ok = std::abs(cr.center(0)) <= kCenterTol &&
                  std::abs(cr.hessian_at_center(0, 0) - 2.0) <= kHessianTol &&
                  rep.inner.ok &&
                  std::abs(rep.inner.min_slacks(0) - 0.5) <= kInnerSlackTol &&
                  std::abs(rep.empirical_outer_radius - sqrt2) <= kOuterRadiusTol &&
                  std::abs(std::abs(rep.witness_point(0)) - 1.0) <= kWitnessTol &&
                  rep.old_bound_violated && rep.empirical_outer_radius > 1.0 &&
                  secs < kExample1Seconds;
  std::ostringstream d;
  d.precision(17);
  d << "center=" << cr.center(0) << " hess=" << cr.hessian_at_center(0, 0)
    << " inner_min_slack=" << rep.inner.min_slacks(0)
    << " rho_hat=" << rep.empirical_outer_radius
    << " witness=" << rep.witness_point(0)
    << " old_bound_violated=" << (rep.old_bound_violated ? "true" : "false");
  d.precision(3);
  d << " runtime=" << secs << "s (limit " << kExample1Seconds << "s)";
  return {ok, d.str()};
}

Outcome outer_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  long long points = 0, violations = 0;
  double worst = 0.0;
  int bad = 0;
  for (std::size_t k = 0; k < suite().size(); ++k) {
    const auto& e = suite()[k];
    const auto& set = e.problem.feasible_set;
    const auto m = static_cast<double>(set.size());
    OuterOptions o;
    o.samples = 2000;
    o.seed = k + 1;
    const DikinEllipsoid unit = dikin_at_center(set, e.center, 1.0);
    const OuterEstimate est = empirical_outer_radius(set, unit, o);
    // Independent recount on fresh samples with the norm computed here.
    long long own = 0;
    const MatrixXd& h = unit.metric.matrix();
    for (const auto& x : sample_feasible(set, e.center.center, 500, 1000 + k)) {
      const VectorXd d = x - e.center.center;
      if (d.dot(h * d) > m * m + m + kDikinNormSlack) ++own;
      ++points;
    }
    points += est.points_checked;
    violations += est.bound_violations + own;
    const double r2 = est.rho_hat * est.rho_hat;
    if (r2 > m * m + m + kDikinNormSlack) ++bad;
    worst = std::max(worst, r2 / (m * m + m));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << suite().size() << " instances, " << points << " points, " << violations
    << " violations, " << bad << " instances over bound; max rho_hat^2/(m^2+m)="
    << fmt("%.6f", worst) << " (slack " << kDikinNormSlack << "); runtime "
    << fmt("%.1f", secs) << "s (limit " << kSuiteSeconds << "s)";
  return {violations == 0 && bad == 0 && secs < kSuiteSeconds, d.str()};
}

Outcome identities() {
  double worst_taylor = 0.0, worst_dec = 0.0, worst_s1 = -1e300, worst_s2 = -1e300;
  double worst_decrement = 0.0;
  long long points = 0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ProblemInstance p = generate_instance(suite_options(seed));
    const auto& set = p.feasible_set;
    const auto m = static_cast<double>(set.size());
    const CenterResult cr = center_of(p);
    worst_decrement = std::max(worst_decrement, cr.newton_decrement);
    if (cr.newton_decrement > kCenterDecrement) ok = false;
    const VectorXd& c = cr.center;
    Rng rng(seed);
    const auto feasible = sample_feasible(set, c, 100, seed);
    for (int k = 0; k < 100; ++k) {
      // Identities hold for arbitrary x; the inequalities need x feasible.
      const VectorXd x = c + rng.uniform(0.1, 3.0) * rng.normal_vector(set.dim());
      const VectorXd r = taylor_identity_residual(set, c, x);
      const VectorXd s = taylor_identity_scale(set, c, x);
      worst_taylor = std::max(worst_taylor, (r.array() / s.array()).abs().maxCoeff());
      for (const VectorXd* y : {&x, &feasible[static_cast<std::size_t>(k)]}) {
        const auto pq = proof_quantities(set, c, *y);
        const double rel = dikin_decomposition_residual(set, c, *y) /
                           std::max(1.0, pq.dikin_norm_sq);
        worst_dec = std::max(worst_dec, rel);
      }
      const auto pi = proof_inequalities(set, c, feasible[static_cast<std::size_t>(k)]);
      worst_s1 = std::max(worst_s1, pi.s1 - m);
      worst_s2 = std::max(worst_s2, pi.s2 - m * m);
      ++points;
    }
  }
  ok = ok && worst_taylor <= kTaylorRel && worst_dec <= kDecompositionRel &&
       worst_s1 <= kInequalitySlack && worst_s2 <= kInequalitySlack;

  // With coefficient 1 on sum Delta_i / gbar_i the decomposition must fail on
  // the unit interval at x = 1 (it gives 1 where the quadratic form is 2).
  const Intersection f = example1_set();
  const VectorXd zero = VectorXd::Zero(1), one = VectorXd::Ones(1);
  const auto pq = proof_quantities(f, zero, one);
  const double wrong = std::abs(pq.dikin_norm_sq - dikin_decomposition(pq, 1.0)) /
                       std::max(1.0, pq.dikin_norm_sq);
  const bool pinned = wrong > kDecompositionRel &&
                      dikin_decomposition_residual(f, zero, one) <= kDecompositionRel;
  ok = ok && pinned;

  std::ostringstream d;
  d << "50 instances x 100 points: max taylor_rel=" << fmt("%.2e", worst_taylor)
    << " (" << kTaylorRel << "), max decomposition_rel=" << fmt("%.2e", worst_dec)
    << " (" << kDecompositionRel << "), max s1-m=" << fmt("%.3e", worst_s1)
    << ", max s2-m^2=" << fmt("%.3e", worst_s2) << " (" << kInequalitySlack
    << "), max center decrement=" << fmt("%.1e", worst_decrement)
    << "; coefficient 1 on {x^2<=1} at x=1 gives " << dikin_decomposition(pq, 1.0)
    << " vs " << pq.dikin_norm_sq << (pinned ? " (rejected)" : " (NOT rejected)");
  return {ok, d.str()};
}

Outcome inner_suite() {
  double worst = 1e300;
  int bad = 0;
  for (const auto& e : suite()) {
    const auto& set = e.problem.feasible_set;
    const InnerCertificate c =
        certify_inner(set, dikin_at_center(set, e.center, 1.0), -kInnerMinSlack);
    const double s = c.min_slacks.minCoeff();
    worst = std::min(worst, s);
    if (!c.ok || s < kInnerMinSlack) ++bad;
  }
  return {bad == 0, std::to_string(suite().size()) + " instances, " +
                        std::to_string(bad) + " failures; smallest min slack " +
                        fmt("%.6g", worst) + " (limit " + fmt("%g", kInnerMinSlack) + ")"};
}

MatrixXd random_spd(Eigen::Index n, Rng& rng) {
  const MatrixXd g = MatrixXd::NullaryExpr(n, n, [&] { return rng.normal(); });
  return g * g.transpose() + 0.2 * MatrixXd::Identity(n, n);
}

// Hard case by construction: in whitened coordinates the linear term has no
// component along the lowest eigenvector and (M - mu_1 I)^+ g is inside the
// sphere.
TrsProblem hard_case_instance(Eigen::Index n, Rng& rng) {
  const MatrixXd h = random_spd(n, rng);
  const MatrixXd l = h.llt().matrixL();
  const MatrixXd v = Eigen::HouseholderQR<MatrixXd>(
                         MatrixXd::NullaryExpr(n, n, [&] { return rng.normal(); }))
                         .householderQ();
  VectorXd mu(n);
  mu(0) = -rng.uniform(0.5, 2.0);
  for (Eigen::Index j = 1; j < n; ++j) mu(j) = mu(j - 1) + rng.uniform(0.3, 2.0);
  const double r = rng.uniform(0.5, 1.5);
  VectorXd beta = n > 1 ? rng.normal_vector(n - 1) : VectorXd();
  if (n > 1) beta *= 0.5 * r / beta.norm();
  VectorXd g = VectorXd::Zero(n);
  for (Eigen::Index j = 1; j < n; ++j) g += (mu(j) - mu(0)) * beta(j - 1) * v.col(j);
  const MatrixXd m = v * mu.asDiagonal() * v.transpose();
  const MatrixXd a = l * m * l.transpose();
  const VectorXd z = rng.normal_vector(n);
  return {SymmetricMatrix(a), l * g - a * z, SymmetricMatrix(h), z, r};
}

Outcome trs_equivalence() {
  Rng rng(2024);
  int bad_value = 0, bad_cert = 0, flagged_hard = 0, constructed_hard = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 1 + k % 3;
    TrsProblem p;
    if (k < 10) {
      p = hard_case_instance(n, rng);
      ++constructed_hard;
    } else {
      const MatrixXd g = MatrixXd::NullaryExpr(n, n, [&] { return rng.normal(); });
      p = TrsProblem{SymmetricMatrix(0.5 * (g + g.transpose())),
                     rng.normal_vector(n), SymmetricMatrix(random_spd(n, rng)),
                     rng.normal_vector(n), rng.uniform(0.3, 2.0)};
    }
    const TrsSolution s = solve_trs(p);
    if (s.hard_case) ++flagged_hard;
    const auto oracle = t::trs_grid_oracle(p.A.matrix(), p.b, p.H.matrix(),
                                           p.center_z, p.radius_r);
    const double rel = t::relative_gap(s.value, oracle.value);
    worst = std::max(worst, rel);
    if (rel > kTrsRel) ++bad_value;
    if (!certify(p, s).holds()) ++bad_cert;
  }
  std::ostringstream d;
  d << "100 instances (n<=3, " << constructed_hard << " constructed hard cases, "
    << flagged_hard << " solved on the hard-case branch): max rel gap to grid oracle "
    << fmt("%.2e", worst) << " (" << kTrsRel << "), " << bad_value
    << " value mismatches, " << bad_cert << " certificate failures";
  return {bad_value == 0 && bad_cert == 0 && constructed_hard >= 5 && flagged_hard >= 5,
          d.str()};
}

Outcome theorem2() {
  int bad = 0, missing = 0;
  double worst_margin = -1e300, worst_ratio = 0.0;
  for (std::uint64_t k = 1; k <= 100; ++k) {
    GeneratorOptions o;
    o.n = 1 + static_cast<int>(k % 3);
    o.m = 2 + static_cast<int>(k % 4);
    o.seed = 500 + k;
    o.kind = static_cast<InstanceKind>(k % 3);
    ApproxOptions ao;
    ao.epsilon = kEpsilon;
    ao.oracle = OracleMode::Grid;
    const ApproxCertificate c = approx_minimize(generate_instance(o), ao);
    if (!c.ratio_estimate) {
      ++missing;
      continue;
    }
    const double bound = theorem_bound(c.m, kEpsilon);
    worst_margin = std::max(worst_margin, *c.ratio_estimate - bound);
    worst_ratio = std::max(worst_ratio, *c.ratio_estimate);
    if (*c.ratio_estimate > bound + kRatioSlack) ++bad;
  }

  const double five_sixths = theorem_bound(2, 0.0);
  const bool cdt = std::abs(five_sixths - 5.0 / 6.0) <= 1e-15;

  double worst_single = 0.0;
  int bad_single = 0;
  std::vector<ProblemInstance> singles{example1_instance()};
  for (std::uint64_t k = 1; k <= 30; ++k) {
    GeneratorOptions o;
    o.n = 1 + static_cast<int>(k % 3);
    o.m = 1;
    o.seed = 900 + k;
    singles.push_back(generate_instance(o));
  }
  for (const auto& p : singles) {
    const ApproxCertificate c = approx_minimize(p);
    if (!c.exact_trs_path || !c.ratio_estimate ||
        *c.ratio_estimate > kSingleConstraintRatio) {
      ++bad_single;
    }
    if (c.ratio_estimate) worst_single = std::max(worst_single, *c.ratio_estimate);
  }

  std::ostringstream d;
  d << "100 instances (n<=3, m in 2..5, eps=" << kEpsilon << ", grid oracle): "
    << bad << " over bound+" << kRatioSlack << ", " << missing
    << " without ratio; max ratio " << fmt("%.4f", worst_ratio)
    << ", max ratio-bound " << fmt("%.4f", worst_margin) << "; bound(m=2,eps=0)="
    << fmt("%.17g", five_sixths) << (cdt ? " = 5/6" : " != 5/6") << "; m=1: "
    << singles.size() << " instances, max ratio " << fmt("%.2e", worst_single)
    << " (limit " << kSingleConstraintRatio << ")";
  return {bad == 0 && missing == 0 && cdt && bad_single == 0, d.str()};
}

Outcome derivatives() {
  double worst_g = 0.0, worst_h = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ProblemInstance p = generate_instance(suite_options(seed));
    const auto& set = p.feasible_set;
    Rng rng(seed + 77);
    for (int k = 0; k < 20; ++k) {
      const VectorXd dir = rng.unit_vector(set.dim());
      const Chord ch = feasible_chord(set, VectorXd::Zero(set.dim()), dir);
      const VectorXd x = rng.uniform(0.05, 0.9) * ch.hi * dir;
      const double h = kFiniteDifferenceStep * (1.0 + x.norm());
      const VectorXd g = barrier_gradient(set, x);
      const VectorXd g_fd = t::fd_gradient(
          [&](const VectorXd& y) { return t::naive_barrier(set, y); }, x, h);
      worst_g = std::max(worst_g, (g - g_fd).norm() / (1.0 + g_fd.norm()));
      const MatrixXd hs = barrier_hessian(set, x).matrix();
      const MatrixXd h_fd = t::fd_jacobian(
          [&](const VectorXd& y) { return barrier_gradient(set, y); }, x, h);
      worst_h = std::max(worst_h, (hs - h_fd).norm() / (1.0 + h_fd.norm()));
    }
  }
  return {worst_g <= kFiniteDifferenceRel && worst_h <= kFiniteDifferenceRel,
          "50 instances x 20 points: max gradient rel err " + fmt("%.2e", worst_g) +
              ", max Hessian rel err " + fmt("%.2e", worst_h) + " (limit " +
              fmt("%g", kFiniteDifferenceRel) + ", relative to 1 + ||fd||)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / "dikin_acceptance_bench";
  fs::remove_all(dir);
  fs::create_directories(dir / "suite");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    char name[32];
    std::snprintf(name, sizeof name, "inst_%03d.json", static_cast<int>(seed));
    std::ofstream(dir / "suite" / name, std::ios::binary)
        << serialize_instance(generate_instance(suite_options(seed)));
  }
  cli::BenchFlags f;
  f.samples = 500;
  f.seed = 3;
  f.timings = false;
  const std::string a = cli::cmd_bench(dir / "suite", f);
  const std::string b = cli::cmd_bench(dir / "suite", f);
  f.jobs = 4;
  const std::string c = cli::cmd_bench(dir / "suite", f);
  bool ok = a == b && a == c;
  std::string detail = "library: 2 runs + --jobs 4 ";
  detail += ok ? "identical" : "DIFFER";

  if (!cli.empty()) {
    std::vector<std::string> outs;
    for (const char* jobs : {"1", "1", "4"}) {
      const fs::path out = dir / (std::string("run_") + std::to_string(outs.size()) + ".csv");
      const std::string cmd = "\"" + cli + "\" bench \"" + (dir / "suite").string() +
                              "\" --seed 3 --samples 500 --no-timings --jobs " + jobs +
                              " --out \"" + out.string() + "\"";
      if (std::system(cmd.c_str()) != 0) return {false, "CLI bench failed: " + cmd};
      outs.push_back(slurp(out));
    }
    const bool cli_ok = outs[0] == outs[1] && outs[0] == outs[2] && outs[0] == a;
    ok = ok && cli_ok;
    detail += std::string("; CLI: 2 runs + --jobs 4 ") +
              (cli_ok ? "byte-identical" : "DIFFER");
  } else {
    detail += "; CLI not given";
    ok = false;
  }
  const std::size_t rows =
      static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n')) - 1;
  detail += " (" + std::to_string(rows) + " rows, " + std::to_string(a.size()) + " bytes)";
  fs::remove_all(dir);
  return {ok && rows == 20, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  report(1, "unit-interval counterexample", example1);
  report(2, "outer containment suite", outer_suite);
  report(3, "proof identity suite", identities);
  report(4, "inner containment suite", inner_suite);
  report(5, "TRS oracle equivalence", trs_equivalence);
  report(6, "approximation bound", theorem2);
  report(7, "barrier derivatives", derivatives);
  report(8, "bench determinism", [&] { return determinism(cli); });
  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
