// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and
// budgets are fixed here; nothing is read from the environment.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "conefield/certificate.hpp"
#include "conefield/config.hpp"
#include "conefield/scout.hpp"
#include "properties.hpp"

using namespace conefield;

namespace {

// pinned tolerances
constexpr double kBeginLipMax = 7.65e-6;
constexpr double kBeginClosedLo = 7.6e-6, kBeginClosedHi = 7.65e-6;
constexpr double kBeginEGap = 1e-6;  // E within this of 1
constexpr double kEndE0 = 43995239.0 / 24000000.0;
constexpr double kEndERel = 1e-6;
constexpr double kEndLipMax = 0.000252;
constexpr double kManifoldSeconds = 1.0;
constexpr double kWorkedRel = 1e-12;
constexpr double kProveAllSeconds = 300.0;
constexpr double kRefinedWidthMax = 2000.0;
constexpr int kRefineSlices = 100;
constexpr long kIntervalCases = 100000;
constexpr long kEigenCases = 10000;
constexpr int kIvpPerField = 67;  // 3 fields, 201 IVPs
constexpr int kFdCases = 30;
constexpr double kScoutDeltaFactor = 10.0;
constexpr double kScanLo = 1e-4, kScanHi = 1e-2;
constexpr int kScanSamples = 60;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool meets(const Interval& a, const Interval& b) { return intersect(a, b).has_value(); }

double rel(double x, double want) { return std::fabs(x - want) / std::fabs(want); }

const ProofConfig& config() {
  static const ProofConfig c = ProofConfig::defaults();
  return c;
}

// shared by criteria 4 to 7
struct ProofRun {
  std::vector<OrbitProofCertificate> certs;
  double seconds = 0;
};

const ProofRun& proof_run() {
  static const ProofRun run = [] {
    ProofRun r;
    auto t0 = std::chrono::steady_clock::now();
    r.certs = prove_all(config().candidates, config().resolved());
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

void criterion1(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  const ProofSettings s = config().resolved();
  const HSetBlock nb = s.block_b();
  BlockCertificate b = verify_block(FieldId::Begin, nb);
  ManifoldCertificate m = manifold_bounds(FieldId::Begin, nb, {s.a});
  double dt = seconds_since(t0);
  Interval closed = begin_lip_closed_form(s.db1, s.db2, Interval(s.rho_star));
  o.require(b.verdict, "begin block not isolating");
  o.require(m.E.lo() > 1 - kBeginEGap && m.E.lo() <= 1, "E not just below 1");
  o.require(m.lip_t.hi() <= kBeginLipMax, "lip_t above 7.65e-6");
  o.require(closed.lo() >= kBeginClosedLo && closed.hi() <= kBeginClosedHi, "closed form outside [7.6e-6, 7.65e-6]");
  o.require(dt < kManifoldSeconds, "runtime");
  o.detail << " E " << to_decimal(m.E.lo()) << ", lip_t " << to_decimal(m.lip_t.hi()) << ", closed form "
           << to_string(closed) << ", " << dt << " s";
}

void criterion2(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  const ProofSettings s = config().resolved();
  const HSetBlock ne = s.block_e();
  BlockCertificate b = verify_block(FieldId::End, ne);
  ManifoldCertificate m = manifold_bounds(FieldId::End, ne, {s.a});
  double dt = seconds_since(t0);
  o.require(b.verdict, "end block not isolating");
  // the row-bound (Gershgorin) constant is the published E0; the
  // eigenvalue test used by the certificate may only do better
  Interval g = cone_E(FieldId::End, ne, {s.a}, ConeMethod::Gershgorin);
  o.require(rel(g.lo(), kEndE0) <= kEndERel, "Gershgorin E not within 1e-6 of E0");
  o.require(m.E.lo() >= kEndE0 * (1 - kEndERel), "certified E below E0");
  o.require(m.lip_t.hi() <= kEndLipMax, "lip_t above 0.000252");
  o.require(dt < kManifoldSeconds, "runtime");
  o.detail << " E " << to_decimal(m.E.lo()) << ", Gershgorin E " << to_decimal(g.lo()) << " (E0 "
           << to_decimal(kEndE0) << "), lip_t "
           << to_decimal(m.lip_t.hi()) << ", " << dt << " s";
}

void criterion3(Outcome& o) {
  AnalyticParams e;  // d1 = d2 = 1/4, r* = 2, a = 1
  AnalyticResult em = analytic_check(AnalyticKind::EndM, e);
  const double end_m = 11.0 / 128.0 * std::sqrt(2.0);
  o.require(em.holds && em.bound, "EndM not certified");
  if (em.bound) {
    const double ulp = std::nextafter(end_m, INFINITY) - end_m;
    o.require(em.bound->contains(end_m) && em.bound->width() <= 4 * ulp, "EndM not (11/128) sqrt2");
    Interval lip = *em.bound / Interval(1.0);
    o.require(rel(lip.hi(), 11.0 * std::sqrt(2.0) / 128) <= kWorkedRel, "end derivative bound");
  }
  AnalyticParams b;
  b.rho0 = log(Interval(2.0));
  AnalyticResult bm = analytic_check(AnalyticKind::BeginM, b);
  o.require(bm.holds && bm.bound, "BeginM not certified");
  if (bm.bound) {
    o.require(rel(bm.bound->hi(), 8 * std::sqrt(2.0)) <= kWorkedRel && bm.bound->contains(8 * std::sqrt(2.0)),
              "BeginM not 8 sqrt2");
    Interval lip = *bm.bound / Interval(0.5);
    o.require(rel(lip.hi(), 16 * std::sqrt(2.0)) <= kWorkedRel, "begin derivative bound");
    o.detail << " EndM " << to_string(*em.bound) << ", BeginM " << to_string(*bm.bound);
  }
}

void criterion4(Outcome& o) {
  const ProofRun& run = proof_run();
  const auto& rows = published_rows();
  o.require(run.certs.size() == 6, "six certificates");
  for (size_t i = 0; i < run.certs.size() && i < rows.size(); ++i) {
    const auto& c = run.certs[i];
    std::string n = "n=" + std::to_string(c.candidate.n);
    o.require(meets(c.return_time, rows[i].return_time), n + " return time misses the table");
    o.require(c.return_time.lo() >= config().settings.r_star, n + " return time below r*");
  }
  o.require(run.seconds <= kProveAllSeconds, "runtime");
  o.detail << " all six in " << run.seconds << " s";
}

void criterion5(Outcome& o) {
  const ProofRun& run = proof_run();
  const auto& rows = published_rows();
  for (size_t i = 0; i < run.certs.size() && i < rows.size(); ++i) {
    const auto& c = run.certs[i];
    std::string n = "n=" + std::to_string(c.candidate.n);
    Interval pm = parse_compressed(rows[i].cover_minus), pp = parse_compressed(rows[i].cover_plus);
    o.require(c.cover_minus.sign() == pm.sign() && c.cover_plus.sign() == pp.sign(), n + " cover signs");
    o.require(c.cover_minus.mig() > config().settings.de1 && c.cover_plus.mig() > config().settings.de1,
              n + " cover magnitudes");
    o.require(meets(c.cover_minus, pm) && meets(c.cover_plus, pp), n + " covers miss the table");
  }
  o.detail << " n=1 " << to_compressed(run.certs[0].cover_minus) << " / " << to_compressed(run.certs[0].cover_plus);
}

void criterion6(Outcome& o) {
  const ProofRun& run = proof_run();
  const auto& rows = published_rows();
  for (size_t i = 0; i < run.certs.size() && i < rows.size(); ++i) {
    const auto& c = run.certs[i];
    std::string n = "n=" + std::to_string(c.candidate.n);
    o.require(!c.F_prime.contains_zero(), n + " F' contains 0");
    o.require(c.F_prime.sign() == rows[i].F_prime.sign(), n + " F' sign");
    o.require(meets(c.F_prime, rows[i].F_prime), n + " F' misses the printed enclosure");
  }
  ProofSettings s = config().resolved();
  s.r_subdivisions = kRefineSlices;
  OrbitProofCertificate r = prove_orbit(config().candidates[0], s);
  o.require(r.verdict == Verdict::Proved, "refined n=1 not proved");
  o.require(meets(r.F_prime, published_refined_F1()), "refined F'_1 misses the printed interval");
  o.require(r.F_prime.width() <= kRefinedWidthMax, "refined F'_1 too wide");
  o.detail << " refined F'_1 " << to_string(r.F_prime);
}

void criterion7(Outcome& o) {
  for (const auto& c : proof_run().certs) {
    o.require(c.verdict == Verdict::Proved, "n=" + std::to_string(c.candidate.n) + " not proved: " + c.reason);
    o.require(c.crossing_count == c.candidate.n, "n=" + std::to_string(c.candidate.n) + " crossing count");
  }
  o.detail << " counts";
  for (const auto& c : proof_run().certs) o.detail << " " << c.crossing_count;
}

void criterion8(Outcome& o) {
  struct Suite {
    const char* name;
    std::function<props::Result()> run;
  };
  const std::vector<Suite> suites = {
      {"interval containment", [] { return props::interval_containment(kIntervalCases, 1); }},
      {"cone tests vs eigenvalues", [] { return props::pd_vs_eigen_oracle(kEigenCases, 2); }},
      {"integrator vs 50-digit reference", [] { return props::integrator_vs_reference(kIvpPerField, 3); }},
      {"variational vs finite differences", [] { return props::variational_vs_fd(kFdCases, 4); }},
      {"certificate round trip", [] { return props::certificate_round_trip(); }},
  };
  for (const auto& s : suites) {
    props::Result r = s.run();
    o.require(r.ok(), std::string(s.name) + ": " + r.first_failure);
    o.detail << " " << s.name << " " << r.cases - r.violations << "/" << r.cases << ";";
  }
}

void criterion9(Outcome& o) {
  for (const auto& want : config().candidates) {
    ScoutSettings ss;
    ss.d1 = config().settings.db1;
    ss.de1 = config().settings.de1;
    ss.de2 = config().settings.de2;
    double best = INFINITY;
    for (auto br : scan_brackets(want.n, kScanLo, kScanHi, kScanSamples, ss)) {
      try {
        OrbitCandidate c = bisect_candidates(want.n, br, ss);
        best = std::fmin(best, std::fabs(c.r_hat - want.r_hat));
      } catch (const NoSignChange&) {
      }
    }
    o.require(best <= kScoutDeltaFactor * want.delta_r, "n=" + std::to_string(want.n) + " not recovered");
    o.detail << " n=" << want.n << " " << best / want.delta_r << " dr;";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria = {
      {"begin-side manifold bounds", criterion1}, {"end-side manifold bounds", criterion2},
      {"worked examples", criterion3},            {"return times", criterion4},
      {"cover inequalities", criterion5},         {"transversality", criterion6},
      {"crossing counts", criterion7},            {"property suites", criterion8},
      {"scout reproduction", criterion9},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [threw: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s%s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed ? 1 : 0;
}
