#pragma once

#include <string>
#include <utility>
#include <vector>

#include "conefield/integrator.hpp"
#include "conefield/manifold.hpp"

namespace conefield {

struct OrbitCandidate {
  int n = 1;  // number of A' = 0 crossings
  double r_hat = 0;
  double delta_r = 0;

  int crossings_to_section() const { return n + 1; }
  // +1: section y_e = +d^e_2, -1: y_e = -d^e_2. Odd n use the + side.
  int end_side() const { return n % 2 ? 1 : -1; }
  double r_minus() const { return r_hat - delta_r; }
  double r_plus() const { return r_hat + delta_r; }
  void validate() const;
  // Upper bound for ln of the widened r-box end; the begin block's time
  // domain must reach it.
  double rho_cover() const;
};

struct ProofSettings {
  double db1 = 0.125;
  double db2 = 2.8e-6;
  double de1 = 0.0015;
  double de2 = 0.01;
  double r_star = 6.0;
  double a = 1.0;
  double rho_star = 0;  // 0 means ln(r_hat + delta_r) of the first candidate
  int order = 20;
  double tol = 1e-14;
  int max_steps = 200000;
  double t_max = 40.0;
  int r_subdivisions = 1;
  int y_subdivisions = 1;
  int max_y_subdivisions = 8;  // doubling budget when F' straddles 0
  int threads = 0;  // 0: hardware concurrency

  HSetBlock block_b() const { return HSetBlock::begin(db1, db2, rho_star); }
  HSetBlock block_e() const { return HSetBlock::end(de1, de2, r_star); }
};

enum class Verdict { Proved, Failed, Inconclusive };
const char* verdict_name(Verdict v);

struct OrbitProofCertificate {
  OrbitCandidate candidate;
  BlockCertificate block_b, block_e;
  ManifoldCertificate bounds_b, bounds_e;
  Interval return_time{0.0};
  Interval cover_minus{0.0};
  Interval cover_plus{0.0};
  int crossing_count = -1;
  Interval F_prime{0.0};
  IntervalMatrix DP;  // hull of the section Jacobians (r, y_b) -> (r_e, x_e)
  Interval xs_lip{0.0};
  Interval yu_lip_rescaled{0.0};
  int section_side = 0;
  int r_subdivisions = 1;
  int y_subdivisions = 1;
  double seconds = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
};

struct DerivativeInputs {
  IntervalMatrix DP;
  Interval xs_lip{0.0};
  Interval yu_lip_rescaled{0.0};
};

// r-interval and the (A, A') box of [r-, r+] x [-d2, d2] on the exit face.
std::pair<Interval, IntervalVector> initial_set(const OrbitCandidate& cand, const HSetBlock& block_b);

// Flow job for the face piece R x Y in original variables, as a Lohner set
// parameterized by (r, y_b). With variational data the initial derivative
// is [d(r, A, A')/d(r, y_b) | e3].
FlowJob face_job(const ProofSettings& s, const Interval& R, const Interval& Y, bool with_variational);

SectionSpec end_section(const ProofSettings& s, int side);

struct Transport {
  CrossingResult minus, plus, full;
};
Transport transport(const OrbitCandidate& cand, const ProofSettings& s);

// (r, y_b) -> (r_e, x_e) from the extended crossing Jacobian.
IntervalMatrix section_jacobian(const IntervalMatrix& ext);

Interval derivative_enclosure(const DerivativeInputs& in);

OrbitProofCertificate prove_orbit(const OrbitCandidate& cand, const ProofSettings& s);
std::vector<OrbitProofCertificate> prove_all(const std::vector<OrbitCandidate>& cands, const ProofSettings& s);

// Re-checks every recorded inequality of a certificate from its stored
// intervals alone. Returns an empty string when consistent.
std::string recheck(const OrbitProofCertificate& c, const ProofSettings& s);

// Candidate rows used by the shipped proof.
std::vector<OrbitCandidate> default_candidates();

}  // namespace conefield
