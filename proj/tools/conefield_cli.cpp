#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "conefield/certificate.hpp"
#include "conefield/config.hpp"
#include "conefield/scout.hpp"

using namespace conefield;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInconclusive = 2, kUsage = 3 };

int exit_for(const std::vector<OrbitProofCertificate>& certs) {
  int code = kOk;
  for (const auto& c : certs) {
    if (c.verdict == Verdict::Failed) return kFailed;
    if (c.verdict == Verdict::Inconclusive) code = kInconclusive;
  }
  return code;
}

void print_block(const char* name, const BlockCertificate& b) {
  static const char* faces[] = {"x = +d1", "x = -d1", "y = +d2", "y = -d2"};
  std::cout << name << ": " << (b.verdict ? "isolating" : "NOT isolating") << "\n";
  for (int i = 0; i < 4; ++i) std::cout << "  " << faces[i] << "  " << to_string(b.face_bounds[i]) << "\n";
}

void print_bounds(const char* name, const ManifoldCertificate& m) {
  std::cout << name << ":\n  E      " << to_string(m.E) << "\n  m      " << to_string(m.m) << "\n  lip_t  "
            << to_string(m.lip_t) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verified connecting orbits of A'' + A'/r - A/(4r^2) = A - A^3"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "config file (else $CONEFIELD_CONFIG, else defaults)");

  double db1 = 0, db2 = 0, de1 = 0, de2 = 0, db = 0;
  auto add_block_opts = [&](CLI::App* sub) {
    sub->add_option("--db", db, "set both begin block half-widths");
    sub->add_option("--db1", db1, "begin block x half-width");
    sub->add_option("--db2", db2, "begin block y half-width");
    sub->add_option("--de1", de1, "end block x half-width");
    sub->add_option("--de2", de2, "end block y half-width");
  };
  auto* blocks = app.add_subcommand("blocks", "verify both isolating blocks");
  auto* cones = app.add_subcommand("cones", "certify the cone constants E");
  auto* bounds = app.add_subcommand("bounds", "manifold Lipschitz bounds in time");
  for (auto* s : {blocks, cones, bounds}) add_block_opts(s);

  auto* prove = app.add_subcommand("prove", "run the shooting proof");
  std::vector<int> orbits;
  bool all = false;
  int refine = 0;
  int threads = 0;
  std::string out_path;
  auto* orbit_opt = prove->add_option("--orbit", orbits, "orbit index n (repeatable)");
  auto* all_opt = prove->add_flag("--all", all, "all configured candidates");
  orbit_opt->excludes(all_opt);
  prove->add_option("--refine", refine, "r-subdivisions (config 'refine' if given without a value)")
      ->expected(0, 1)
      ->default_str("0");
  prove->add_option("--threads", threads, "worker threads (0: hardware)");
  prove->add_option("--out", out_path, "write the certificate JSON here");

  auto* search = app.add_subcommand("search", "nonrigorous bisection for orbit candidates");
  int search_n = 1;
  double lo = 1e-4, hi = 1e-2;
  int samples = 60;
  search->add_option("--n", search_n, "number of A'=0 crossings")->required();
  search->add_option("--lo", lo, "lower end of the r scan");
  search->add_option("--hi", hi, "upper end of the r scan");
  search->add_option("--samples", samples, "log-grid samples");

  auto* trace = app.add_subcommand("trace", "CSV trajectory from the begin exit face");
  double r0 = 0, yb = 0, t_end = 10, tol = 1e-12;
  std::string scale = "mixed";
  trace->add_option("--r0", r0, "starting r")->required();
  trace->add_option("--yb", yb, "y_b on the exit face");
  trace->add_option("--t-end", t_end, "final r");
  trace->add_option("--tol", tol, "local error tolerance");
  trace->add_option("--scale", scale, "rho | r | mixed")->check(CLI::IsMember({"rho", "r", "mixed"}));
  trace->add_option("--out", out_path, "CSV file (default stdout)");

  auto* report_cmd = app.add_subcommand("report", "render and recheck a certificate file");
  std::string cert_path;
  report_cmd->add_option("cert", cert_path, "certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  ProofConfig cfg;
  try {
    cfg = resolve_config(config_path);
    ProofSettings& s = cfg.settings;
    if (db > 0) s.db1 = s.db2 = db;
    if (db1 > 0) s.db1 = db1;
    if (db2 > 0) s.db2 = db2;
    if (de1 > 0) s.de1 = de1;
    if (de2 > 0) s.de2 = de2;
    if (threads > 0) s.threads = threads;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  }
  const ProofSettings s = cfg.resolved();

  try {
    if (blocks->parsed() || cones->parsed() || bounds->parsed()) {
      HSetBlock nb = s.block_b(), ne = s.block_e();
      try {
        nb.validate();
        ne.validate();
      } catch (const std::exception& e) {
        std::cerr << "BeginBlock/EndBlock configuration rejected: " << e.what() << "\n";
        return kFailed;
      }
      BlockCertificate cb = verify_block(FieldId::Begin, nb), ce = verify_block(FieldId::End, ne);
      // the begin-side manifold bounds also need max(d1, d2) < 1/2
      AnalyticParams ap;
      ap.d1 = s.db1;
      ap.d2 = s.db2;
      bool begin_premise = analytic_check(AnalyticKind::BeginBlock, ap).holds;
      if (!begin_premise) cb.verdict = false;
      if (blocks->parsed()) {
        print_block("begin block", cb);
        if (!begin_premise) std::cout << "  max(d1, d2) < 1/2 violated\n";
        print_block("end block", ce);
        if (!cb.verdict) std::cerr << "BeginBlock failure\n";
        if (!ce.verdict) std::cerr << "EndBlock failure\n";
        return cb.verdict && ce.verdict ? kOk : kFailed;
      }
      if (!cb.verdict || !ce.verdict) {
        std::cerr << (cb.verdict ? "EndBlock" : "BeginBlock") << " failure\n";
        return kFailed;
      }
      ConeForm q{s.a};
      if (cones->parsed()) {
        Interval eb = cone_E(FieldId::Begin, nb, q), ee = cone_E(FieldId::End, ne, q);
        std::cout << "begin E certified " << to_decimal(eb.lo()) << " (rejected at " << to_decimal(eb.hi()) << ")\n"
                  << "end   E certified " << to_decimal(ee.lo()) << " (rejected at " << to_decimal(ee.hi()) << ")\n";
        return eb.lo() > 0 && ee.lo() > 0 ? kOk : kFailed;
      }
      try {
        print_bounds("begin", manifold_bounds(FieldId::Begin, nb, q));
        print_bounds("end", manifold_bounds(FieldId::End, ne, q));
      } catch (const PreconditionNotCertified& e) {
        std::cerr << e.what() << "\n";
        return kFailed;
      }
      return kOk;
    }

    if (prove->parsed()) {
      std::vector<OrbitCandidate> cands;
      if (all || orbits.empty()) {
        cands = cfg.candidates;
      } else {
        for (int n : orbits) {
          auto it = std::find_if(cfg.candidates.begin(), cfg.candidates.end(), [&](auto& c) { return c.n == n; });
          if (it == cfg.candidates.end()) {
            std::cerr << "no candidate for n = " << n << " in the config\n";
            return kUsage;
          }
          cands.push_back(*it);
        }
      }
      ProofSettings ps = s;
      if (prove->get_option("--refine")->count() > 0)
        ps.r_subdivisions = refine > 0 ? refine : cfg.refine_r_subdivisions;
      CertificateFile f{cfg, prove_all(cands, ps)};
      for (const auto& c : f.certificates)
        std::cout << "n = " << c.candidate.n << "  " << verdict_name(c.verdict) << "  return " << to_string(c.return_time)
                  << "  cover " << to_compressed(c.cover_minus) << " / " << to_compressed(c.cover_plus) << "  count "
                  << c.crossing_count << "  F' " << to_string(c.F_prime) << "  (" << c.reason << ")\n";
      if (!out_path.empty()) {
        std::ofstream(out_path) << serialize(f);
        std::cout << "certificate written to " << out_path << "\n";
      }
      return exit_for(f.certificates);
    }

    if (search->parsed()) {
      ScoutSettings ss;
      ss.d1 = s.db1;
      ss.de1 = s.de1;
      ss.de2 = s.de2;
      for (const auto& c : cfg.candidates)
        if (c.n == search_n) ss.delta_cap = c.delta_r;
      auto brackets = scan_brackets(search_n, lo, hi, samples, ss);
      for (auto br : brackets) {
        try {
          OrbitCandidate c = bisect_candidates(search_n, br, ss);
          std::cout << "# NONRIGOROUS candidate (config fragment)\n[candidates]\nn" << c.n << " = " << to_decimal(c.r_hat)
                    << ", " << to_decimal(c.delta_r) << "\n";
          return kOk;
        } catch (const NoSignChange&) {
        }
      }
      std::cerr << "NoSignChange: no candidate with " << search_n << " extrema in [" << lo << ", " << hi << "]\n";
      return kFailed;
    }

    if (trace->parsed()) {
      SimScale sc = scale == "rho" ? SimScale::Rho : scale == "r" ? SimScale::R : SimScale::Mixed;
      SimTrajectory tr;
      try {
        tr = simulate(r0, yb, t_end, tol, sc, s.db1);
      } catch (const BlowUp& e) {
        std::cerr << "BlowUp: " << e.what() << "\n";
        return kFailed;
      }
      if (out_path.empty()) {
        write_csv(std::cout, tr);
      } else {
        std::ofstream os(out_path);
        write_csv(os, tr);
      }
      return kOk;
    }

    if (report_cmd->parsed()) {
      std::ifstream in(cert_path);
      if (!in) {
        std::cerr << "cannot open " << cert_path << "\n";
        return kUsage;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      CertificateFile f = parse_certificates(ss.str());
      std::cout << report(f);
      auto bad = recheck_all(f);
      for (const auto& b : bad) std::cout << "RECHECK FAILED " << b << "\n";
      if (!bad.empty()) return kFailed;
      std::cout << "all Proved certificates re-validate from stored intervals\n";
      return exit_for(f.certificates);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
