#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conefield/config.hpp"
#include "conefield/shooting.hpp"

namespace conefield {

constexpr int kCertificateSchema = 1;

struct CertificateFile {
  ProofConfig config;
  std::vector<OrbitProofCertificate> certificates;
};

// JSON; intervals as {"lo": "<decimal>", "hi": "<decimal>"} with exact
// shortest round-trip decimals.
std::string serialize(const CertificateFile& f);
CertificateFile parse_certificates(const std::string& json_text);

// Recheck of every certificate against the stored config; one message per
// inconsistent orbit, empty when all Proved certificates re-validate.
std::vector<std::string> recheck_all(const CertificateFile& f);

// Reference values printed with the original computation, for side by side
// display. Compressed strings parse with parse_compressed.
struct PublishedRow {
  int n;
  Interval r_hat_delta;  // [r^-, r^+]
  Interval return_time;
  std::string cover_minus, cover_plus;
  Interval F_prime;
};
const std::vector<PublishedRow>& published_rows();
// F'_1 over 100 r-slices
Interval published_refined_F1();

std::string report(const CertificateFile& f);

}  // namespace conefield
