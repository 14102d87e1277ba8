#include "conefield/certificate.hpp"

#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace conefield {

using nlohmann::json;

namespace {

json jv(const Interval& x) { return {{"lo", to_decimal(x.lo())}, {"hi", to_decimal(x.hi())}}; }

Interval iv(const json& j) {
  return Interval(parse_decimal(j.at("lo").get<std::string>()), parse_decimal(j.at("hi").get<std::string>()));
}

json jm(const IntervalMatrix& m) {
  json rows = json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(jv(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

IntervalMatrix im(const json& j) {
  if (j.empty()) return {};
  IntervalMatrix m(j.size(), j.at(0).size());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t k = 0; k < m.cols(); ++k) m(i, k) = iv(j.at(i).at(k));
  return m;
}

json block_json(const BlockCertificate& b) {
  json faces = json::array();
  for (const auto& f : b.face_bounds) faces.push_back(jv(f));
  return {{"face_bounds", faces}, {"verdict", b.verdict}};
}

BlockCertificate block_from(const json& j) {
  BlockCertificate b;
  for (size_t i = 0; i < 4; ++i) b.face_bounds[i] = iv(j.at("face_bounds").at(i));
  b.verdict = j.at("verdict").get<bool>();
  return b;
}

json bounds_json(const ManifoldCertificate& m) {
  return {{"E", jv(m.E)},
          {"m", jv(m.m)},
          {"lip_t", jv(m.lip_t)},
          {"delta", jv(m.delta)},
          {"cone_slope", to_decimal(m.cone_slope)}};
}

ManifoldCertificate bounds_from(const json& j) {
  ManifoldCertificate m;
  m.E = iv(j.at("E"));
  m.m = iv(j.at("m"));
  m.lip_t = iv(j.at("lip_t"));
  m.delta = iv(j.at("delta"));
  m.cone_slope = parse_decimal(j.at("cone_slope").get<std::string>());
  return m;
}

Verdict verdict_from(const std::string& s) {
  if (s == "Proved") return Verdict::Proved;
  if (s == "Failed") return Verdict::Failed;
  if (s == "Inconclusive") return Verdict::Inconclusive;
  throw std::invalid_argument("unknown verdict " + s);
}

}  // namespace

std::string serialize(const CertificateFile& f) {
  json certs = json::array();
  for (const auto& c : f.certificates) {
    certs.push_back({{"n", c.candidate.n},
                     {"r_hat", to_decimal(c.candidate.r_hat)},
                     {"delta_r", to_decimal(c.candidate.delta_r)},
                     {"section_side", c.section_side},
                     {"block_b", block_json(c.block_b)},
                     {"block_e", block_json(c.block_e)},
                     {"bounds_b", bounds_json(c.bounds_b)},
                     {"bounds_e", bounds_json(c.bounds_e)},
                     {"return_time", jv(c.return_time)},
                     {"cover_minus", jv(c.cover_minus)},
                     {"cover_plus", jv(c.cover_plus)},
                     {"crossing_count", c.crossing_count},
                     {"F_prime", jv(c.F_prime)},
                     {"DP", jm(c.DP)},
                     {"xs_lip", jv(c.xs_lip)},
                     {"yu_lip_rescaled", jv(c.yu_lip_rescaled)},
                     {"r_subdivisions", c.r_subdivisions},
                     {"y_subdivisions", c.y_subdivisions},
                     {"seconds", c.seconds},
                     {"verdict", verdict_name(c.verdict)},
                     {"reason", c.reason}});
  }
  json doc = {{"schema_version", kCertificateSchema}, {"config", to_ini(f.config)}, {"certificates", certs}};
  return doc.dump(2) + "\n";
}

CertificateFile parse_certificates(const std::string& text) {
  json doc = json::parse(text);
  if (doc.at("schema_version").get<int>() != kCertificateSchema)
    throw std::invalid_argument("unsupported certificate schema version");
  CertificateFile f;
  f.config = parse_config(doc.at("config").get<std::string>());
  for (const auto& j : doc.at("certificates")) {
    OrbitProofCertificate c;
    c.candidate = {j.at("n").get<int>(), parse_decimal(j.at("r_hat").get<std::string>()),
                   parse_decimal(j.at("delta_r").get<std::string>())};
    c.section_side = j.at("section_side").get<int>();
    c.block_b = block_from(j.at("block_b"));
    c.block_e = block_from(j.at("block_e"));
    c.bounds_b = bounds_from(j.at("bounds_b"));
    c.bounds_e = bounds_from(j.at("bounds_e"));
    c.return_time = iv(j.at("return_time"));
    c.cover_minus = iv(j.at("cover_minus"));
    c.cover_plus = iv(j.at("cover_plus"));
    c.crossing_count = j.at("crossing_count").get<int>();
    c.F_prime = iv(j.at("F_prime"));
    c.DP = im(j.at("DP"));
    c.xs_lip = iv(j.at("xs_lip"));
    c.yu_lip_rescaled = iv(j.at("yu_lip_rescaled"));
    c.r_subdivisions = j.at("r_subdivisions").get<int>();
    c.y_subdivisions = j.at("y_subdivisions").get<int>();
    c.seconds = j.at("seconds").get<double>();
    c.verdict = verdict_from(j.at("verdict").get<std::string>());
    c.reason = j.at("reason").get<std::string>();
    f.certificates.push_back(std::move(c));
  }
  return f;
}

std::vector<std::string> recheck_all(const CertificateFile& f) {
  std::vector<std::string> out;
  const ProofSettings s = f.config.resolved();
  for (const auto& c : f.certificates) {
    if (c.verdict != Verdict::Proved) continue;
    std::string why = recheck(c, s);
    if (!why.empty()) out.push_back("n = " + std::to_string(c.candidate.n) + ": " + why);
  }
  return out;
}

const std::vector<PublishedRow>& published_rows() {
  static const std::vector<PublishedRow> rows = [] {
    auto rt = [](const char* lo, const char* hi) { return Interval(parse_decimal(lo), parse_decimal(hi)); };
    auto rr = [](double rh, double dr) { return Interval(rnd::down(rh - dr), rnd::up(rh + dr)); };
    return std::vector<PublishedRow>{
        {1, rr(0.003288250, 4e-7), rt("6.5694270711914049", "6.8663028711914071"), "-0.0032[19,26]",
         "0.0032[89,97]", Interval(1396, 16970)},
        {2, rr(0.001184020, 6e-8), rt("9.547364685097655", "9.8754898050976578"), "0.00189[2,8]", "-0.0018[86,93]",
         Interval(-56203.7, -12850.2)},
        {3, rr(0.000650050, 3e-8), rt("12.63188037430908", "12.975630434309084"), "-0.0019[87,92]",
         "0.0019[37,43]", Interval(16342.1, 137481)},
        {4, rr(0.000424204, 2e-8), rt("15.467339314615232", "15.811089354615238"), "0.00209[5,9]",
         "-0.00221[0,5]", Interval(-183339, -24681.3)},
        {5, rr(0.000304427, 1e-8), rt("18.659449295387446", "19.009330830371958"), "-0.00155[5,9]",
         "0.0015[78,82]", Interval(39626.1, 307922)},
        {6, rr(0.000232050, 8e-9), rt("21.645791630860828", "21.989541646860836"), "0.00173[1,4]",
         "-0.0016[57,61]", Interval(-435119, -1138.93)},
    };
  }();
  return rows;
}

Interval published_refined_F1() { return Interval(7902.54, 8399.24); }

std::string report(const CertificateFile& f) {
  std::ostringstream o;
  auto line = [&](const std::string& what, const std::string& ours, const std::string& pub) {
    o << "  " << std::left << std::setw(14) << what << std::setw(64) << ours << " " << pub << "\n";
  };
  for (const auto& c : f.certificates) {
    const PublishedRow* p = nullptr;
    for (const auto& row : published_rows())
      if (row.n == c.candidate.n) p = &row;
    o << "orbit n = " << c.candidate.n << ": " << verdict_name(c.verdict) << " (" << c.reason << ")\n";
    line("", "ours", p ? "published" : "");
    line("r_hat, dr", to_decimal(c.candidate.r_hat) + ", " + to_decimal(c.candidate.delta_r),
         p ? to_string(p->r_hat_delta) : "");
    line("section", c.section_side > 0 ? "y_e = +d2" : "y_e = -d2", "");
    line("return time", to_string(c.return_time), p ? to_string(p->return_time) : "");
    line("cover r-", to_compressed(c.cover_minus) + "  " + to_string(c.cover_minus), p ? p->cover_minus : "");
    line("cover r+", to_compressed(c.cover_plus) + "  " + to_string(c.cover_plus), p ? p->cover_plus : "");
    line("A'=0 count", std::to_string(c.crossing_count), p ? std::to_string(p->n) : "");
    line("F'", to_string(c.F_prime), p ? to_string(p->F_prime) : "");
    if (c.DP.rows() == 2)
      for (size_t i = 0; i < 2; ++i) line(i ? "" : "DP", to_string(c.DP(i, 0)) + " " + to_string(c.DP(i, 1)), "");
    line("x_s' bound", to_string(c.xs_lip), "");
    line("y_u' bound", to_string(c.yu_lip_rescaled), "");
    line("begin lip_t", to_string(c.bounds_b.lip_t), "");
    line("end lip_t", to_string(c.bounds_e.lip_t), "");
    line("slices r x y", std::to_string(c.r_subdivisions) + " x " + std::to_string(c.y_subdivisions), "");
    if (c.candidate.n == 1 && c.r_subdivisions > 1) line("F' refined", to_string(c.F_prime), to_string(published_refined_F1()));
    o << "\n";
  }
  return o.str();
}

}  // namespace conefield
