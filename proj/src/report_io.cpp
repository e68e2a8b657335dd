#include "sumset/report_io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>

#include "sumset/construct_zpn.hpp"
#include "sumset/errors.hpp"
#include "sumset/int_set.hpp"
#include "sumset/zp_lattice.hpp"

namespace sumset {

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t start = tok.find_first_not_of(' ');
    std::size_t stop = tok.find_last_not_of(' ');
    if (start == std::string::npos) throw DomainError("empty entry in integer list '" + text + "'");
    const char* first = tok.data() + start;
    const char* last = tok.data() + stop + 1;
    if (*first == '+') ++first;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw DomainError("not an integer: '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

nlohmann::ordered_json read_json_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path + "'");
  try {
    return nlohmann::ordered_json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

VerifyResult verify_certificate(const nlohmann::ordered_json& cert, std::optional<int> horizon) {
  if (!cert.is_object() || !cert.contains("A") || !cert.contains("B") || !cert.contains("target"))
    throw DomainError("certificate needs fields A, B and target");
  VerifyResult r;
  try {
    r.target = cert.at("target").get<std::vector<std::int64_t>>();
    r.horizon = horizon ? *horizon : cert.value("H", static_cast<int>(r.target.size()));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed certificate: ") + e.what());
  }
  if (r.horizon < 1) throw DomainError("verify: H must be >= 1");
  if (r.horizon > static_cast<int>(r.target.size()))
    throw DomainError("verify: H exceeds the stored target length");
  r.target.resize(r.horizon);

  if (cert.contains("p")) {
    r.kind = "zpn";
    const ZpSet a = zp_set_from_json(cert.at("A"));
    const ZpSet b = zp_set_from_json(cert.at("B"));
    if (a.p() != b.p() || a.dim() != b.dim()) throw DomainError("verify: A and B live in different groups");
    const auto ga = growth_sequence_zp(a, r.horizon);
    const auto gb = growth_sequence_zp(b, r.horizon);
    for (int h = 0; h < r.horizon; ++h) r.measured.push_back(ga[h] - gb[h]);
  } else {
    r.kind = "int";
    const IntSet a = int_set_from_json(cert.at("A"));
    const IntSet b = int_set_from_json(cert.at("B"));
    if (a.empty() || b.empty()) throw DomainError("verify: A and B must be nonempty");
    r.measured = delta_sequence(a, b, r.horizon);
  }
  r.ok = r.measured == r.target;
  return r;
}

}  // namespace sumset
