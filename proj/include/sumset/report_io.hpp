#pragma once

// Parsing, file output and independent re-verification of certificates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sumset {

/// Comma-separated signed integers, e.g. "1,-2,0". Throws DomainError.
std::vector<std::int64_t> parse_int_list(const std::string& text);

/// Writes to `path`, or to stdout when the path is empty or "-".
void write_text(const std::string& path, const std::string& text);

nlohmann::ordered_json read_json_file(const std::string& path);

/// Stable serialization: two-space indent, trailing newline.
std::string dump(const nlohmann::ordered_json& j);

struct VerifyResult {
  std::string kind;  // "int" or "zpn"
  int horizon = 0;
  std::vector<std::int64_t> target;
  std::vector<std::int64_t> measured;  // recomputed, never read from the file
  bool ok = false;
};

/// Recomputes |hA| - |hB| from the stored sets and compares with the stored
/// target. `horizon` overrides the stored H. Malformed input throws DomainError.
VerifyResult verify_certificate(const nlohmann::ordered_json& cert, std::optional<int> horizon = std::nullopt);

}  // namespace sumset
