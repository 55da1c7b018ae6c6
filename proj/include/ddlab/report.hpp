#pragma once

// Uniform check report shared by every verification routine, plus the
// instance digest used to tie a report back to its inputs.

#include "ddlab/interval.hpp"

#include "json.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ddlab {

/// First 16 hex digits of the SHA-256 of `text`.
inline std::string digest(std::string_view text) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < 8 && i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

struct CheckReport {
  std::string check;
  std::string metric = "none";
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::string lhs;
  std::string rhs_lo;
  std::string rhs_hi;
  Verdict verdict = Verdict::Measured;
  unsigned precision_bits = 0;
  std::string instance_digest;
  nlohmann::json details = nlohmann::json::object();

  [[nodiscard]] bool failed() const { return verdict == Verdict::Violated; }

  void set_exact(const std::string& l, const std::string& r, bool holds) {
    lhs = l;
    rhs_lo = r;
    rhs_hi = r;
    verdict = holds ? Verdict::Holds : Verdict::Violated;
  }

  void set_rhs(const Interval& r) {
    rhs_lo = r.lower_str();
    rhs_hi = r.upper_str();
  }
};

inline nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["instance_digest"] = r.instance_digest;
  j["metric"] = r.metric;
  j["n"] = r.n;
  j["m"] = r.m;
  j["lhs"] = r.lhs;
  j["rhs"] = nlohmann::json::array({r.rhs_lo, r.rhs_hi});
  j["verdict"] = std::string(to_string(r.verdict));
  j["precision_bits"] = r.precision_bits;
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

}  // namespace ddlab
