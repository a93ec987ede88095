#include "medianwalk/util.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "medianwalk/error.hpp"

namespace mw {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::NotMedian: return "NotMedian";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::SizeBudgetExceeded: return "SizeBudgetExceeded";
    case ErrorCode::WallOutOfRange: return "WallOutOfRange";
    case ErrorCode::IntegrityFailure: return "IntegrityFailure";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ChainInvalid: return "ChainInvalid";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::DefiningGraphMismatch: return "DefiningGraphMismatch";
    case ErrorCode::PieceMismatch: return "PieceMismatch";
    case ErrorCode::RadiusZero: return "RadiusZero";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ProbSumInvalid: return "ProbSumInvalid";
    case ErrorCode::NotGenerating: return "NotGenerating";
    case ErrorCode::TooFewTrials: return "TooFewTrials";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::FileMissing: return "FileMissing";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Internal, "sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 15]);
  }
  return out;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  if (std::string_view(buf) == "-0") return "0";
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  const double r = std::strtod(format_real(x).c_str(), nullptr);
  return r == 0.0 ? 0.0 : r;
}

}  // namespace mw
