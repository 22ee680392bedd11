#include "wrlat/precision.hpp"

#include <cstdlib>
#include <string>

#include "wrlat/error.hpp"

namespace wrlat {

int Precision::tier() const {
  if (bits <= 0) throw Error(ErrorKind::BadParams, "precision must be positive");
  if (bits <= 53) return 53;
  if (bits <= 106) return 106;
  if (bits <= 212) return 212;
  if (bits <= kMaxPrecisionBits) return kMaxPrecisionBits;
  throw Error(ErrorKind::BadParams,
              "precision " + std::to_string(bits) + " exceeds " + std::to_string(kMaxPrecisionBits) + " bits");
}

Precision precision_from_environment() {
  const char* raw = std::getenv("WRLAT_PRECISION_BITS");
  if (raw == nullptr || *raw == '\0') return {};
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0') throw Error(ErrorKind::BadParams, std::string("bad WRLAT_PRECISION_BITS: ") + raw);
  Precision p{static_cast<int>(value)};
  p.tier();
  return p;
}

}  // namespace wrlat
