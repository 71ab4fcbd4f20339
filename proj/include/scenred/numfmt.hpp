#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

namespace scenred {

// Shortest decimal string that round-trips to the same double. Used for
// every number we write to CSV/JSON artifacts so that serial, threaded and
// remote runs produce byte-identical files.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Deterministic uniform in [0,1) from a 64-bit engine draw (53 mantissa
// bits); avoids implementation-defined std::uniform_real_distribution.
inline double uniform01(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

}  // namespace scenred
