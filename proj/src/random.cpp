#include "dpbandit/random.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

namespace dpbandit {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return splitmix64(base ^ splitmix64(index + 0x9E3779B97F4A7C15ULL));
}

double RandomStream::uniform() {
  // Midpoints of a 2^-52 grid: representable exactly, never 0 or 1.
  return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

double RandomStream::normal() {
  const double u = uniform();
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

}  // namespace dpbandit
