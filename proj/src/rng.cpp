#include "mlnetreg/rng.hpp"

#include <cmath>

namespace mlnetreg::rng {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master + 0x9E3779B97F4A7C15ULL);
  for (std::uint64_t id : path) {
    s = mix64(s ^ (0x9E3779B97F4A7C15ULL * (id + 0xD1B54A32D192ED03ULL)));
  }
  return s;
}

double Engine::normal(double mean, double sd) {
  if (have_spare_) {
    have_spare_ = false;
    return mean + sd * spare_;
  }
  // u1 in (0, 1] so the log stays finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return mean + sd * r * std::cos(theta);
}

}  // namespace mlnetreg::rng
