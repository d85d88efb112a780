#include "anderson/disorder.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anderson {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer: full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Folds the (seed, realization, site) counter into one well-mixed word.
inline std::uint64_t counter_key(std::uint64_t seed, std::uint64_t realization,
                                 std::uint64_t site) {
  std::uint64_t z = mix64(seed + kGolden);
  z = mix64(z ^ (realization + kGolden));
  z = mix64(z ^ (site + kGolden));
  return z;
}

// Uniform in [0, 1) with 53 random bits.
inline double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

double sample_site(const DisorderSpec& spec, int realization, std::int64_t site) {
  const double u = unit_double(counter_key(
      spec.seed, static_cast<std::uint64_t>(realization),
      static_cast<std::uint64_t>(site)));
  switch (spec.distribution) {
    case DistKind::Uniform:
      return u * spec.v_max;
    case DistKind::Bernoulli:
      return u < spec.p ? spec.v_max : 0.0;
    case DistKind::Exponential: {
      const double draw = -std::log1p(-u) / spec.rate;
      return draw < spec.cap ? draw : spec.cap;
    }
  }
  return 0.0;
}

PotentialField sample_field(const DisorderSpec& spec, std::int64_t sites,
                            int realization_index) {
  if (realization_index < 0 || realization_index >= spec.realization_count) {
    throw std::invalid_argument(
        "sample_field: realization index " + std::to_string(realization_index) +
        " outside [0, " + std::to_string(spec.realization_count) + ")");
  }
  if (sites < 0) throw std::invalid_argument("sample_field: negative site count");
  PotentialField field;
  field.realization = realization_index;
  field.values.resize(static_cast<std::size_t>(sites));
  for (std::int64_t s = 0; s < sites; ++s) {
    field.values[static_cast<std::size_t>(s)] =
        sample_site(spec, realization_index, s);
  }
  return field;
}

}  // namespace anderson
