#pragma once

#include <cstdint>
#include <iterator>
#include <vector>

namespace anderson {

enum class DistKind { Uniform, Bernoulli, Exponential };

/// One-site disorder law plus the sampling bookkeeping (master seed,
/// number of realizations). All supported laws are non-negative and
/// bounded so lattice entries stay finite.
struct DisorderSpec {
  DistKind distribution = DistKind::Uniform;
  double v_max = 1.0;  // uniform upper bound / bernoulli amplitude
  double p = 0.5;      // bernoulli success probability
  double rate = 1.0;   // exponential rate
  double cap = 10.0;   // exponential hard cap
  std::uint64_t seed = 0;
  int realization_count = 1;
};

/// One disorder realization on the single-particle lattice sites.
struct PotentialField {
  int realization = 0;
  std::vector<double> values;
};

// Counter-based draw: a pure function of (seed, realization, site), so the
// same triple yields the same value on every platform and in any call order.
double sample_site(const DisorderSpec& spec, int realization, std::int64_t site);

PotentialField sample_field(const DisorderSpec& spec, std::int64_t sites,
                            int realization_index);

/// Lazily yields realizations 0..R-1, each equal to the sample_field output.
class RealizationStream {
 public:
  RealizationStream(const DisorderSpec& spec, std::int64_t sites)
      : spec_(spec), sites_(sites) {}

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = PotentialField;
    using difference_type = std::ptrdiff_t;

    iterator(const DisorderSpec* spec, std::int64_t sites, int index)
        : spec_(spec), sites_(sites), index_(index) {}

    PotentialField operator*() const { return sample_field(*spec_, sites_, index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    bool operator==(const iterator& other) const { return index_ == other.index_; }
    bool operator!=(const iterator& other) const { return !(*this == other); }
    int index() const { return index_; }

   private:
    const DisorderSpec* spec_;
    std::int64_t sites_;
    int index_;
  };

  iterator begin() const { return iterator(&spec_, sites_, 0); }
  iterator end() const { return iterator(&spec_, sites_, spec_.realization_count); }

 private:
  DisorderSpec spec_;
  std::int64_t sites_;
};

}  // namespace anderson
