#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace lift {

// Seeded generator used for every random draw in the project. Components get
// independent streams through split(), which mixes the parent seed with a label.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }
  Rng split(std::string_view label) const;

  double uniform(double lo, double hi);
  double normal(double mean, double stddev);
  std::uint64_t poisson(double mean);
  std::size_t index(std::size_t n);  // uniform in [0, n)

  std::mt19937_64& engine() { return engine_; }

  std::string state() const;
  void restore(const std::string& state);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace lift
