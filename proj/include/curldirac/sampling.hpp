#pragma once

#include <cstdint>
#include <random>

#include "curldirac/algebra.hpp"
#include "curldirac/lorentz.hpp"

namespace curldirac {

// Seeded draws used by tests and the CLI.  Every consumer passes an explicit
// seed so runs are reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  cd cnormal() { return cd(normal(), normal()); }
  Vec3 unit3();
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Gaussian components, redrawn until comfortably away from the degenerate
// set (|eta* xi| >= 1e-2 |psi|^2); the conditioning of the frame map grows
// like |psi|^2 / |eta* xi|.
Bispinor random_bispinor(Rng& rng);

LorentzTransform random_rotation(Rng& rng);
LorentzTransform random_boost(Rng& rng, double max_rapidity = 2.0);
// rotation * boost * rotation, dense in the proper orthochronous group
LorentzTransform random_proper(Rng& rng, double max_rapidity = 2.0);
// optionally composed with space and/or time inversion (one quarter each)
LorentzTransform random_transform(Rng& rng, bool allow_improper, double max_rapidity = 2.0);

}  // namespace curldirac
