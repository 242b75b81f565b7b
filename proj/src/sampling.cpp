#include "curldirac/sampling.hpp"

namespace curldirac {

Vec3 Rng::unit3() {
  while (true) {
    Vec3 v(normal(), normal(), normal());
    const double n = v.norm();
    if (n > 1e-6) return v / n;
  }
}

Bispinor random_bispinor(Rng& rng) {
  while (true) {
    Bispinor psi(rng.cnormal(), rng.cnormal(), rng.cnormal(), rng.cnormal());
    if (std::abs(psi.overlap()) >= 1e-2 * psi.norm2()) return psi;
  }
}

LorentzTransform random_rotation(Rng& rng) {
  // uniform on the quaternion sphere
  Eigen::Vector4d q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  while (q.norm() < 1e-6) q = Eigen::Vector4d(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  return LorentzTransform::rotation_quaternion(q(0), q.tail<3>());
}

LorentzTransform random_boost(Rng& rng, double max_rapidity) {
  return LorentzTransform::boost(rng.uniform(0.0, max_rapidity), rng.unit3());
}

LorentzTransform random_proper(Rng& rng, double max_rapidity) {
  // sequenced locals keep the draw order fixed
  const LorentzTransform r1 = random_rotation(rng);
  const LorentzTransform b = random_boost(rng, max_rapidity);
  const LorentzTransform r2 = random_rotation(rng);
  return r1 * b * r2;
}

LorentzTransform random_transform(Rng& rng, bool allow_improper, double max_rapidity) {
  LorentzTransform L = random_proper(rng, max_rapidity);
  if (!allow_improper) return L;
  const double pick = rng.uniform(0.0, 1.0);
  if (pick < 0.25) {
    L = LorentzTransform::space_inversion() * L;
  } else if (pick < 0.5) {
    L = LorentzTransform::time_inversion() * L;
  } else if (pick < 0.75) {
    L = LorentzTransform::space_inversion() * LorentzTransform::time_inversion() * L;
  }
  return L;
}

}  // namespace curldirac
