#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "dispbound/freegroup.hpp"

namespace dispbound {

using Complex = std::complex<double>;

// Orientation-preserving isometry of H^3 as a PSL(2,C) matrix, normalized to
// determinant 1 on construction (defined up to sign).
class MoebiusMap {
 public:
  MoebiusMap() : a_(1.0), b_(0.0), c_(0.0), d_(1.0) {}
  MoebiusMap(Complex a, Complex b, Complex c, Complex d);

  static MoebiusMap identity() { return MoebiusMap(); }

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Complex c() const { return c_; }
  Complex d() const { return d_; }
  Complex trace() const { return a_ + d_; }
  Complex det() const { return a_ * d_ - b_ * c_; }

  MoebiusMap inverse() const { return raw(d_, -b_, -c_, a_); }
  Complex apply_boundary(Complex z) const { return (a_ * z + b_) / (c_ * z + d_); }

  // Renormalizes the determinant to 1; products are left raw because the
  // determinant of a large-entry product is a catastrophic cancellation and
  // renormalizing against it injects noise.
  MoebiusMap normalized() const { return MoebiusMap(a_, b_, c_, d_); }

  friend MoebiusMap operator*(const MoebiusMap& m, const MoebiusMap& n) {
    return raw(m.a_ * n.a_ + m.b_ * n.c_, m.a_ * n.b_ + m.b_ * n.d_,
               m.c_ * n.a_ + m.d_ * n.c_, m.c_ * n.b_ + m.d_ * n.d_);
  }

 private:
  static MoebiusMap raw(Complex a, Complex b, Complex c, Complex d) {
    MoebiusMap m;
    m.a_ = a;
    m.b_ = b;
    m.c_ = c;
    m.d_ = d;
    return m;
  }

  Complex a_, b_, c_, d_;
};

// Point of the upper half-space model: boundary coordinate z, height t > 0.
struct H3Point {
  Complex z{0.0, 0.0};
  double t = 1.0;
};

// Poincare extension of the boundary action.
H3Point apply(const MoebiusMap& m, const H3Point& p);

// cosh d = 1 + (|z1-z2|^2 + (t1-t2)^2) / (2 t1 t2).
double distance(const H3Point& p, const H3Point& q);

enum class IsometryClass { Identity, Parabolic, Elliptic, Loxodromic, Indeterminate };

// Trace classification: real tr^2 in [0,4) -> elliptic, tr^2 = 4 ->
// parabolic (or identity), anything else -> loxodromic. A 1e-9 band around
// the boundary cases reports Indeterminate.
IsometryClass classify(const MoebiusMap& m);

struct Disk {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

// Two loxodromic maps pairing four pairwise disjoint disks: xi maps the
// exterior of disks[0] onto the interior of disks[1], eta likewise for
// disks[2] and disks[3]. A valid certificate makes <xi, eta> free, discrete,
// purely loxodromic and geometrically finite by ping-pong.
struct SchottkyPair {
  MoebiusMap xi, eta;
  std::array<Disk, 4> disks;
  double disjointness_margin = 0.0;  // smallest gap between distinct disks
  double pairing_margin = 0.0;       // worst boundary-image containment slack
  bool certificate_valid = false;
};

struct SchottkyConfig {
  double margin_factor = 0.5;      // disk radius as a fraction of half the min gap
  double radius_jitter = 0.3;      // relative radius variation between disks
  int boundary_samples = 64;
  int max_attempts = 64;
};

// Seeded sampler; throws std::runtime_error after max_attempts failures.
SchottkyPair sample_schottky(std::uint64_t seed, const SchottkyConfig& cfg = {});

// The matrix of a reduced word under xi, eta: left-folded with determinant
// renormalization every 8 multiplications.
MoebiusMap word_to_matrix(const Word& w, const MoebiusMap& xi, const MoebiusMap& eta);

struct BoundReport {
  int radius = 2;
  double max_displacement = 0.0;    // D = max over Gamma_k of dist(z0, g z0)
  double bound = 0.0;               // 0.5 log(12 3^{k-1} - 3)
  double margin = 0.0;              // D - bound; the theorem demands >= 0
  std::string argmax_word;
  bool hypothesis_certified = false;  // false when the pair lacks a certificate
};

// Empirical check of the displacement lower bound over Gamma_k (all
// non-identity words of length <= k) at base point z0.
BoundReport test_bound(const SchottkyPair& pair, int radius, const H3Point& z0,
                       const EnumerationConfig& cfg = {});

// Coarse grid + local refinement over base points: an upper bound on the
// group's min-max displacement for Gamma_k.
struct BasePointSearch {
  H3Point best_z0;
  BoundReport report;
};
BasePointSearch minimize_over_base_points(const SchottkyPair& pair, int radius,
                                          int grid_per_axis = 5);

}  // namespace dispbound
