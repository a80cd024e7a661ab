#include "dispbound/hyperbolic.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dispbound/minimax.hpp"

namespace dispbound {

namespace {

constexpr double kClassifyTol = 1e-9;

MoebiusMap pairing_map(const Disk& from, const Disk& to, double twist) {
  // z -> to.center + r1 r2 e^{i twist} / (z - from.center) maps the exterior
  // of `from` onto the interior of `to` (boundary to boundary).
  const Complex k = std::polar(from.radius * to.radius, twist);
  return MoebiusMap(to.center, k - to.center * from.center, Complex(1.0, 0.0), -from.center);
}

}  // namespace

MoebiusMap::MoebiusMap(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {
  const Complex det = a_ * d_ - b_ * c_;
  if (std::abs(det) < 1e-300) throw std::invalid_argument("singular Moebius matrix");
  const Complex s = std::sqrt(det);
  a_ /= s;
  b_ /= s;
  c_ /= s;
  d_ /= s;
}

H3Point apply(const MoebiusMap& m, const H3Point& p) {
  if (!(p.t > 0.0)) throw std::domain_error("H3 point must have positive height");
  const Complex num = m.a() * p.z + m.b();
  const Complex den = m.c() * p.z + m.d();
  const double abs_c_t = std::abs(m.c()) * p.t;
  const double D = std::norm(den) + abs_c_t * abs_c_t;
  H3Point out;
  out.z = (num * std::conj(den) + m.a() * std::conj(m.c()) * (p.t * p.t)) / D;
  out.t = p.t / D;
  return out;
}

double distance(const H3Point& p, const H3Point& q) {
  if (!(p.t > 0.0) || !(q.t > 0.0)) throw std::domain_error("H3 point must have positive height");
  const double dz = std::norm(p.z - q.z);
  const double dt = (p.t - q.t) * (p.t - q.t);
  const double c = 1.0 + (dz + dt) / (2.0 * p.t * q.t);
  return std::acosh(c);
}

IsometryClass classify(const MoebiusMap& m) {
  constexpr double kExact = 1e-12;
  const Complex tr2 = m.trace() * m.trace();
  const double dist4 = std::abs(tr2 - Complex(4.0, 0.0));
  if (dist4 <= kExact) {
    const double off = std::abs(m.b()) + std::abs(m.c());
    const double diag = std::abs(m.a() - m.d());
    return off + diag < kExact ? IsometryClass::Identity : IsometryClass::Parabolic;
  }
  if (dist4 < kClassifyTol) return IsometryClass::Indeterminate;
  if (std::abs(tr2.imag()) < kClassifyTol) {
    const double re = tr2.real();
    if (std::abs(re) <= kExact) return IsometryClass::Elliptic;  // order two rotation
    if (std::abs(re) < kClassifyTol) return IsometryClass::Indeterminate;
    if (re > 0.0 && re < 4.0) return IsometryClass::Elliptic;
  }
  return IsometryClass::Loxodromic;
}

SchottkyPair sample_schottky(std::uint64_t seed, const SchottkyConfig& cfg) {
  if (!(cfg.margin_factor > 0.0) || cfg.margin_factor >= 1.0)
    throw std::invalid_argument("margin factor must lie in (0,1)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    SchottkyPair pair;
    // Centers near the corners of a square on the unit circle, with jitter.
    const double phase = 2.0 * M_PI * unit(rng);
    for (int i = 0; i < 4; ++i) {
      const double angle = phase + (M_PI / 2.0) * i + 0.25 * (unit(rng) - 0.5);
      pair.disks[static_cast<std::size_t>(i)].center = std::polar(1.0, angle);
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        min_gap = std::min(min_gap, std::abs(pair.disks[static_cast<std::size_t>(i)].center -
                                             pair.disks[static_cast<std::size_t>(j)].center));
    const double rmax = 0.5 * min_gap * cfg.margin_factor;
    for (auto& disk : pair.disks)
      disk.radius = rmax * (1.0 - cfg.radius_jitter * unit(rng));

    const double twist_xi = M_PI + 0.5 * (unit(rng) - 0.5);
    const double twist_eta = M_PI + 0.5 * (unit(rng) - 0.5);
    pair.xi = pairing_map(pair.disks[0], pair.disks[1], twist_xi);
    pair.eta = pairing_map(pair.disks[2], pair.disks[3], twist_eta);

    // Certificate: pairwise disjointness with margin, boundary samples of
    // each disk landing on the paired boundary, exterior probes landing
    // strictly inside, and loxodromic xi, eta, xi*eta.
    pair.disjointness_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const auto& di = pair.disks[static_cast<std::size_t>(i)];
        const auto& dj = pair.disks[static_cast<std::size_t>(j)];
        pair.disjointness_margin =
            std::min(pair.disjointness_margin,
                     std::abs(di.center - dj.center) - di.radius - dj.radius);
      }

    auto pairing_slack = [&](const MoebiusMap& m, const Disk& from, const Disk& to) {
      double slack = std::numeric_limits<double>::infinity();
      for (int s = 0; s < cfg.boundary_samples; ++s) {
        const Complex u = from.center + std::polar(from.radius, 2.0 * M_PI * s / cfg.boundary_samples);
        slack = std::min(slack, to.radius * (1.0 + 1e-9) - std::abs(m.apply_boundary(u) - to.center));
      }
      // A far exterior point must land well inside the target disk.
      const Complex far = from.center + Complex(50.0, 37.0);
      slack = std::min(slack, to.radius - std::abs(m.apply_boundary(far) - to.center));
      return slack;
    };
    pair.pairing_margin = std::min(
        std::min(pairing_slack(pair.xi, pair.disks[0], pair.disks[1]),
                 pairing_slack(pair.xi.inverse(), pair.disks[1], pair.disks[0])),
        std::min(pairing_slack(pair.eta, pair.disks[2], pair.disks[3]),
                 pairing_slack(pair.eta.inverse(), pair.disks[3], pair.disks[2])));

    const bool loxo = classify(pair.xi) == IsometryClass::Loxodromic &&
                      classify(pair.eta) == IsometryClass::Loxodromic &&
                      classify(pair.xi * pair.eta) == IsometryClass::Loxodromic;
    pair.certificate_valid =
        pair.disjointness_margin > 0.0 && pair.pairing_margin >= 0.0 && loxo;
    if (pair.certificate_valid) return pair;
  }
  throw std::runtime_error("failed to sample a certified Schottky pair after " +
                           std::to_string(cfg.max_attempts) + " attempts");
}

MoebiusMap word_to_matrix(const Word& w, const MoebiusMap& xi, const MoebiusMap& eta) {
  if (w.rank() != 2) throw std::invalid_argument("matrix evaluation needs a rank-2 word");
  const MoebiusMap gens[2] = {xi, eta};
  MoebiusMap m = MoebiusMap::identity();
  int since_renorm = 0;
  for (int i = 0; i < w.length(); ++i) {
    const Letter l = w.letter(i);
    const MoebiusMap& g = gens[l.generator - 1];
    m = m * (l.inverted ? g.inverse() : g);
    if (++since_renorm == 8) {
      m = m.normalized();  // control determinant drift on long products
      since_renorm = 0;
    }
  }
  return m;
}

BoundReport test_bound(const SchottkyPair& pair, int radius, const H3Point& z0,
                       const EnumerationConfig& cfg) {
  if (radius < 2) throw std::invalid_argument("the bound needs radius >= 2");
  BoundReport rep;
  rep.radius = radius;
  rep.bound = 0.5 * std::log(closed_form_alpha(2, radius));
  rep.hypothesis_certified = pair.certificate_valid;

  std::vector<Word> ball = enumerate_ball_interior(2, radius + 1, cfg);  // lengths 1..k
  for (const Word& w : ball) {
    const MoebiusMap m = word_to_matrix(w, pair.xi, pair.eta);
    const double d = distance(z0, apply(m, z0));
    if (d > rep.max_displacement) {
      rep.max_displacement = d;
      rep.argmax_word = word_to_string(w);
    }
  }
  rep.margin = rep.max_displacement - rep.bound;
  return rep;
}

BasePointSearch minimize_over_base_points(const SchottkyPair& pair, int radius,
                                          int grid_per_axis) {
  BasePointSearch best;
  double best_D = std::numeric_limits<double>::infinity();

  auto consider = [&](const H3Point& z0) {
    const BoundReport rep = test_bound(pair, radius, z0);
    if (rep.max_displacement < best_D) {
      best_D = rep.max_displacement;
      best.best_z0 = z0;
      best.report = rep;
    }
  };

  for (int ix = 0; ix < grid_per_axis; ++ix)
    for (int iy = 0; iy < grid_per_axis; ++iy)
      for (int it = 0; it < grid_per_axis; ++it) {
        H3Point p;
        p.z = Complex(-2.0 + 4.0 * ix / (grid_per_axis - 1), -2.0 + 4.0 * iy / (grid_per_axis - 1));
        p.t = std::exp(std::log(0.1) + (std::log(10.0) - std::log(0.1)) * it / (grid_per_axis - 1));
        consider(p);
      }

  // Local coordinate descent around the best grid point; halve the step
  // whenever no neighbor improves.
  double step = 0.5;
  for (int round = 0; round < 24 && step > 1e-6; ++round) {
    const double before = best_D;
    const H3Point center = best.best_z0;
    for (double d : {step, -step}) {
      H3Point p = center;
      p.z = center.z + Complex(d, 0.0);
      consider(p);
      p = center;
      p.z = center.z + Complex(0.0, d);
      consider(p);
      p = center;
      p.t = center.t * std::exp(d);
      consider(p);
    }
    if (best_D >= before) step *= 0.5;
  }
  return best;
}

}  // namespace dispbound
