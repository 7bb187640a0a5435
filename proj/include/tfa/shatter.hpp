#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfa/holder.hpp"

namespace tfa {

// Signed sums of compactly supported tent bumps: [0,1]^{d0} is split into
// M^{d0} cubes of side l = 1/M; the bump on a cube peaks at (l/2)^alpha / 2
// at the center, vanishes on the boundary, and is linear along rays from the
// center (a sup-norm tent). Every sign assignment phi yields a member of the
// unit Holder ball.
struct ShatterFamily {
  int M = 1;
  int d0 = 1;
  double alpha = 1.0;

  double side() const { return 1.0 / static_cast<double>(M); }
  double peak() const;  // (l/2)^alpha / 2

  std::int64_t n_points() const;  // M^{d0}

  // Cube index theta packed lexicographically (coordinate 0 least significant).
  std::vector<int> theta_of(std::int64_t flat) const;
  std::vector<double> center(std::int64_t flat) const;

  double zeta(const std::vector<double>& x, std::int64_t flat) const;
  // f_phi(x) with the sign pattern given as bits of phi over flat indices.
  double f_phi(const std::vector<double>& x, std::uint64_t phi) const;

  HolderTarget as_target(std::uint64_t phi) const;  // scalar output, K = 1
};

ShatterFamily build_shatter_family(int M, int d0, double alpha);

// The lower-bound grid size for a given accuracy: floor((9 eps / 2)^{-1/alpha}).
int shatter_m_for_epsilon(double epsilon, double alpha);

struct ShatterPatternResult {
  std::uint64_t phi = 0;
  bool family_signs_ok = false;
  bool network_signs_ok = false;
  std::string failure;  // names the first failing (phi, theta) if any
};

struct ShatterReport {
  std::int64_t n_points = 0;
  std::int64_t n_patterns = 0;
  std::vector<ShatterPatternResult> patterns;
  bool all_ok() const {
    for (const ShatterPatternResult& p : patterns)
      if (!p.family_signs_ok || !p.network_signs_ok) return false;
    return true;
  }
};

// Checks that the family realizes every sign pattern at the cube centers and
// that the constructed approximators g_phi match those signs at the same
// points. The evaluation points are the centers, which the builder aligns
// with quantization cube corners (dyadic widths delta = 3/(8M), step 1/(2M)).
ShatterReport verify_shattering(const ShatterFamily& fam, std::uint64_t seed,
                                std::int64_t max_points = 4);

}  // namespace tfa
