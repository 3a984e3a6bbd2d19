#ifndef HBA_TOOLS_KERNEL_CHECKS_HPP_
#define HBA_TOOLS_KERNEL_CHECKS_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hba/kernels.hpp"

namespace hba::tools {

using Rng = std::mt19937_64;

// Interior point reached by a short random walk inside Dikin ellipsoids
// around the kernel's default interior point.
Vector sample_interior(const Kernel& h, Rng& rng, int steps = 6, double radius = 0.5);

// Random direction with |u|_x = 1.
Vector sample_direction(const Kernel& h, const Vector& x, Rng& rng);

// Point y with d_nu(x, y) = r along a random direction.
Vector point_at_distance(const Kernel& h, const Vector& x, double r, Rng& rng);

// Last interior point before the boundary along a random ray from x, found
// by bisection. Returns false if the ray never leaves the domain.
bool boundary_point(const Kernel& h, const Vector& x, Rng& rng, Vector* xb);

struct CheckResult {
  std::string name;
  bool passed = true;
  int draws = 0;
  int failures = 0;
  double worst = 0.0;  // largest normalized violation seen
  std::string detail;
};

CheckResult check_finite_differences(const Kernel& h, Rng& rng, int draws = 50,
                                     double rel_tol = 1e-5);
CheckResult check_bregman_sandwich(const Kernel& h, Rng& rng, int draws = 200,
                                   double slack = 1e-8);
CheckResult check_line_inequality(const Kernel& h, Rng& rng, int draws = 50);
// h along x_k = x_b + 2^-k (x - x_b): passes when h exceeds 1e6 or keeps
// growing by at least 0.9 ln 2 per halving over k in [20, 40].
CheckResult check_barrier_blowup(const Kernel& h, Rng& rng, int draws = 5);
CheckResult check_theta(const Kernel& h, Rng& rng, int draws = 50);

struct KernelCheckReport {
  std::string kernel;
  std::vector<CheckResult> checks;
  bool passed() const;
};

KernelCheckReport run_kernel_checks(const Kernel& h, std::uint64_t seed);

}  // namespace hba::tools

#endif  // HBA_TOOLS_KERNEL_CHECKS_HPP_
