#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dikin/model.hpp"

namespace dikin {

/// Feasible parameter interval {t : x + t d in F} for a feasible x.
struct Chord {
  double lo = 0.0;
  double hi = 0.0;
};

/// Solves one scalar quadratic per constraint. Slightly negative slacks at
/// x (rounding) are treated as zero. Throws Unbounded when the chord is
/// infinite in either direction.
Chord feasible_chord(const Intersection& set, const VectorXd& x,
                     const VectorXd& d);

/// Boundary point of F on the ray from `from` (strictly feasible) through
/// `through`.
VectorXd radial_boundary_point(const Intersection& set, const VectorXd& from,
                               const VectorXd& through);

struct SamplerOptions {
  int burn_in = 100;
  int thinning = 5;
};

/// Hit-and-run from `center`: uniform direction, exact chord, uniform point
/// on the chord. The first N samples of a longer run with the same seed
/// are the N-sample output.
std::vector<VectorXd> sample_feasible(const Intersection& set,
                                      const VectorXd& center, int count,
                                      std::uint64_t seed,
                                      const SamplerOptions& opts = {});

struct RangeEstimate {
  enum class Method { Grid, Sampling };

  /// Best feasible value found: an upper estimate of min q over F.
  double z_min_hat = 0.0;
  /// Best feasible value found: a lower estimate of max q over F.
  double z_max_hat = 0.0;
  VectorXd argmin_hat;
  VectorXd argmax_hat;
  long long samples_used = 0;
  Method method = Method::Sampling;
  /// Set when a grid sweep was merged into a sampling estimate.
  bool grid_checked = false;
};

std::string_view to_string(RangeEstimate::Method m);

/// Local minimization of q (or -q when maximizing) over F from a feasible x:
/// barrier path following on q + mu L with mu from 1e-3 to 1e-13 times the
/// local scale, modified Newton steps (Hessian eigenvalues replaced by their
/// magnitudes). `steps` caps the total Newton iterations. Returns x itself
/// when that is better; boundary starts are pulled towards `center` first.
VectorXd polish(const QuadraticObjective& q, const Intersection& set,
                const VectorXd& center, VectorXd x, int steps, bool maximize);

struct GridOptions {
  /// Points per axis; 0 picks a default by dimension (20001, 801, 121).
  int resolution = 0;
  int polish_steps = 200;
};

/// Dense sweep of a bounding box of F, extrema polished afterwards. The
/// box intersects the boxes of the positive-definite constraints with the
/// box of E(center; sqrt(m^2 + m)). Throws DimensionTooLarge for n > 3.
/// `center` is computed when not supplied.
RangeEstimate grid_extrema(const QuadraticObjective& q, const Intersection& set,
                           const GridOptions& opts = {},
                           const std::optional<VectorXd>& center = {});

struct RangeOptions {
  int polish_steps = 200;
  /// Samples are polished blockwise (best of each block), which keeps the
  /// estimate monotone in the sample count for a fixed seed.
  int polish_block = 64;
  /// Merge a grid sweep when n <= 3.
  bool grid_cross_check = true;
  GridOptions grid;
};

/// Sampling estimate: hit-and-run samples, their radial boundary points and
/// any `extra_points`, with blockwise polishing; widened by grid_extrema for
/// n <= 3.
RangeEstimate estimate_range(const QuadraticObjective& q,
                             const Intersection& set, const VectorXd& center,
                             int count, std::uint64_t seed,
                             const std::vector<VectorXd>& extra_points = {},
                             const RangeOptions& opts = {});

}  // namespace dikin
