#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "dikin/model.hpp"

namespace dikin {

enum class InstanceKind { Balls, Mixed, HalfspaceCapped };

std::string_view to_string(InstanceKind kind);
std::optional<InstanceKind> parse_instance_kind(std::string_view name);

struct GeneratorOptions {
  int n = 2;
  int m = 2;
  std::uint64_t seed = 1;
  InstanceKind kind = InstanceKind::Balls;
  /// Eigenvalue spread of each full-rank constraint matrix.
  double cond = 10.0;
  /// Lower bound on g_i(0).
  double margin = 0.1;
  /// Radius of the capping ball used by HalfspaceCapped.
  double cap_radius = 5.0;
};

/// Random bounded instance whose constraints all hold at the origin with
/// slack >= margin.
///   Balls: every Q_i = V diag(s) V^T positive definite, V from the
///     eigenvectors of A^T A + 0.1 I, spectrum mapped onto [1, cond].
///   Mixed: constraint 0 is a ball; the rest alternate halfspaces and
///     rank-deficient PSD cylinders.
///   HalfspaceCapped: halfspaces and cylinders plus a final ball of radius
///     cap_radius about the origin.
/// The objective is a random symmetric indefinite quadratic. Throws
/// InvalidArgument for n < 1, m < 1, cond < 1 or margin <= 0.
ProblemInstance generate_instance(const GeneratorOptions& opts);

/// {x in R : x^2 <= 1} with q(x) = -x^2 and interior hint 0.
ProblemInstance example1_instance();

/// Deterministic instance schedule used by the property suites:
/// n = 2 + (seed - 1) % 9, m = 1 + 5 seed % 8, kinds cycling with seed.
GeneratorOptions suite_options(std::uint64_t seed);

}  // namespace dikin
