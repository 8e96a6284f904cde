#pragma once

// Deterministic instance generators shared by the command-line tool and the
// acceptance suite.

#include <string>
#include <utility>
#include <vector>

#include "tci/domain.hpp"
#include "tci/transport.hpp"

namespace tci {

inline constexpr Seed kDefaultSeed = 1729;

/// Two uniform measures on `points` i.i.d. points of [0,1]^dim.
std::pair<DiscreteMeasure, DiscreteMeasure> random_ot_instance(int points, int dim, Seed seed);

struct NamedDomain {
  std::string name;
  Domain domain;
};

/// (0,1), [0,1]^2, the unit disk and the L-shape [0,2]x[0,1] ∪ [0,1]x[0,2].
std::vector<NamedDomain> standard_domains();

struct NestedPair {
  std::string name;
  ConvexBody K, B;  // K ⊆ B
};

/// Twenty nested pairs in dimensions 1 to 4 with |K|/|B| between 0.04 and
/// 0.8: concentric balls, cubes, l1-balls, mixed shapes, shifted images.
std::vector<NestedPair> nested_body_pairs();

/// Well-conditioned random affine map (condition number <= 10) with a
/// random shift.
std::pair<Matrix, Vector> random_affine_map(int dim, Seed seed);

}  // namespace tci
