#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "crplab/matrix.hpp"

namespace crplab {

enum class CoeffDomain { integer, binary };

struct CvpResult {
  std::vector<long long> coeffs;
  double dist = 0.0;
  CoeffDomain domain = CoeffDomain::integer;
  // Optimality is guaranteed among all coefficient vectors whose distance is
  // at most this bound. Exhaustive binary searches certify everything.
  double certified_radius = 0.0;
};

struct EnumOptions {
  std::uint64_t node_cap = 100'000'000;
};

// Exact closest vector over integer coefficients within `initial_radius`:
// minimizes ||B x - t||_p over all x with distance <= initial_radius, which
// is the global minimum whenever initial_radius is at least some feasible
// distance (the caller's obligation; a Babai point is always evaluated as a
// fallback seed). Ties are broken towards the colexicographically smallest
// coefficient vector. Matrices tagged with an AStructure use the block
// decomposition for pruning; plain matrices go through a triangular
// factorization and box enumeration. Exceeding the node cap raises
// ResourceError.
CvpResult cvp_enumerate(const DenseMatrix& B, std::span<const double> t, PNorm p,
                        double initial_radius, const EnumOptions& opts = {});

// Exact minimum of ||B x - t||_p over all 2^cols binary coefficient vectors.
// Colexicographic tie-break; cols above the cap raise ResourceError.
CvpResult binary_cvp(const DenseMatrix& B, std::span<const double> t, PNorm p,
                     int cols_cap = 24);

struct GridSearchResult {
  double value = 0.0;
  std::vector<double> witness;
};

// max over w in {0, 1/g, ..., 1}^cols of the binary CVP distance to B w.
// A certified lower bound on lindisc_p(B); returns a maximizing w.
GridSearchResult lindisc_grid_lb(const DenseMatrix& B, PNorm p, int g,
                                 std::uint64_t grid_cap = 4'000'000);

struct MuBoundResult {
  double value = 0.0;
  std::vector<double> witness;
  CvpResult best;
};

// max over the supplied coefficient targets w in [0,1]^cols of the exact
// integer CVP distance from B w. A certified lower bound on mu_p(L(B)).
MuBoundResult mu_lower_bound(const DenseMatrix& B, PNorm p,
                             const std::vector<std::vector<double>>& targets,
                             const EnumOptions& opts = {});

}  // namespace crplab
