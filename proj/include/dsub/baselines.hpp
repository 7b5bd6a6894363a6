#pragma once

#include "dsub/types.hpp"

#include <span>
#include <vector>

namespace dsub {

/// n of 0..N-1 uniformly without replacement, in draw order.
std::vector<Index> random_subsample(Index rows, Index n, Rng& rng);

/// Greedy max-min selection among `candidates` (rows of `data`) starting at
/// candidates[start]: each next pick maximizes the distance to its nearest
/// already-picked point. Ties go to the earliest candidate.
std::vector<Index> farthest_point_from(const Matrix& data, std::span<const Index> candidates, Index n,
                                       Index start);

/// Partitions the rows uniformly at random into `splits` blocks and runs
/// greedy max-min in each from a uniformly chosen seed row. Block b gets
/// ceil(n / splits) picks for b < n mod splits and floor(n / splits) after;
/// a block smaller than its quota hands the shortfall to the next blocks.
/// Output is concatenated in block order.
std::vector<Index> farthest_point_subsample(const Matrix& data, Index n, Index splits, Rng& rng);

}  // namespace dsub
