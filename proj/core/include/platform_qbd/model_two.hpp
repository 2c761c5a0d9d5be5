#pragma once

#include <cstddef>
#include <vector>

#include "platform_qbd/dense_matrix.hpp"
#include "platform_qbd/level_structure.hpp"
#include "platform_qbd/params.hpp"

namespace pqbd {

// Two-stage service model: each engaged owner walks through a matching stage
// (rate gamma) and a service stage (rate mu); the pair of stages forms a
// phase-type law with the generalized-Erlang representation below. The level
// counts seekers beyond the pool capacity; within a level every working
// owner carries a stage in {1,2}, giving 2^n phases for n working owners.

// Hard cap on the pool size: the phase space doubles with every owner.
inline constexpr int kMaxOwnersTwo = 10;

struct PhRep {
  Vec alpha;  // initial stage distribution (row)
  Mat t;      // transient generator
  Vec exit;   // absorption rates
};

PhRep ph_generalized_erlang(double gamma, double mu);

// Lexicographic rank of a stage tuple within its sub-level (first owner most
// significant); entries must be 1 or 2.
std::size_t phase_index_two(const std::vector<int>& stages);
std::vector<int> index_phase_two(int n, std::size_t index);
// Offset of sub-level n inside the boundary level (sub-levels 0..N-1).
std::size_t level0_offset_two(int n);

struct QbdBlocksTwo {
  int n_owners = 1;

  Mat up;     // arrivals while the pool is saturated
  Mat local;
  Mat down;   // a completion immediately restarts on the queue's head

  Mat level0_local;
  Mat level0_up;
  Mat level1_down;

  BoundaryBand band;

  std::size_t repeat_size() const { return std::size_t{1} << n_owners; }
  std::size_t level0_size() const { return (std::size_t{1} << n_owners) - 1; }
};

// Stage generator for n working owners: the n-fold Kronecker sum of t.
Mat stage_generator_two(const PhRep& ph, int n);
// Expansion from n to n+1 working owners: a fresh owner starts in stage 1.
Mat arrival_expand_two(const PhRep& ph, int n);
// Contraction from n to n-1: the finishing owner leaves, everyone else keeps
// their stage (the sum of single-position exit maps).
Mat completion_contract_two(const PhRep& ph, int n);

QbdBlocksTwo build_blocks_two(const ModelParams& p);

// Stationary stage distribution of one busy owner cycling through the two
// stages: (mu, gamma) / (gamma + mu).
Vec drift_vector_two(double gamma, double mu);

Mat assemble_truncated_generator_two(const ModelParams& p, std::size_t levels);

}  // namespace pqbd
