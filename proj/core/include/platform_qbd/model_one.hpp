#pragma once

#include <cstddef>
#include <utility>

#include "platform_qbd/dense_matrix.hpp"
#include "platform_qbd/level_structure.hpp"
#include "platform_qbd/params.hpp"

namespace pqbd {

// Matching-queue model: owners serve one seeker each, idle owners pair with
// waiting seekers at the matching rate. States are (waiting seekers, idle
// owners). The boundary level collects all states with fewer than N waiting
// seekers; each repeating level advances the waiting count by one while the
// idle-owner phase ranges over 0..N.
struct QbdBlocksOne {
  int n_owners = 1;

  // repeating-level blocks (phase dimension N+1)
  Mat down;   // one level down, pairing a seeker with an idle owner
  Mat local;
  Mat up;     // arrivals

  // boundary blocks: level 0 holds N(N+1) states
  Mat level0_local;
  Mat level0_up;
  Mat level1_down;

  BoundaryBand band;  // same boundary content in block-tridiagonal form

  std::size_t repeat_size() const { return static_cast<std::size_t>(n_owners) + 1; }
  std::size_t level0_size() const {
    return static_cast<std::size_t>(n_owners) * (n_owners + 1);
  }
};

// Individual boundary sub-level blocks; `k` is the waiting-seeker count.
Mat boundary_local_block_one(const ModelParams& p, int k);
Mat boundary_down_block_one(const ModelParams& p, int k);

Mat repeated_down_block_one(const ModelParams& p);
Mat repeated_local_block_one(const ModelParams& p);
Mat repeated_up_block_one(const ModelParams& p);

QbdBlocksOne build_blocks_one(const ModelParams& p);

// Maps between (waiting, idle) states and the (level, phase) layout used by
// the vectors this library produces.
struct StateIndexOne {
  int n_owners = 1;

  // waiting < N: level 0, phase waiting*(N+1)+idle; otherwise level
  // waiting-N+1 with phase = idle.
  std::pair<std::size_t, std::size_t> to_level_phase(std::size_t waiting,
                                                     std::size_t idle) const;
  std::pair<std::size_t, std::size_t> to_state(std::size_t level,
                                               std::size_t phase) const;
  // flat position in a truncation laid out level 0 first
  std::size_t flat_index(std::size_t waiting, std::size_t idle) const;
};

// Generator truncated after `levels` repeating levels; the final level is
// reflected (its upward rate folded into the diagonal block).
Mat assemble_truncated_generator_one(const ModelParams& p, std::size_t levels);

}  // namespace pqbd
