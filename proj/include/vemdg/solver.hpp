#pragma once

#include "vemdg/problem.hpp"
#include "vemdg/slab_system.hpp"

namespace vemdg {

/// Full VEM-DG solve: VE-interpolated initial data, then the slab march.
SpaceTimeSolution solve_vemdg(const WaveProblem& problem, std::shared_ptr<const VemSpace> space,
                              const TimePartition& partition, const MarchOptions& options = {});

}  // namespace vemdg
