/* Copyright 2026 The peekmap Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PEEKMAP_EIGENCAM_HPP_
#define PEEKMAP_EIGENCAM_HPP_

#include <vector>

#include "peekmap/tensor.hpp"

namespace peekmap {

struct PrincipalDirectionOptions {
  double tolerance = 1e-8;
  int max_iterations = 1000;
};

// Leading right singular vector of the uncentered (h*w) x d activation
// matrix M (row = spatial location, column = channel). The sign makes
// sum(M v) >= 0. A zero matrix yields the first basis vector.
//
// Computed by power iteration on the Gram matrix M^T M; if that does not
// converge (nearly repeated leading eigenvalue) a cyclic Jacobi
// eigensolver is used instead. Throws kNumeric naming the layer if both fail.
std::vector<double> FirstPrincipalDirection(
    const FeatureStack& stack, const PrincipalDirectionOptions& options = {});

// map(i,j) = sum_k M[(i,j),k] v_k, no rectification.
SaliencyMap EigenCamMap(const FeatureStack& stack,
                        const PrincipalDirectionOptions& options = {});

}  // namespace peekmap

#endif  // PEEKMAP_EIGENCAM_HPP_
