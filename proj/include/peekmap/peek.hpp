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

#ifndef PEEKMAP_PEEK_HPP_
#define PEEKMAP_PEEK_HPP_

#include "peekmap/tensor.hpp"

namespace peekmap {

// g(x) = -x ln x with g(0) = 0. Throws kDomain for x < 0 or NaN.
double EntropyKernel(double x);

// x ln x as evaluated inside PeekMap, for x = 0 or x a normal double.
double XLogX(double x);

// Shifts every depth slice by |min| of that slice. The shift is applied as
// written even when the minimum is positive, so a slice with minimum m > 0
// ends up with minimum 2m.
FeatureStack Positivize(const FeatureStack& stack);

// P_ij = -sum_k g(L^pos_ijk) = sum_k L^pos_ijk ln L^pos_ijk, accumulated in
// double. With negate set every value is sign-flipped, giving the plain
// depth-wise entropy sum instead.
SaliencyMap PeekMap(const FeatureStack& stack, bool negate = false);

}  // namespace peekmap

#endif  // PEEKMAP_PEEK_HPP_
