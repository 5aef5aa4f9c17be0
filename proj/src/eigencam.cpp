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

#include "peekmap/eigencam.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "peekmap/error.hpp"

namespace peekmap {
namespace {

// Symmetric d x d matrix, row-major.
struct Gram {
  std::size_t d = 0;
  std::vector<double> a;
  double& operator()(std::size_t i, std::size_t j) { return a[i * d + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * d + j]; }
};

double Dot(std::span<const float> x, std::span<const float> y) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t n = x.size(), i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += double(x[i]) * y[i];
    s1 += double(x[i + 1]) * y[i + 1];
    s2 += double(x[i + 2]) * y[i + 2];
    s3 += double(x[i + 3]) * y[i + 3];
  }
  for (; i < n; ++i) s0 += double(x[i]) * y[i];
  return (s0 + s1) + (s2 + s3);
}

double Norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Gram BuildGram(const FeatureStack& stack) {
  const std::size_t d = stack.shape().depth;
  Gram g{d, std::vector<double>(d * d)};
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      g(a, b) = g(b, a) = Dot(stack.slice(a), stack.slice(b));
    }
  }
  return g;
}

void Multiply(const Gram& g, const std::vector<double>& v,
              std::vector<double>& out) {
  for (std::size_t i = 0; i < g.d; ++i) {
    double s = 0;
    const double* row = &g.a[i * g.d];
    for (std::size_t j = 0; j < g.d; ++j) s += row[j] * v[j];
    out[i] = s;
  }
}

std::optional<std::vector<double>> PowerIteration(
    const Gram& g, std::vector<double> v,
    const PrincipalDirectionOptions& options) {
  std::vector<double> w(g.d);
  for (int it = 0; it < options.max_iterations; ++it) {
    Multiply(g, v, w);
    const double n = Norm(w);
    if (n == 0.0) return std::nullopt;
    double delta = 0;
    for (std::size_t i = 0; i < g.d; ++i) {
      w[i] /= n;
      delta += (w[i] - v[i]) * (w[i] - v[i]);
    }
    v.swap(w);
    if (std::sqrt(delta) < options.tolerance) return v;
  }
  return std::nullopt;
}

// Cyclic Jacobi; returns the eigenvector of the largest eigenvalue.
std::optional<std::vector<double>> JacobiLeading(Gram g) {
  const std::size_t d = g.d;
  Gram vecs{d, std::vector<double>(d * d, 0.0)};
  for (std::size_t i = 0; i < d; ++i) vecs(i, i) = 1.0;
  double total = 0;
  for (double x : g.a) total += x * x;
  const double eps = 1e-30 * total;

  constexpr int kMaxSweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += g(p, q) * g(p, q);
    if (off <= eps) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = g(p, q);
        if (apq == 0.0) continue;
        const double theta = (g(q, q) - g(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double gkp = g(k, p), gkq = g(k, q);
          g(k, p) = c * gkp - s * gkq;
          g(k, q) = s * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double gpk = g(p, k), gqk = g(q, k);
          g(p, k) = c * gpk - s * gqk;
          g(q, k) = s * gpk + c * gqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = vecs(k, p), vkq = vecs(k, q);
          vecs(k, p) = c * vkp - s * vkq;
          vecs(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < d; ++i) {
    if (g(i, i) > g(best, best)) best = i;
  }
  std::vector<double> v(d);
  for (std::size_t k = 0; k < d; ++k) v[k] = vecs(k, best);
  return v;
}

std::vector<double> ColumnSums(const FeatureStack& stack) {
  std::vector<double> sums(stack.shape().depth);
  for (std::size_t k = 0; k < sums.size(); ++k) {
    double s = 0;
    for (float x : stack.slice(k)) s += x;
    sums[k] = s;
  }
  return sums;
}

}  // namespace

std::vector<double> FirstPrincipalDirection(
    const FeatureStack& stack, const PrincipalDirectionOptions& options) {
  const std::size_t d = stack.shape().depth;
  const Gram g = BuildGram(stack);

  double trace = 0;
  for (std::size_t i = 0; i < d; ++i) trace += g(i, i);
  std::vector<double> basis(d, 0.0);
  basis[0] = 1.0;
  if (trace == 0.0) return basis;

  // Start from M^T 1, nudged towards the all-ones direction so the start
  // is not orthogonal to the leading eigenvector for centred inputs.
  const std::vector<double> col_sums = ColumnSums(stack);
  std::vector<double> start = col_sums;
  const double cn = Norm(start);
  for (std::size_t i = 0; i < d; ++i) {
    start[i] = (cn > 0 ? start[i] / cn : 0.0) + 1e-3 / std::sqrt(double(d)) +
               1e-4 * double(i % 7) / double(d);
  }
  const double sn = Norm(start);
  for (double& x : start) x /= sn;

  auto v = PowerIteration(g, start, options);
  if (!v) v = JacobiLeading(g);
  if (!v) {
    throw Error(ErrorCode::kNumeric,
                "eigen-decomposition did not converge for layer " +
                    std::to_string(stack.layer_index()));
  }
  const double n = Norm(*v);
  double projection_sum = 0;
  for (std::size_t k = 0; k < d; ++k) {
    (*v)[k] /= n;
    projection_sum += (*v)[k] * col_sums[k];
  }
  if (projection_sum < 0) {
    for (double& x : *v) x = -x;
  }
  return *v;
}

SaliencyMap EigenCamMap(const FeatureStack& stack,
                        const PrincipalDirectionOptions& options) {
  const auto v = FirstPrincipalDirection(stack, options);
  const std::size_t plane = stack.shape().plane();
  std::vector<double> acc(plane, 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto slice = stack.slice(k);
    const double vk = v[k];
    for (std::size_t p = 0; p < plane; ++p) acc[p] += vk * slice[p];
  }
  double total = 0;
  for (double x : acc) total += x;
  // Rounding in the projection can leave a tiny negative total even though
  // the direction's sign was chosen for a nonnegative sum.
  const double sign = total < 0 ? -1.0 : 1.0;
  std::vector<float> out(plane);
  for (std::size_t p = 0; p < plane; ++p) {
    out[p] = static_cast<float>(sign * acc[p]);
  }
  return SaliencyMap(stack.shape().height, stack.shape().width, std::move(out),
                     stack.layer_index(), SaliencyMethod::kEigenCam);
}

}  // namespace peekmap
