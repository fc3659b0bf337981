// Copyright 2026 The TBP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tbp/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tbp {

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("digamma: argument must be positive and finite, got " +
                            std::to_string(x));
  }
  // psi(x) = psi(x + 1) - 1/x until the asymptotic series is accurate. The
  // first omitted term at x = 10 is below 1e-15.
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli terms B_{2n} / (2n x^{2n}) for n = 1..6, Horner form in x^-2.
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

}  // namespace tbp
