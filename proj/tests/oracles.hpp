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

// Brute-force reference implementations used only by tests. They work on
// plain nested vectors and never call into the library's trainers.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace tbp::oracle {

using Dense = std::vector<std::vector<double>>;

/// One nonzero (0-based word, 0-based doc, count).
struct Element {
  std::size_t w;
  std::size_t d;
  double x;
};

/// One round of the KL-NMF multiplicative updates, both factors updated from
/// the same old values:
///   phi[w][k]   <- sum_d x[w][d] phi[w][k] theta[k][d] / (phi theta)[w][d] / sum_d theta[k][d]
///   theta[k][d] <- sum_w x[w][d] phi[w][k] theta[k][d] / (phi theta)[w][d] / sum_w phi[w][k]
/// followed by normalizing phi columns over w and theta columns over k.
/// `x` is W x D, `phi` is W x K, `theta` is K x D.
void nmf_kl_round(const Dense& x, Dense& phi, Dense& theta);

/// Synchronous loopy BP sweep transcribed term by term: every exclusion sum
/// is recomputed from the full message table.
Dense bp_literal_sync(const std::vector<Element>& elements, const Dense& messages,
                      std::size_t num_words, double alpha, double beta);

/// Variational sweep with inclusive sums, evaluated in long double with
/// Boost.Math digamma.
Dense vb_literal(const std::vector<Element>& elements, const Dense& messages,
                 std::size_t num_words, double alpha, double beta);

/// Mean total-variation distance between columns of two W x K matrices under
/// the best topic permutation (exhaustive search).
double best_matching_tv(const Dense& recovered, const Dense& planted);

/// Fresh empty directory under the test scratch root.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace tbp::oracle
