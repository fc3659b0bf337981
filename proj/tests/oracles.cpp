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

#include "oracles.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tbp::oracle {

void nmf_kl_round(const Dense& x, Dense& phi, Dense& theta) {
  const std::size_t W = phi.size();
  const std::size_t K = theta.size();
  const std::size_t D = x[0].size();

  Dense product(W, std::vector<double>(D, 0.0));
  for (std::size_t w = 0; w < W; ++w)
    for (std::size_t d = 0; d < D; ++d)
      for (std::size_t k = 0; k < K; ++k) product[w][d] += phi[w][k] * theta[k][d];

  Dense new_phi(W, std::vector<double>(K, 0.0));
  Dense new_theta(K, std::vector<double>(D, 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    double theta_row_sum = 0.0;
    for (std::size_t d = 0; d < D; ++d) theta_row_sum += theta[k][d];
    double phi_col_sum = 0.0;
    for (std::size_t w = 0; w < W; ++w) phi_col_sum += phi[w][k];

    for (std::size_t w = 0; w < W; ++w) {
      double num = 0.0;
      for (std::size_t d = 0; d < D; ++d) {
        if (x[w][d] != 0.0) num += x[w][d] * phi[w][k] * theta[k][d] / product[w][d];
      }
      new_phi[w][k] = num / theta_row_sum;
    }
    for (std::size_t d = 0; d < D; ++d) {
      double num = 0.0;
      for (std::size_t w = 0; w < W; ++w) {
        if (x[w][d] != 0.0) num += x[w][d] * phi[w][k] * theta[k][d] / product[w][d];
      }
      new_theta[k][d] = num / phi_col_sum;
    }
  }

  for (std::size_t k = 0; k < K; ++k) {
    double s = 0.0;
    for (std::size_t w = 0; w < W; ++w) s += new_phi[w][k];
    for (std::size_t w = 0; w < W; ++w) new_phi[w][k] /= s;
  }
  for (std::size_t d = 0; d < D; ++d) {
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k) s += new_theta[k][d];
    for (std::size_t k = 0; k < K; ++k) new_theta[k][d] /= s;
  }
  phi = std::move(new_phi);
  theta = std::move(new_theta);
}

Dense bp_literal_sync(const std::vector<Element>& elements, const Dense& messages,
                      std::size_t num_words, double alpha, double beta) {
  const std::size_t K = messages[0].size();
  Dense out(elements.size(), std::vector<double>(K, 0.0));
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const Element& e = elements[i];
    std::vector<double> doc_excl(K, 0.0), word_excl(K, 0.0), all_excl(K, 0.0);
    for (std::size_t j = 0; j < elements.size(); ++j) {
      if (j == i) continue;
      const Element& o = elements[j];
      for (std::size_t k = 0; k < K; ++k) {
        const double m = o.x * messages[j][k];
        if (o.d == e.d && o.w != e.w) doc_excl[k] += m;
        if (o.w == e.w && o.d != e.d) word_excl[k] += m;
        all_excl[k] += m;
      }
    }
    double doc_norm = 0.0;
    for (std::size_t k = 0; k < K; ++k) doc_norm += doc_excl[k] + alpha;
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      out[i][k] = (doc_excl[k] + alpha) / doc_norm * (word_excl[k] + beta) /
                  (all_excl[k] + static_cast<double>(num_words) * beta);
      total += out[i][k];
    }
    for (double& v : out[i]) v /= total;
  }
  return out;
}

Dense vb_literal(const std::vector<Element>& elements, const Dense& messages,
                 std::size_t num_words, double alpha, double beta) {
  const std::size_t K = messages[0].size();
  Dense out(elements.size(), std::vector<double>(K, 0.0));
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const Element& e = elements[i];
    std::vector<long double> doc(K, 0.0L), word(K, 0.0L), topic(K, 0.0L);
    for (std::size_t j = 0; j < elements.size(); ++j) {
      const Element& o = elements[j];
      for (std::size_t k = 0; k < K; ++k) {
        const long double m = static_cast<long double>(o.x) * messages[j][k];
        if (o.d == e.d) doc[k] += m;
        if (o.w == e.w) word[k] += m;
        topic[k] += m;
      }
    }
    long double doc_sum = 0.0L;
    for (std::size_t k = 0; k < K; ++k) doc_sum += doc[k] + alpha;
    std::vector<long double> v(K);
    long double total = 0.0L;
    for (std::size_t k = 0; k < K; ++k) {
      v[k] = std::exp(boost::math::digamma(doc[k] + alpha)) /
             std::exp(boost::math::digamma(doc_sum)) * (word[k] + beta) /
             (topic[k] + static_cast<long double>(num_words) * beta);
      total += v[k];
    }
    for (std::size_t k = 0; k < K; ++k) out[i][k] = static_cast<double>(v[k] / total);
  }
  return out;
}

double best_matching_tv(const Dense& recovered, const Dense& planted) {
  const std::size_t W = planted.size();
  const std::size_t K = planted[0].size();
  Dense tv(K, std::vector<double>(K, 0.0));
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b < K; ++b) {
      double s = 0.0;
      for (std::size_t w = 0; w < W; ++w) s += std::abs(recovered[w][a] - planted[w][b]);
      tv[a][b] = 0.5 * s;
    }
  std::vector<std::size_t> perm(K);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t a = 0; a < K; ++a) s += tv[a][perm[a]];
    best = std::min(best, s / static_cast<double>(K));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path(TBP_TEST_TMPDIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace tbp::oracle
