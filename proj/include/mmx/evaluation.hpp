#pragma once

#include <vector>

#include "mmx/clustering.hpp"

namespace mmx {

// External validation scores for a predicted labeling against ground truth.
struct EvalScores {
  double m1_rand = 0.0;         // adjusted Rand index, in [-1, 1]
  double m2_mutual_info = 0.0;  // adjusted mutual information, at most 1
  double m3_v_measure = 0.0;    // v-measure (beta = 1), in [0, 1]
};

// Computes all three scores from the exact integer contingency table:
//  - M1: pair-counting Rand index with expected-index correction,
//  - M2: mutual information adjusted by its expectation under the
//    hypergeometric model, normalized by the larger marginal entropy,
//  - M3: harmonic mean of homogeneity and completeness.
// Entropies use natural log. Perfect agreement returns exactly (1, 1, 1).
EvalScores evaluate(const std::vector<int>& pred, const std::vector<int>& truth);

EvalScores evaluate(const ClusterLabels& pred, const ClusterLabels& truth);

}  // namespace mmx
