#pragma once

// Regression values produced by tests/oracles/heisenberg_lemma_oracle.py
// (50-digit closed-form spectral calculus) and frozen here.

namespace dilatekit::fixtures {

struct LemmaResiduals {
  int N;
  double r1, r2, r3;
};

inline constexpr LemmaResiduals kHeisenbergLemmaA2B2[] = {
    {2, 1.414213562373095, 1.414213562373095, 1.0},
    {8, 3.3449612466699244, 3.2038260996183722, 3.208677394491783},
    {16, 3.7673950389681724, 4.4872851335504721, 4.5188651152256598},
};

inline constexpr double kLemmaTol = 1e-10;

}  // namespace dilatekit::fixtures
