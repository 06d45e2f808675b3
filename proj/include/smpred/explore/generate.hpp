#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "smpred/env/environment.hpp"
#include "smpred/explore/dataset.hpp"
#include "smpred/nn/rng.hpp"

namespace smpred {

struct GenerateStats {
  std::size_t attempts = 0;
  std::size_t discarded = 0;
  std::size_t translations = 0;
};

// Environment translation at collection time of (m_t, s_t) and of
// (m_next, s_next), one entry per valid transition. Only recorded on demand;
// lets tests replay the regime structure without bloating datasets.
struct TranslationTrace {
  std::vector<std::array<double, 2>> at_t;
  std::vector<std::array<double, 2>> at_next;
};

struct GenerateResult {
  Dataset dataset;
  GenerateStats stats;
  TranslationTrace trace;
};

// Collects `n` valid transitions by uniform motor sampling, starting from the
// untranslated scene. Invalid samples (arm tip outside walls / inside an
// object) discard the whole attempt and do not count toward n.
//   MTM: translation between the (m_t, s_t) and (m_next, s_next) halves of
//        every attempt.
//   MM:  never translates.
//   MMT: translation after every 100 attempted transitions, so each placement
//        yields 0..100 valid transitions.
GenerateResult generate(Environment env, ExplorationKind kind, std::size_t n, Rng& rng,
                        bool record_trace = false);

}  // namespace smpred
