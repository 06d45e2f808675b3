#include "smpred/explore/generate.hpp"

#include "smpred/common/error.hpp"

namespace smpred {

GenerateResult generate(Environment env, ExplorationKind kind, std::size_t n, Rng& rng,
                        bool record_trace) {
  if (n < 1) throw ConfigError("generate: n must be >= 1");

  env.reset_translation();
  GenerateResult result;
  result.dataset = Dataset(env.motor_dim(), env.sensory_dim());
  result.dataset.provenance.setup = to_string(env.kind());
  result.dataset.provenance.exploration = to_string(kind);
  result.dataset.provenance.seed = rng.seed();

  GenerateStats& stats = result.stats;
  while (result.dataset.size() < n) {
    if (kind == ExplorationKind::kMmt && stats.attempts > 0 &&
        stats.attempts % kMmtTranslationPeriod == 0) {
      env.translate(rng);
      ++stats.translations;
    }
    ++stats.attempts;

    const MotorState m_t = env.sample_motor(rng);
    const auto s_t = env.sense(m_t);
    const auto eps_t = env.translation_vec();

    if (kind == ExplorationKind::kMtm) {
      env.translate(rng);
      ++stats.translations;
    }

    const MotorState m_next = env.sample_motor(rng);
    const auto s_next = env.sense(m_next);
    const auto eps_next = env.translation_vec();

    if (!s_t || !s_next) {
      ++stats.discarded;
      continue;
    }
    result.dataset.append(m_t, *s_t, m_next, *s_next);
    if (record_trace) {
      result.trace.at_t.push_back(eps_t);
      result.trace.at_next.push_back(eps_next);
    }
  }

  // Scene stored untranslated: translations are redrawn relative to the
  // initial position, so replay starts from the same reference.
  Environment replay = env;
  replay.reset_translation();
  result.dataset.provenance.scene = replay.to_json();
  return result;
}

}  // namespace smpred
