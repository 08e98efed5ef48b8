#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "bellkit/core.hpp"
#include "bellkit/rng.hpp"

namespace bellkit {

/// Photon-pair source and detection model. The source emits
/// (|HV> + r|VH>)/sqrt(1+r^2) mixed with white noise at the given
/// visibility; each side projects onto a linear polarization analyzer,
/// detection thins independently with eta per side, and dark counts OR in
/// with probability pDark per side and trial.
struct QuantumModel {
    double r = 1.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double eta_a = 1.0;
    double eta_b = 1.0;
    double visibility = 1.0;
    double p_dark = 0.0;

    void validate() const;
};

/// Outcome probabilities {++, +0, 0+, 00} for one setting combination.
struct CellQuad {
    double pp = 0.0;
    double p0 = 0.0;
    double zp = 0.0;
    double zz = 1.0;

    double sum() const { return pp + p0 + zp + zz; }
};

CellQuad quantum_trial_probs(const QuantumModel& model, Setting i, Setting j);

/// All four setting combinations of quantum_trial_probs as a CondProbs table.
CondProbs quantum_cond_probs(const QuantumModel& model);

// --- deterministic local strategies ----------------------------------------
//
// Strategy ids 0..15 encode the four local fate choices as bits:
// bit 0: A(a1) = +, bit 1: A(a2) = +, bit 2: B(b1) = +, bit 3: B(b2) = +.

inline constexpr int kNumLhvStrategies = 16;

Outcome lhv_alice_outcome(int strategy, Setting a);
Outcome lhv_bob_outcome(int strategy, Setting b);

/// Exact conditional probability table of a deterministic strategy.
CondProbs lhv_cond_probs(int strategy);

struct LhvMax {
    double max_j = 0.0;
    int argmax_strategy = 0;
};

/// Enumerates all 16 deterministic strategies and returns the exact maximum
/// of the CH-E value (0, attained e.g. by the all-undetected strategy).
LhvMax lhv_max_j();

// --- trial-stream generators ------------------------------------------------

enum class AdversaryKind {
    deterministic_lhv,
    memory_lhv,
    comm_pure,
    comm_prbox,
    predictability_skew,
};

/// Where the communicated trials of scenario (i) are placed. The leading
/// block is the worst case for clustering; communicated trials need not be
/// independent of the trial index.
enum class CommPlacement { leading_block, bernoulli };

struct AdversaryConfig {
    AdversaryKind kind = AdversaryKind::deterministic_lhv;
    SettingsProfile profile;
    std::optional<int> base_strategy; ///< deterministic strategy id; kind-specific default
    CommPlacement placement = CommPlacement::bernoulli;

    int resolved_base_strategy() const;
    void validate() const;
};

/// Pull-based trial source; next() must be called in index order.
class TrialGenerator {
public:
    virtual ~TrialGenerator() = default;
    virtual TrialRecord next() = 0;
};

/// Generator for the quantum model with settings drawn from the profile biases.
std::unique_ptr<TrialGenerator> make_generator(const QuantumModel& model,
                                               const SettingsProfile& profile, RngSeed seed);

/// Generator for a local-realist adversary. `n_trials` is needed up front
/// for the leading-block placement of communicated trials.
std::unique_ptr<TrialGenerator> make_generator(const AdversaryConfig& config,
                                               std::uint64_t n_trials, RngSeed seed);

using TrialSink = std::function<void(const TrialRecord&)>;

void simulate(const QuantumModel& model, const SettingsProfile& profile, std::uint64_t n_trials,
              RngSeed seed, const TrialSink& sink);
void simulate(const AdversaryConfig& config, std::uint64_t n_trials, RngSeed seed,
              const TrialSink& sink);

std::vector<TrialRecord> simulate(const QuantumModel& model, const SettingsProfile& profile,
                                  std::uint64_t n_trials, RngSeed seed);
std::vector<TrialRecord> simulate(const AdversaryConfig& config, std::uint64_t n_trials,
                                  RngSeed seed);

} // namespace bellkit
