#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bellkit/errors.hpp"

namespace bellkit {

/// Analyzer setting on one side: a1/a2 for Alice, b1/b2 for Bob.
enum class Setting : std::uint8_t { first = 0, second = 1 };

/// One-detector-per-side outcome: detected in the ordinary beam (`+`)
/// or undetected (`0`). The extraordinary-beam fate is merged into `0`
/// at ingestion; three-outcome data only enters through the dedicated
/// three-outcome tables below.
enum class Outcome : std::uint8_t { plus = 0, undetected = 1 };

/// Photon fate in the three-outcome bookkeeping: `+`, `-`, `0`.
enum class Fate : std::uint8_t { plus = 0, minus = 1, undetected = 2 };

constexpr int idx(Setting s) { return static_cast<int>(s); }
constexpr int idx(Outcome o) { return static_cast<int>(o); }
constexpr int idx(Fate f) { return static_cast<int>(f); }

/// One measurement trial. `index` is the 1-based trial counter; every
/// trial carries exactly one outcome per side (undetected included).
struct TrialRecord {
    std::uint64_t index = 0;
    Setting a = Setting::first;
    Setting b = Setting::first;
    Outcome A = Outcome::undetected;
    Outcome B = Outcome::undetected;
};

/// Joint outcome counts per setting combination, two-outcome encoding.
/// Layout: n[i][j][A][B] with i,j setting indices and A,B outcome indices.
struct CountsTable {
    std::uint64_t n[2][2][2][2] = {};
    std::uint64_t totals[2][2] = {}; // N_ij

    std::uint64_t& at(Setting a, Setting b, Outcome A, Outcome B) {
        return n[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    std::uint64_t at(Setting a, Setting b, Outcome A, Outcome B) const {
        return n[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    void add(const TrialRecord& t) {
        ++n[idx(t.a)][idx(t.b)][idx(t.A)][idx(t.B)];
        ++totals[idx(t.a)][idx(t.b)];
    }
    /// Throws ValidationError unless every per-combination sum matches N_ij.
    void validate() const;
};

/// Full three-fate counts n_AB(a_i b_j) with A,B in {+,-,0}.
struct ThreeOutcomeCounts {
    std::uint64_t n[2][2][3][3] = {};
    std::uint64_t totals[2][2] = {};

    std::uint64_t& at(Setting a, Setting b, Fate A, Fate B) {
        return n[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    std::uint64_t at(Setting a, Setting b, Fate A, Fate B) const {
        return n[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    void validate() const;
};

/// Conditional probabilities p_AB(a_i b_j) for the three-fate encoding.
/// Each setting combination must be normalized to 1 within `kProbTol`.
struct ThreeOutcomeProbs {
    double p[2][2][3][3] = {};

    double& at(Setting a, Setting b, Fate A, Fate B) {
        return p[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    double at(Setting a, Setting b, Fate A, Fate B) const {
        return p[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    void validate() const;
};

/// Conditional probabilities p_AB(a_i b_j) in the two-outcome encoding:
/// the quadruple {++, +0, 0+, 00} per setting combination.
struct CondProbs {
    double p[2][2][2][2] = {};

    double& at(Setting a, Setting b, Outcome A, Outcome B) {
        return p[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    double at(Setting a, Setting b, Outcome A, Outcome B) const {
        return p[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    void validate() const;
};

/// Joint probabilities p(A,B,a_i,b_j), normalized over everything.
struct JointProbs {
    double p[2][2][2][2] = {};

    double& at(Setting a, Setting b, Outcome A, Outcome B) {
        return p[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    double at(Setting a, Setting b, Outcome A, Outcome B) const {
        return p[idx(a)][idx(b)][idx(A)][idx(B)];
    }
    void validate() const;
};

/// Normalization tolerance for probability tables. Empirical tables built
/// from finite counts are exact rationals and always pass.
inline constexpr double kProbTol = 1e-9;

/// How setting-generator imperfection is modeled.
enum class PredictabilityMode {
    communication_fraction, ///< scenario (i): perfect communication in a fraction of trials
    excess_predictability,  ///< scenario (ii): bounded multiplicative skew in every trial
    beyond_half,            ///< scenario (ii) variant measured against probability 1/2
};

std::string to_string(PredictabilityMode mode);
PredictabilityMode predictability_mode_from_string(const std::string& name);

/// Declared properties of the setting generators: biases kappa, excess
/// predictabilities epsilon, the modeling mode, and the probability q_f
/// that the declared predictability bound itself fails.
struct SettingsProfile {
    double kappa_a = 0.0;
    double kappa_b = 0.0;
    double eps_a = 0.0;
    double eps_b = 0.0;
    PredictabilityMode mode = PredictabilityMode::communication_fraction;
    double qf = 0.0;

    double p_a1() const { return 0.5 - kappa_a; }
    double p_a2() const { return 0.5 + kappa_a; }
    double p_b1() const { return 0.5 - kappa_b; }
    double p_b2() const { return 0.5 + kappa_b; }
    double p_a(Setting s) const { return s == Setting::first ? p_a1() : p_a2(); }
    double p_b(Setting s) const { return s == Setting::first ? p_b1() : p_b2(); }
    /// Joint setting probability p(a_i)p(b_j); 1/4 in beyond-half mode.
    double p_setting(Setting a, Setting b) const;

    void validate() const;
};

// --- inequality evaluation ------------------------------------------------

/// Eberhard counts expression in the two-outcome encoding:
/// n++(a1b1) - n+0(a1b2) - n0+(a2b1) - n++(a2b2). The merged `-` terms
/// vanish here; use the ThreeOutcomeCounts overload for the full form.
double eberhard_counts_value(const CountsTable& counts);

/// Full six-term Eberhard counts expression.
double eberhard_counts_value(const ThreeOutcomeCounts& counts);

/// Normalized Eberhard expression over conditional probabilities; its
/// logical bound is 1 and the local realist bound is 0.
double normalized_eberhard_value(const ThreeOutcomeProbs& probs);

/// CH-E value J = p++(a1b1) - p+0(a1b2) - p0+(a2b1) - p++(a2b2).
double che_j(const CondProbs& probs);

/// Empirical conditional probabilities n/N_ij. Throws
/// InsufficientDataError naming the first setting combination with N_ij = 0.
CondProbs estimate_cond_probs(const CountsTable& counts);

/// Empirical joint probabilities n/N over all trials.
JointProbs estimate_joint_probs(const CountsTable& counts);

/// Singles probabilities conditioned on the distant setting:
/// alice[i][j] = pA+(a_i) given b_j, bob[j][i] = pB+(b_j) given a_i.
struct SinglesProbs {
    double alice[2][2] = {};
    double bob[2][2] = {};
};
SinglesProbs singles_probs(const CondProbs& probs);

struct NsViolation {
    char party = 'A';     // whose marginal depends on the distant setting
    int own_setting = 1;  // 1-based index of the local setting
    double deviation = 0.0;
    std::string describe() const;
};

struct NoSignalingReport {
    bool pass = true;
    double max_deviation = 0.0;
    std::vector<NsViolation> violated_pairs;
};

/// Checks |pA+(a_i)_{b1} - pA+(a_i)_{b2}| <= tol and the mirrored Bob
/// condition for all settings.
NoSignalingReport no_signaling_check(const CondProbs& probs, double tol);

struct ChValue {
    double value = 0.0;
    bool advisory = false;    ///< set when input data signals beyond ns_tol
    double ns_deviation = 0.0;
};

/// CH expression using ++ coincidences and setting-averaged singles.
/// Computed on any input; flagged advisory when no-signaling fails at
/// `ns_tol` (adversarial data may signal, and callers need to see it).
ChValue ch_value(const CondProbs& probs, double ns_tol = kProbTol);

/// Maximal fraction of trials with a communicable setting:
/// min(eps_a + eps_b, 1).
double epsilon_ab(double eps_a, double eps_b);

struct EpsilonPair {
    double plus = 0.0;
    double minus = 0.0;
};

/// eps_plus/minus = eps_a + eps_b +- eps_a*eps_b.
EpsilonPair epsilon_pm(double eps_a, double eps_b);

/// Predictability-adapted CH-E expression J_eps over joint probabilities,
/// with setting probabilities taken from the profile biases. Local realist
/// bound 0 whenever the declared predictability bounds hold.
double adapted_che_jeps(const JointProbs& joint, const SettingsProfile& profile);

} // namespace bellkit
