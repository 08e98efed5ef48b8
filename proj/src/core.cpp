#include "bellkit/core.hpp"

#include <cmath>
#include <sstream>

namespace bellkit {

namespace {

const char* setting_name(int side, int i) {
    static const char* names[2][2] = {{"a1", "a2"}, {"b1", "b2"}};
    return names[side][i];
}

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << what << " = " << v << " outside [0,1]";
        throw ValidationError(msg.str());
    }
}

} // namespace

void CountsTable::validate() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::uint64_t sum = 0;
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) sum += n[i][j][A][B];
            if (sum != totals[i][j]) {
                std::ostringstream msg;
                msg << "counts for " << setting_name(0, i) << setting_name(1, j)
                    << " sum to " << sum << " but N_ij = " << totals[i][j];
                throw ValidationError(msg.str());
            }
        }
}

void ThreeOutcomeCounts::validate() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::uint64_t sum = 0;
            for (int A = 0; A < 3; ++A)
                for (int B = 0; B < 3; ++B) sum += n[i][j][A][B];
            if (sum != totals[i][j]) {
                std::ostringstream msg;
                msg << "counts for " << setting_name(0, i) << setting_name(1, j)
                    << " sum to " << sum << " but N_ij = " << totals[i][j];
                throw ValidationError(msg.str());
            }
        }
}

void ThreeOutcomeProbs::validate() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double sum = 0.0;
            for (int A = 0; A < 3; ++A)
                for (int B = 0; B < 3; ++B) {
                    check_unit(p[i][j][A][B], "probability");
                    sum += p[i][j][A][B];
                }
            if (std::abs(sum - 1.0) > kProbTol) {
                std::ostringstream msg;
                msg << "probabilities for " << setting_name(0, i) << setting_name(1, j)
                    << " sum to " << sum;
                throw ValidationError(msg.str());
            }
        }
}

void CondProbs::validate() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double sum = 0.0;
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    check_unit(p[i][j][A][B], "probability");
                    sum += p[i][j][A][B];
                }
            if (std::abs(sum - 1.0) > kProbTol) {
                std::ostringstream msg;
                msg << "probabilities for " << setting_name(0, i) << setting_name(1, j)
                    << " sum to " << sum;
                throw ValidationError(msg.str());
            }
        }
}

void JointProbs::validate() const {
    double sum = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    check_unit(p[i][j][A][B], "joint probability");
                    sum += p[i][j][A][B];
                }
    if (std::abs(sum - 1.0) > kProbTol) {
        std::ostringstream msg;
        msg << "joint probabilities sum to " << sum;
        throw ValidationError(msg.str());
    }
}

std::string to_string(PredictabilityMode mode) {
    switch (mode) {
        case PredictabilityMode::communication_fraction: return "communication-fraction";
        case PredictabilityMode::excess_predictability: return "excess-predictability";
        case PredictabilityMode::beyond_half: return "beyond-half";
    }
    return "?";
}

PredictabilityMode predictability_mode_from_string(const std::string& name) {
    if (name == "communication-fraction") return PredictabilityMode::communication_fraction;
    if (name == "excess-predictability") return PredictabilityMode::excess_predictability;
    if (name == "beyond-half") return PredictabilityMode::beyond_half;
    throw ValidationError("unknown predictability mode '" + name + "'");
}

double SettingsProfile::p_setting(Setting a, Setting b) const {
    if (mode == PredictabilityMode::beyond_half) return 0.25;
    return p_a(a) * p_b(b);
}

void SettingsProfile::validate() const {
    if (!(kappa_a > -0.5 && kappa_a < 0.5))
        throw ValidationError("kappaA must lie in (-1/2, 1/2)");
    if (!(kappa_b > -0.5 && kappa_b < 0.5))
        throw ValidationError("kappaB must lie in (-1/2, 1/2)");
    check_unit(eps_a, "epsA");
    check_unit(eps_b, "epsB");
    check_unit(qf, "qf");
    for (double p : {p_a1(), p_a2(), p_b1(), p_b2()})
        if (!(p > 0.0 && p < 1.0)) throw ValidationError("setting probability outside (0,1)");
}

double eberhard_counts_value(const CountsTable& counts) {
    counts.validate();
    using S = Setting;
    using O = Outcome;
    return static_cast<double>(counts.at(S::first, S::first, O::plus, O::plus)) -
           static_cast<double>(counts.at(S::first, S::second, O::plus, O::undetected)) -
           static_cast<double>(counts.at(S::second, S::first, O::undetected, O::plus)) -
           static_cast<double>(counts.at(S::second, S::second, O::plus, O::plus));
}

double eberhard_counts_value(const ThreeOutcomeCounts& counts) {
    counts.validate();
    using S = Setting;
    using F = Fate;
    return static_cast<double>(counts.at(S::first, S::first, F::plus, F::plus)) -
           static_cast<double>(counts.at(S::first, S::second, F::plus, F::minus)) -
           static_cast<double>(counts.at(S::first, S::second, F::plus, F::undetected)) -
           static_cast<double>(counts.at(S::second, S::first, F::minus, F::plus)) -
           static_cast<double>(counts.at(S::second, S::first, F::undetected, F::plus)) -
           static_cast<double>(counts.at(S::second, S::second, F::plus, F::plus));
}

double normalized_eberhard_value(const ThreeOutcomeProbs& probs) {
    probs.validate();
    using S = Setting;
    using F = Fate;
    return probs.at(S::first, S::first, F::plus, F::plus) -
           probs.at(S::first, S::second, F::plus, F::minus) -
           probs.at(S::first, S::second, F::plus, F::undetected) -
           probs.at(S::second, S::first, F::minus, F::plus) -
           probs.at(S::second, S::first, F::undetected, F::plus) -
           probs.at(S::second, S::second, F::plus, F::plus);
}

double che_j(const CondProbs& probs) {
    probs.validate();
    using S = Setting;
    using O = Outcome;
    return probs.at(S::first, S::first, O::plus, O::plus) -
           probs.at(S::first, S::second, O::plus, O::undetected) -
           probs.at(S::second, S::first, O::undetected, O::plus) -
           probs.at(S::second, S::second, O::plus, O::plus);
}

CondProbs estimate_cond_probs(const CountsTable& counts) {
    counts.validate();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (counts.totals[i][j] == 0) {
                std::ostringstream msg;
                msg << "no trials recorded for setting combination "
                    << setting_name(0, i) << setting_name(1, j);
                throw InsufficientDataError(msg.str());
            }
    CondProbs out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B)
                    out.p[i][j][A][B] = static_cast<double>(counts.n[i][j][A][B]) /
                                        static_cast<double>(counts.totals[i][j]);
    return out;
}

JointProbs estimate_joint_probs(const CountsTable& counts) {
    counts.validate();
    std::uint64_t total = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) total += counts.totals[i][j];
    if (total == 0) throw InsufficientDataError("no trials recorded");
    JointProbs out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B)
                    out.p[i][j][A][B] =
                        static_cast<double>(counts.n[i][j][A][B]) / static_cast<double>(total);
    return out;
}

SinglesProbs singles_probs(const CondProbs& probs) {
    probs.validate();
    SinglesProbs s;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            s.alice[i][j] = probs.p[i][j][0][0] + probs.p[i][j][0][1];
            s.bob[j][i] = probs.p[i][j][0][0] + probs.p[i][j][1][0];
        }
    return s;
}

std::string NsViolation::describe() const {
    std::ostringstream msg;
    msg << "p" << party << "+(" << (party == 'A' ? 'a' : 'b') << own_setting
        << ") depends on the distant setting, deviation " << deviation;
    return msg.str();
}

NoSignalingReport no_signaling_check(const CondProbs& probs, double tol) {
    if (!(tol > 0.0)) throw ValidationError("no-signaling tolerance must be positive");
    SinglesProbs s = singles_probs(probs);
    NoSignalingReport report;
    for (int i = 0; i < 2; ++i) {
        double dev = std::abs(s.alice[i][0] - s.alice[i][1]);
        report.max_deviation = std::max(report.max_deviation, dev);
        if (dev > tol) report.violated_pairs.push_back({'A', i + 1, dev});
    }
    for (int j = 0; j < 2; ++j) {
        double dev = std::abs(s.bob[j][0] - s.bob[j][1]);
        report.max_deviation = std::max(report.max_deviation, dev);
        if (dev > tol) report.violated_pairs.push_back({'B', j + 1, dev});
    }
    report.pass = report.violated_pairs.empty();
    return report;
}

ChValue ch_value(const CondProbs& probs, double ns_tol) {
    NoSignalingReport ns = no_signaling_check(probs, ns_tol);
    SinglesProbs s = singles_probs(probs);
    // Singles averaged over the two distant settings; under no-signaling
    // this coincides with either conditioning.
    double p_alice_1 = 0.5 * (s.alice[0][0] + s.alice[0][1]);
    double p_bob_1 = 0.5 * (s.bob[0][0] + s.bob[0][1]);
    using S = Setting;
    using O = Outcome;
    ChValue out;
    out.value = probs.at(S::first, S::first, O::plus, O::plus) +
                probs.at(S::first, S::second, O::plus, O::plus) +
                probs.at(S::second, S::first, O::plus, O::plus) -
                probs.at(S::second, S::second, O::plus, O::plus) - p_alice_1 - p_bob_1;
    out.advisory = !ns.pass;
    out.ns_deviation = ns.max_deviation;
    return out;
}

double epsilon_ab(double eps_a, double eps_b) {
    check_unit(eps_a, "epsA");
    check_unit(eps_b, "epsB");
    return std::min(eps_a + eps_b, 1.0);
}

EpsilonPair epsilon_pm(double eps_a, double eps_b) {
    check_unit(eps_a, "epsA");
    check_unit(eps_b, "epsB");
    return {eps_a + eps_b + eps_a * eps_b, eps_a + eps_b - eps_a * eps_b};
}

double adapted_che_jeps(const JointProbs& joint, const SettingsProfile& profile) {
    joint.validate();
    profile.validate();
    if (profile.mode == PredictabilityMode::communication_fraction)
        throw ValidationError("adapted CH-E requires an excess-predictability profile");
    EpsilonPair eps = epsilon_pm(profile.eps_a, profile.eps_b);
    if (eps.minus >= 1.0)
        throw ValidationError("degenerate denominator: eps_minus >= 1");
    auto pa = [&](Setting s) {
        return profile.mode == PredictabilityMode::beyond_half ? 0.5 : profile.p_a(s);
    };
    auto pb = [&](Setting s) {
        return profile.mode == PredictabilityMode::beyond_half ? 0.5 : profile.p_b(s);
    };
    using S = Setting;
    using O = Outcome;
    return joint.at(S::first, S::first, O::plus, O::plus) /
               (pa(S::first) * pb(S::first) * (1.0 + eps.plus)) -
           joint.at(S::first, S::second, O::plus, O::undetected) /
               (pa(S::first) * pb(S::second) * (1.0 - eps.minus)) -
           joint.at(S::second, S::first, O::undetected, O::plus) /
               (pa(S::second) * pb(S::first) * (1.0 - eps.minus)) -
           joint.at(S::second, S::second, O::plus, O::plus) /
               (pa(S::second) * pb(S::second) * (1.0 - eps.minus));
}

} // namespace bellkit
