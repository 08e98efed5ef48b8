#include "bellkit/adversaries.hpp"

#include <cmath>
#include <sstream>

namespace bellkit {

namespace {

void check_unit_field(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << what << " = " << v << " outside [0,1]";
        throw ValidationError(msg.str());
    }
}

} // namespace

void QuantumModel::validate() const {
    check_unit_field(r, "r");
    check_unit_field(eta_a, "etaA");
    check_unit_field(eta_b, "etaB");
    check_unit_field(visibility, "visibility");
    if (!(p_dark >= 0.0 && p_dark < 1.0)) throw ValidationError("pDark must lie in [0,1)");
    for (double a : {alpha1, alpha2, beta1, beta2})
        if (!std::isfinite(a)) throw ValidationError("analyzer angle is not finite");
}

CellQuad quantum_trial_probs(const QuantumModel& model, Setting i, Setting j) {
    model.validate();
    const double alpha = (i == Setting::first) ? model.alpha1 : model.alpha2;
    const double beta = (j == Setting::first) ? model.beta1 : model.beta2;
    const double r = model.r;
    const double norm = 1.0 + r * r;
    const double v = model.visibility;

    // Transmission probabilities of the analyzers on the noisy state.
    const double amp = std::cos(alpha) * std::sin(beta) + r * std::sin(alpha) * std::cos(beta);
    const double t_joint = v * amp * amp / norm + (1.0 - v) * 0.25;
    const double t_alice =
        v * (std::cos(alpha) * std::cos(alpha) + r * r * std::sin(alpha) * std::sin(alpha)) / norm +
        (1.0 - v) * 0.5;
    const double t_bob =
        v * (std::sin(beta) * std::sin(beta) + r * r * std::cos(beta) * std::cos(beta)) / norm +
        (1.0 - v) * 0.5;
    const double t_pf = t_alice - t_joint;
    const double t_fp = t_bob - t_joint;
    const double t_ff = 1.0 - t_alice - t_bob + t_joint;

    // Click probability given transmission / no transmission.
    const double qa = 1.0 - (1.0 - model.eta_a) * (1.0 - model.p_dark);
    const double qb = 1.0 - (1.0 - model.eta_b) * (1.0 - model.p_dark);
    const double da = model.p_dark;
    const double db = model.p_dark;

    CellQuad out;
    out.pp = t_joint * qa * qb + t_pf * qa * db + t_fp * da * qb + t_ff * da * db;
    out.p0 = t_joint * qa * (1.0 - qb) + t_pf * qa * (1.0 - db) + t_fp * da * (1.0 - qb) +
             t_ff * da * (1.0 - db);
    out.zp = t_joint * (1.0 - qa) * qb + t_pf * (1.0 - qa) * db + t_fp * (1.0 - da) * qb +
             t_ff * (1.0 - da) * db;
    out.zz = t_joint * (1.0 - qa) * (1.0 - qb) + t_pf * (1.0 - qa) * (1.0 - db) +
             t_fp * (1.0 - da) * (1.0 - qb) + t_ff * (1.0 - da) * (1.0 - db);
    return out;
}

CondProbs quantum_cond_probs(const QuantumModel& model) {
    CondProbs out;
    for (Setting i : {Setting::first, Setting::second})
        for (Setting j : {Setting::first, Setting::second}) {
            CellQuad q = quantum_trial_probs(model, i, j);
            out.at(i, j, Outcome::plus, Outcome::plus) = q.pp;
            out.at(i, j, Outcome::plus, Outcome::undetected) = q.p0;
            out.at(i, j, Outcome::undetected, Outcome::plus) = q.zp;
            out.at(i, j, Outcome::undetected, Outcome::undetected) = q.zz;
        }
    return out;
}

Outcome lhv_alice_outcome(int strategy, Setting a) {
    int bit = (a == Setting::first) ? 0 : 1;
    return (strategy >> bit) & 1 ? Outcome::plus : Outcome::undetected;
}

Outcome lhv_bob_outcome(int strategy, Setting b) {
    int bit = (b == Setting::first) ? 2 : 3;
    return (strategy >> bit) & 1 ? Outcome::plus : Outcome::undetected;
}

CondProbs lhv_cond_probs(int strategy) {
    if (strategy < 0 || strategy >= kNumLhvStrategies)
        throw ValidationError("strategy id must lie in 0..15");
    CondProbs out;
    for (Setting i : {Setting::first, Setting::second})
        for (Setting j : {Setting::first, Setting::second})
            out.at(i, j, lhv_alice_outcome(strategy, i), lhv_bob_outcome(strategy, j)) = 1.0;
    return out;
}

LhvMax lhv_max_j() {
    LhvMax best{che_j(lhv_cond_probs(0)), 0};
    for (int s = 1; s < kNumLhvStrategies; ++s) {
        double j = che_j(lhv_cond_probs(s));
        if (j > best.max_j) best = {j, s};
    }
    return best;
}

int AdversaryConfig::resolved_base_strategy() const {
    if (base_strategy) return *base_strategy;
    // The skew adversary defaults to the all-plus strategy, whose positive
    // term sits at a1b1; everything else defaults to all-undetected.
    return kind == AdversaryKind::predictability_skew ? 15 : 0;
}

void AdversaryConfig::validate() const {
    profile.validate();
    int strat = resolved_base_strategy();
    if (strat < 0 || strat >= kNumLhvStrategies)
        throw ValidationError("strategy id must lie in 0..15");
    switch (kind) {
        case AdversaryKind::comm_pure:
        case AdversaryKind::comm_prbox:
            if (profile.mode != PredictabilityMode::communication_fraction)
                throw ValidationError(
                    "communication adversaries require mode = communication-fraction");
            break;
        case AdversaryKind::predictability_skew:
            if (profile.mode == PredictabilityMode::communication_fraction)
                throw ValidationError(
                    "predictability-skew requires mode = excess-predictability or beyond-half");
            if (profile.eps_a >= 1.0 || profile.eps_b >= 1.0)
                throw ValidationError("predictability-skew requires epsA, epsB < 1");
            break;
        default:
            break;
    }
}

namespace {

// Per-trial RNG slot layout: 4 counter values per trial, so disjoint index
// blocks can be generated on separate substream cursors and merged.
constexpr std::uint64_t kSlotsPerTrial = 4;

struct SettingsDraw {
    double p_a1;
    double p_b1;

    SettingsDraw(const SettingsProfile& profile) : p_a1(profile.p_a1()), p_b1(profile.p_b1()) {}
    SettingsDraw(double a1, double b1) : p_a1(a1), p_b1(b1) {}

    Setting a(double u) const { return u < p_a1 ? Setting::first : Setting::second; }
    Setting b(double u) const { return u < p_b1 ? Setting::first : Setting::second; }
};

class QuantumGenerator final : public TrialGenerator {
public:
    QuantumGenerator(const QuantumModel& model, const SettingsProfile& profile, RngSeed seed)
        : rng_(seed), draw_(profile) {
        model.validate();
        profile.validate();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                quads_[i][j] = quantum_trial_probs(model, static_cast<Setting>(i),
                                                   static_cast<Setting>(j));
    }

    TrialRecord next() override {
        const std::uint64_t base = n_ * kSlotsPerTrial;
        TrialRecord t;
        t.index = ++n_;
        t.a = draw_.a(rng_.unit_at(base));
        t.b = draw_.b(rng_.unit_at(base + 1));
        const CellQuad& q = quads_[idx(t.a)][idx(t.b)];
        double u = rng_.unit_at(base + 2);
        if (u < q.pp) {
            t.A = Outcome::plus;
            t.B = Outcome::plus;
        } else if (u < q.pp + q.p0) {
            t.A = Outcome::plus;
            t.B = Outcome::undetected;
        } else if (u < q.pp + q.p0 + q.zp) {
            t.A = Outcome::undetected;
            t.B = Outcome::plus;
        } else {
            t.A = Outcome::undetected;
            t.B = Outcome::undetected;
        }
        return t;
    }

private:
    SplitStream rng_;
    SettingsDraw draw_;
    CellQuad quads_[2][2];
    std::uint64_t n_ = 0;
};

class DeterministicLhvGenerator final : public TrialGenerator {
public:
    DeterministicLhvGenerator(const SettingsProfile& profile, int strategy, RngSeed seed)
        : rng_(seed), draw_(profile), strategy_(strategy) {}

    TrialRecord next() override {
        const std::uint64_t base = n_ * kSlotsPerTrial;
        TrialRecord t;
        t.index = ++n_;
        t.a = draw_.a(rng_.unit_at(base));
        t.b = draw_.b(rng_.unit_at(base + 1));
        t.A = lhv_alice_outcome(strategy_, t.a);
        t.B = lhv_bob_outcome(strategy_, t.b);
        return t;
    }

private:
    SplitStream rng_;
    SettingsDraw draw_;
    int strategy_;
    std::uint64_t n_ = 0;
};

// Two-sided-memory local model: before each trial it picks a deterministic
// strategy from the realized history (never from the current settings),
// playing the all-plus strategy while the running CH-E process is not ahead
// and freezing to all-undetected once it is.
class MemoryLhvGenerator final : public TrialGenerator {
public:
    MemoryLhvGenerator(const SettingsProfile& profile, RngSeed seed)
        : rng_(seed), draw_(profile) {
        p_[0][0] = profile.p_setting(Setting::first, Setting::first);
        p_[0][1] = profile.p_setting(Setting::first, Setting::second);
        p_[1][0] = profile.p_setting(Setting::second, Setting::first);
        p_[1][1] = profile.p_setting(Setting::second, Setting::second);
    }

    TrialRecord next() override {
        const std::uint64_t base = n_ * kSlotsPerTrial;
        const int strategy = z_ <= 0.0 ? 15 : 0;
        TrialRecord t;
        t.index = ++n_;
        t.a = draw_.a(rng_.unit_at(base));
        t.b = draw_.b(rng_.unit_at(base + 1));
        t.A = lhv_alice_outcome(strategy, t.a);
        t.B = lhv_bob_outcome(strategy, t.b);
        z_ += plain_increment(t);
        return t;
    }

private:
    double plain_increment(const TrialRecord& t) const {
        bool plus_plus = t.A == Outcome::plus && t.B == Outcome::plus;
        if (t.a == Setting::first && t.b == Setting::first && plus_plus) return 1.0 / p_[0][0];
        if (t.a == Setting::first && t.b == Setting::second && t.A == Outcome::plus &&
            t.B == Outcome::undetected)
            return -1.0 / p_[0][1];
        if (t.a == Setting::second && t.b == Setting::first && t.A == Outcome::undetected &&
            t.B == Outcome::plus)
            return -1.0 / p_[1][0];
        if (t.a == Setting::second && t.b == Setting::second && plus_plus) return -1.0 / p_[1][1];
        return 0.0;
    }

    SplitStream rng_;
    SettingsDraw draw_;
    double p_[2][2];
    double z_ = 0.0;
    std::uint64_t n_ = 0;
};

// Scenario (i) communication adversaries. In communicated trials the
// measurement devices overrule the designated fates; elsewhere they play a
// zero-J deterministic strategy.
class CommGenerator final : public TrialGenerator {
public:
    CommGenerator(const AdversaryConfig& config, std::uint64_t n_trials, RngSeed seed, bool prbox)
        : rng_(seed),
          draw_(config.profile),
          base_(config.resolved_base_strategy()),
          prbox_(prbox),
          placement_(config.placement),
          eps_ab_(epsilon_ab(config.profile.eps_a, config.profile.eps_b)),
          n_comm_block_(static_cast<std::uint64_t>(
              std::llround(eps_ab_ * static_cast<double>(n_trials)))) {}

    TrialRecord next() override {
        const std::uint64_t base = n_ * kSlotsPerTrial;
        TrialRecord t;
        t.index = n_ + 1;
        t.a = draw_.a(rng_.unit_at(base));
        t.b = draw_.b(rng_.unit_at(base + 1));
        const bool communicated = placement_ == CommPlacement::leading_block
                                      ? n_ < n_comm_block_
                                      : rng_.unit_at(base + 3) < eps_ab_;
        if (!communicated) {
            t.A = lhv_alice_outcome(base_, t.a);
            t.B = lhv_bob_outcome(base_, t.b);
        } else if (prbox_) {
            // Shared fair coin r; Bob flips it only at (a2, b2).
            Outcome shared =
                rng_.unit_at(base + 2) < 0.5 ? Outcome::plus : Outcome::undetected;
            t.A = shared;
            if (t.a == Setting::second && t.b == Setting::second)
                t.B = shared == Outcome::plus ? Outcome::undetected : Outcome::plus;
            else
                t.B = shared;
        } else {
            t.A = Outcome::plus;
            t.B = (t.a == Setting::second && t.b == Setting::second) ? Outcome::undetected
                                                                     : Outcome::plus;
        }
        ++n_;
        return t;
    }

private:
    SplitStream rng_;
    SettingsDraw draw_;
    int base_;
    bool prbox_;
    CommPlacement placement_;
    double eps_ab_;
    std::uint64_t n_comm_block_;
    std::uint64_t n_ = 0;
};

// Scenario (ii) adversary: a fixed hidden strategy plus a greedy corner
// skew of the per-side setting distributions within the declared
// multiplicative bounds, chosen to maximize the raw CH-E process drift.
class PredictabilitySkewGenerator final : public TrialGenerator {
public:
    PredictabilitySkewGenerator(const AdversaryConfig& config, RngSeed seed)
        : rng_(seed), draw_(0.5, 0.5), strategy_(config.resolved_base_strategy()) {
        const SettingsProfile& profile = config.profile;
        const bool beyond_half = profile.mode == PredictabilityMode::beyond_half;
        const double pa1 = beyond_half ? 0.5 : profile.p_a1();
        const double pb1 = beyond_half ? 0.5 : profile.p_b1();
        // Mass movable toward one Alice (Bob) setting while both bounds of
        // the declared band stay satisfied.
        const double delta_a = profile.eps_a * std::min(pa1, 1.0 - pa1);
        const double delta_b = profile.eps_b * std::min(pb1, 1.0 - pb1);

        double w[2][2] = {};
        using S = Setting;
        if (lhv_alice_outcome(strategy_, S::first) == Outcome::plus &&
            lhv_bob_outcome(strategy_, S::first) == Outcome::plus)
            w[0][0] = 1.0 / profile.p_setting(S::first, S::first);
        if (lhv_alice_outcome(strategy_, S::first) == Outcome::plus &&
            lhv_bob_outcome(strategy_, S::second) == Outcome::undetected)
            w[0][1] = -1.0 / profile.p_setting(S::first, S::second);
        if (lhv_alice_outcome(strategy_, S::second) == Outcome::undetected &&
            lhv_bob_outcome(strategy_, S::first) == Outcome::plus)
            w[1][0] = -1.0 / profile.p_setting(S::second, S::first);
        if (lhv_alice_outcome(strategy_, S::second) == Outcome::plus &&
            lhv_bob_outcome(strategy_, S::second) == Outcome::plus)
            w[1][1] = -1.0 / profile.p_setting(S::second, S::second);

        double best = -1e300;
        for (double da : {+delta_a, -delta_a})
            for (double db : {+delta_b, -delta_b}) {
                double qa1 = pa1 + da;
                double qb1 = pb1 + db;
                double drift = qa1 * qb1 * w[0][0] + qa1 * (1.0 - qb1) * w[0][1] +
                               (1.0 - qa1) * qb1 * w[1][0] + (1.0 - qa1) * (1.0 - qb1) * w[1][1];
                if (drift > best) {
                    best = drift;
                    draw_ = SettingsDraw(qa1, qb1);
                }
            }
    }

    TrialRecord next() override {
        const std::uint64_t base = n_ * kSlotsPerTrial;
        TrialRecord t;
        t.index = ++n_;
        t.a = draw_.a(rng_.unit_at(base));
        t.b = draw_.b(rng_.unit_at(base + 1));
        t.A = lhv_alice_outcome(strategy_, t.a);
        t.B = lhv_bob_outcome(strategy_, t.b);
        return t;
    }

    SettingsDraw skewed() const { return draw_; }

private:
    SplitStream rng_;
    SettingsDraw draw_;
    int strategy_;
    std::uint64_t n_ = 0;
};

} // namespace

std::unique_ptr<TrialGenerator> make_generator(const QuantumModel& model,
                                               const SettingsProfile& profile, RngSeed seed) {
    return std::make_unique<QuantumGenerator>(model, profile, seed);
}

std::unique_ptr<TrialGenerator> make_generator(const AdversaryConfig& config,
                                               std::uint64_t n_trials, RngSeed seed) {
    config.validate();
    switch (config.kind) {
        case AdversaryKind::deterministic_lhv:
            return std::make_unique<DeterministicLhvGenerator>(
                config.profile, config.resolved_base_strategy(), seed);
        case AdversaryKind::memory_lhv:
            return std::make_unique<MemoryLhvGenerator>(config.profile, seed);
        case AdversaryKind::comm_pure:
            return std::make_unique<CommGenerator>(config, n_trials, seed, false);
        case AdversaryKind::comm_prbox:
            return std::make_unique<CommGenerator>(config, n_trials, seed, true);
        case AdversaryKind::predictability_skew:
            return std::make_unique<PredictabilitySkewGenerator>(config, seed);
    }
    throw ValidationError("unknown adversary kind");
}

namespace {

void run(TrialGenerator& gen, std::uint64_t n_trials, const TrialSink& sink) {
    if (n_trials < 1) throw ValidationError("n_trials must be at least 1");
    for (std::uint64_t k = 0; k < n_trials; ++k) sink(gen.next());
}

} // namespace

void simulate(const QuantumModel& model, const SettingsProfile& profile, std::uint64_t n_trials,
              RngSeed seed, const TrialSink& sink) {
    auto gen = make_generator(model, profile, seed);
    run(*gen, n_trials, sink);
}

void simulate(const AdversaryConfig& config, std::uint64_t n_trials, RngSeed seed,
              const TrialSink& sink) {
    auto gen = make_generator(config, n_trials, seed);
    run(*gen, n_trials, sink);
}

std::vector<TrialRecord> simulate(const QuantumModel& model, const SettingsProfile& profile,
                                  std::uint64_t n_trials, RngSeed seed) {
    std::vector<TrialRecord> out;
    out.reserve(n_trials);
    simulate(model, profile, n_trials, seed, [&](const TrialRecord& t) { out.push_back(t); });
    return out;
}

std::vector<TrialRecord> simulate(const AdversaryConfig& config, std::uint64_t n_trials,
                                  RngSeed seed) {
    std::vector<TrialRecord> out;
    out.reserve(n_trials);
    simulate(config, n_trials, seed, [&](const TrialRecord& t) { out.push_back(t); });
    return out;
}

} // namespace bellkit
