#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "couponrl/rng.hpp"

namespace couponrl {

/// The four game costs, rho0 < rho1 <= rho2 < rho3. Construction rejects
/// anything else.
struct LossMatrix {
    double rho0, rho1, rho2, rho3;
    LossMatrix(double r0, double r1, double r2, double r3);
};

struct CouponType {
    int id = 0;
};

enum class OccpAction { Probe, Skip };

/// What an admissible collector may read: its own past actions, losses of
/// probed rounds, and the types revealed by probing. Unprobed rounds carry
/// no observation (loss NaN, type -1).
struct ObservableHistory {
    int t = 1;                                // current round, 1-based
    std::vector<OccpAction> actions;          // rounds 1..t-1
    std::vector<double> observed_losses;      // NaN where unobserved
    std::vector<int> revealed_types;          // -1 where hidden
    std::vector<int> probed_type_set;         // sorted distinct probed types
};

/// What an adversary may condition on (the full observable history; types it
/// chose itself are implicit in its own state).
using AdversaryRule = std::function<int(const ObservableHistory&)>;

struct CouponEnvironment {
    enum class Kind { Stochastic, Scripted, Adversarial };
    Kind kind = Kind::Stochastic;
    std::vector<double> mu;      // Stochastic: distribution over type ids 0..C-1
    std::vector<int> script;     // Scripted
    AdversaryRule rule;          // Adversarial: deterministic in the history
    int type_count = 0;

    static CouponEnvironment stochastic(std::vector<double> mu);
    static CouponEnvironment scripted(std::vector<int> types);
    static CouponEnvironment adversarial(int type_count, AdversaryRule rule);
};

struct GameRound {
    int t = 0;
    int type = 0;
    OccpAction action = OccpAction::Skip;
    double loss = 0.0;
    bool novel = false;     // type not probed in any earlier round
    bool observed = false;  // loss visible to the collector (action == Probe)
};

struct GameLog {
    std::uint64_t seed = 0;
    std::vector<GameRound> rounds;

    double total_loss() const;
    int distinct_types() const;  // C* of the realized sequence
};

struct CollectorPolicy {
    enum class Kind { ExpFirst, ForcedExp, Oracle };
    Kind kind = Kind::Oracle;
    long long budget = 0;  // ExpFirst probe budget E
    double alpha = 0.5;    // ForcedExp exponent

    static CollectorPolicy exp_first(long long E);
    static CollectorPolicy forced_exp(double alpha);
    static CollectorPolicy oracle();
};

enum class StreamMode {
    Alternating,  // one stream; per round: env draw first, collector coin second
    Split,        // env and collector substreams; same seed -> same coupons
};

/// Loss-matrix lookup: (Skip, known) -> rho0, (Probe, known) -> rho1,
/// (Probe, novel) -> rho2, (Skip, novel) -> rho3.
double loss_of(const LossMatrix& matrix, OccpAction action, bool novel);

/// Loss of the type-aware ideal strategy: rho2*c_star + rho0*(T - c_star).
double optimal_loss(long long T, long long c_star, const LossMatrix& matrix);

/// Plays T rounds. Deterministic in (env, collector, T, seed, mode); the
/// collector never sees novelty or unprobed types.
GameLog play_game(const CouponEnvironment& env, const CollectorPolicy& collector, long long T,
                  const LossMatrix& matrix, std::uint64_t seed,
                  StreamMode mode = StreamMode::Split);

/// Realized regret: total loss minus optimal_loss at the realized C*.
double regret_of_log(const GameLog& log, const LossMatrix& matrix);

/// Theorem-2 hard instance: mu(M) = 1/sqrt(T) for all but the last type,
/// which takes the residual mass 1 - (C-1)/sqrt(T).
CouponEnvironment hard_instance(long long T, int C);

/// Collector decision given only the observable history. Oracle policies are
/// resolved by the harness and rejected here.
OccpAction collector_act(const CollectorPolicy& policy, const ObservableHistory& history,
                         Rng& rng);

/// CSV with header seed,t,type_id,action,novel,loss,cum_loss,cum_regret
/// (action P/S, novel 0/1, reals with 9 significant digits).
void write_game_log_csv(std::ostream& out, const GameLog& log, const LossMatrix& matrix,
                        bool header = true);

}  // namespace couponrl
