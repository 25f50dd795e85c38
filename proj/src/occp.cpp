#include "couponrl/occp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

#include "couponrl/collectors.hpp"
#include "couponrl/csv.hpp"

namespace couponrl {

LossMatrix::LossMatrix(double r0, double r1, double r2, double r3)
    : rho0(r0), rho1(r1), rho2(r2), rho3(r3) {
    if (!(rho0 >= 0.0) || !(rho0 < rho1) || !(rho1 <= rho2) || !(rho2 < rho3))
        throw std::invalid_argument("LossMatrix: need 0 <= rho0 < rho1 <= rho2 < rho3");
}

CouponEnvironment CouponEnvironment::stochastic(std::vector<double> mu) {
    double sum = 0.0;
    for (double p : mu) {
        if (p < 0.0) throw std::invalid_argument("stochastic env: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("stochastic env: mu must sum to 1");
    CouponEnvironment env;
    env.kind = Kind::Stochastic;
    env.type_count = static_cast<int>(mu.size());
    env.mu = std::move(mu);
    return env;
}

CouponEnvironment CouponEnvironment::scripted(std::vector<int> types) {
    CouponEnvironment env;
    env.kind = Kind::Scripted;
    env.type_count = types.empty() ? 0 : *std::max_element(types.begin(), types.end()) + 1;
    env.script = std::move(types);
    return env;
}

CouponEnvironment CouponEnvironment::adversarial(int type_count, AdversaryRule rule) {
    CouponEnvironment env;
    env.kind = Kind::Adversarial;
    env.type_count = type_count;
    env.rule = std::move(rule);
    return env;
}

CollectorPolicy CollectorPolicy::exp_first(long long E) {
    if (E < 0) throw std::invalid_argument("ExpFirst: budget must be >= 0");
    CollectorPolicy p;
    p.kind = Kind::ExpFirst;
    p.budget = E;
    return p;
}

CollectorPolicy CollectorPolicy::forced_exp(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("ForcedExp: alpha must be in (0,1)");
    CollectorPolicy p;
    p.kind = Kind::ForcedExp;
    p.alpha = alpha;
    return p;
}

CollectorPolicy CollectorPolicy::oracle() { return CollectorPolicy{}; }

double GameLog::total_loss() const {
    double sum = 0.0;
    for (const auto& r : rounds) sum += r.loss;
    return sum;
}

int GameLog::distinct_types() const {
    std::set<int> seen;
    for (const auto& r : rounds) seen.insert(r.type);
    return static_cast<int>(seen.size());
}

double loss_of(const LossMatrix& matrix, OccpAction action, bool novel) {
    if (action == OccpAction::Skip) return novel ? matrix.rho3 : matrix.rho0;
    return novel ? matrix.rho2 : matrix.rho1;
}

double optimal_loss(long long T, long long c_star, const LossMatrix& matrix) {
    if (c_star < 0 || c_star > T)
        throw std::invalid_argument("optimal_loss: need 0 <= c_star <= T");
    return matrix.rho2 * static_cast<double>(c_star) +
           matrix.rho0 * static_cast<double>(T - c_star);
}

OccpAction collector_act(const CollectorPolicy& policy, const ObservableHistory& history,
                         Rng& rng) {
    switch (policy.kind) {
        case CollectorPolicy::Kind::ExpFirst:
            return expfirst_act(history.t, policy.budget);
        case CollectorPolicy::Kind::ForcedExp:
            return forcedexp_act(history.t, policy.alpha, rng);
        case CollectorPolicy::Kind::Oracle:
            throw std::invalid_argument("collector_act: oracle needs harness novelty");
    }
    throw std::invalid_argument("collector_act: bad policy");
}

GameLog play_game(const CouponEnvironment& env, const CollectorPolicy& collector, long long T,
                  const LossMatrix& matrix, std::uint64_t seed, StreamMode mode) {
    if (T < 1) throw std::invalid_argument("play_game: T >= 1");
    if (env.kind == CouponEnvironment::Kind::Scripted &&
        static_cast<long long>(env.script.size()) < T)
        throw std::invalid_argument("play_game: scripted sequence shorter than T");

    // Stream layout. Alternating: a single stream where each round consumes
    // its env draw (stochastic only) and then its collector coin (ForcedExp
    // only). Split: the env substream depends only on the seed, so different
    // collectors face identical coupon sequences.
    Rng env_rng = make_substream(seed, stream_tag::kEnv);
    Rng col_rng = make_substream(seed, stream_tag::kCollector);
    Rng shared = make_substream(seed, stream_tag::kEnv);
    const bool split = mode == StreamMode::Split;

    GameLog log;
    log.seed = seed;
    log.rounds.reserve(static_cast<size_t>(T));

    ObservableHistory history;
    std::set<int> probed;

    for (long long t = 1; t <= T; ++t) {
        history.t = static_cast<int>(t);
        int type = 0;
        switch (env.kind) {
            case CouponEnvironment::Kind::Stochastic:
                type = (split ? env_rng : shared).categorical({env.mu.data(), env.mu.size()});
                break;
            case CouponEnvironment::Kind::Scripted:
                type = env.script[static_cast<size_t>(t - 1)];
                break;
            case CouponEnvironment::Kind::Adversarial:
                type = env.rule(history);
                break;
        }

        bool novel = probed.find(type) == probed.end();
        OccpAction action;
        if (collector.kind == CollectorPolicy::Kind::Oracle) {
            action = oracle_act(novel);
        } else {
            action = collector_act(collector, history, split ? col_rng : shared);
        }

        double loss = loss_of(matrix, action, novel);
        bool observed = action == OccpAction::Probe;
        log.rounds.push_back({static_cast<int>(t), type, action, loss, novel, observed});

        history.actions.push_back(action);
        history.observed_losses.push_back(observed ? loss
                                                   : std::numeric_limits<double>::quiet_NaN());
        history.revealed_types.push_back(observed ? type : -1);
        if (observed && novel) {
            probed.insert(type);
            history.probed_type_set.assign(probed.begin(), probed.end());
        }
    }
    return log;
}

double regret_of_log(const GameLog& log, const LossMatrix& matrix) {
    return log.total_loss() -
           optimal_loss(static_cast<long long>(log.rounds.size()), log.distinct_types(), matrix);
}

CouponEnvironment hard_instance(long long T, int C) {
    if (C < 2) throw std::invalid_argument("hard_instance: C >= 2");
    if (T < static_cast<long long>(C) * C) throw std::invalid_argument("hard_instance: T >= C^2");
    double mu_m = 1.0 / std::sqrt(static_cast<double>(T));
    if ((C - 1) * mu_m >= 1.0)
        throw std::invalid_argument("hard_instance: (C-1)/sqrt(T) must be < 1");
    // The last type takes the residual mass so mu sums to 1.
    std::vector<double> mu(static_cast<size_t>(C), mu_m);
    mu.back() = 1.0 - (C - 1) * mu_m;
    return CouponEnvironment::stochastic(std::move(mu));
}

void write_game_log_csv(std::ostream& out, const GameLog& log, const LossMatrix& matrix,
                        bool header) {
    if (header) out << "seed,t,type_id,action,novel,loss,cum_loss,cum_regret\n";
    double cum_loss = 0.0;
    std::set<int> seen;
    for (const auto& r : log.rounds) {
        cum_loss += r.loss;
        seen.insert(r.type);
        double lstar = optimal_loss(r.t, static_cast<long long>(seen.size()), matrix);
        out << log.seed << ',' << r.t << ',' << r.type << ','
            << (r.action == OccpAction::Probe ? 'P' : 'S') << ',' << (r.novel ? 1 : 0) << ','
            << csv_real(r.loss) << ',' << csv_real(cum_loss) << ',' << csv_real(cum_loss - lstar)
            << '\n';
    }
}

}  // namespace couponrl
