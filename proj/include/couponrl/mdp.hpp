#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "couponrl/rng.hpp"

namespace couponrl {

enum class RewardNoise { Deterministic, Bernoulli };

/// Finite MDP with dense dynamics. P[a] is an SxS matrix whose row s is the
/// next-state distribution of (s,a); R(s,a) is the mean reward in [0,1].
struct FiniteMdp {
    int S = 0;
    int A = 0;
    std::vector<Eigen::MatrixXd> P;  // A matrices, SxS, rows are distributions
    Eigen::MatrixXd R;               // SxA
    RewardNoise reward_noise = RewardNoise::Bernoulli;
    double gamma = 0.95;
    Eigen::VectorXd start;           // start-state distribution

    double v_max() const { return 1.0 / (1.0 - gamma); }
};

struct ValueSolution {
    Eigen::VectorXd V;        // per-state value
    Eigen::MatrixXd Q;        // SxA
    std::vector<int> policy;  // greedy, lowest-index tie-break
    double residual = 0.0;    // final sup-norm Bellman residual
    int iterations = 0;
};

/// Sup-norm value iteration; stops once the Bellman residual is <= tol.
/// `warm` seeds the iteration (used by planners that replan after small
/// model edits).
ValueSolution value_iteration(const FiniteMdp& mdp, double tol = 1e-6,
                              const Eigen::VectorXd* warm = nullptr);

/// V^pi via direct linear solve of (I - gamma P_pi) V = R_pi.
Eigen::VectorXd policy_value(const FiniteMdp& mdp, std::span<const int> policy,
                             double tol = 1e-6);

struct DiameterResult {
    double value = 0.0;          // max over ordered pairs of expected hitting time
    bool finite = true;
    Eigen::MatrixXd hitting;     // hitting(s, target); 0 on the diagonal
};

/// Expected-hitting-time diameter. Unreachable pairs give finite=false with
/// value = +inf rather than throwing.
DiameterResult diameter(const FiniteMdp& mdp, double tol = 1e-9);

/// (S+1)-dimensional dynamics vector of (s,a): transition row then mean reward.
Eigen::VectorXd dynamics_vector(const FiniteMdp& mdp, int s, int a);

/// Max over (s,a) of the l2 distance between the two dynamics vectors.
double separation_gap(const FiniteMdp& m1, const FiniteMdp& m2);

/// Min over distinct pairs of separation_gap: the family's Gamma.
double family_separation(std::span<const FiniteMdp> models);

/// Max next-state support size over all (s,a); the N bound of the analysis.
int max_support(const FiniteMdp& mdp);
int family_max_support(std::span<const FiniteMdp> models);

/// One environment step. Draw layout: position 1 = transition uniform;
/// position 2 = reward uniform (consumed only for Bernoulli noise).
std::pair<int, double> sample_step(const FiniteMdp& mdp, int s, int a, Rng& rng);

/// Reports every violated invariant with its location; empty means valid.
std::vector<std::string> validate(const FiniteMdp& mdp);

/// Gamma_0 = c * eps * (1-gamma) / (sqrt(N) * v_max), default c = 1.
double gamma0_default(double epsilon, double gamma, double n_support,
                      double v_max, double c = 1.0);

/// Flattened sampler over a FiniteMdp for hot loops: per-(s,a) cumulative
/// support lists instead of dense row walks. step() consumes draws in the
/// same positions as sample_step and yields identical results.
class EnvSampler {
public:
    explicit EnvSampler(const FiniteMdp& mdp);

    int step(int s, int a, Rng& rng, double& reward) const;
    int draw_start(Rng& rng) const;

    int S() const { return S_; }
    int A() const { return A_; }
    const FiniteMdp& mdp() const { return *mdp_; }

private:
    const FiniteMdp* mdp_;
    int S_ = 0, A_ = 0;
    bool bernoulli_ = false;
    std::vector<int> offset_;      // (s*A+a) -> index into cum_/next_
    std::vector<double> cum_;
    std::vector<int> next_;
    std::vector<double> reward_;   // mean reward per pair
    std::vector<double> start_cum_;
};

}  // namespace couponrl
