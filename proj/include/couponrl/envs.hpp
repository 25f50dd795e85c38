#pragma once

#include <vector>

#include "couponrl/mdp.hpp"
#include "couponrl/rng.hpp"

namespace couponrl {

/// The 5x5 gridworld family. States are row-major, 0-based internally
/// (label sK = index K-1): s1 upper-left, s5 upper-right, s20 and s25 on the
/// bottom rows, start at the center s13. Variants 1..4 share dynamics and
/// differ only in Bernoulli reward parameters.
FiniteMdp build_gridworld(int variant);
std::vector<FiniteMdp> gridworld_family();

/// Task-identity schedule over model ids.
struct TaskSchedule {
    enum class Kind { Stochastic, Nonstationary, Scripted };
    struct Phase {
        std::vector<int> ids;  // uniform over these
        int count = 0;
    };

    Kind kind = Kind::Stochastic;
    Eigen::VectorXd mu;       // Stochastic: index = model id
    std::vector<Phase> phases;
    std::vector<int> script;
    int total = 0;            // 0 = unbounded (stochastic)

    /// Model id of task t (1-based). Stochastic consumes one draw; scripted
    /// consumes none; nonstationary consumes one only in multi-id phases.
    int sample_id(int t, Rng& rng) const;
    int max_id() const;
};

TaskSchedule stochastic_schedule(const Eigen::VectorXd& mu, int total = 0);
TaskSchedule scripted_schedule(std::vector<int> ids);

/// The 100-task adversarial schedule: E tasks uniform over the first three
/// variants, 25 tasks of the fourth, then the first three again. Ids are
/// first_id .. first_id+3.
TaskSchedule nonstationary_schedule(int E, int first_id = 1);

int sample_task(const TaskSchedule& schedule, int t, Rng& rng);

/// C MDPs with shared random dynamics whose rewards are perturbed so every
/// pair is separated by at least gamma_sep at some state-action pair.
std::vector<FiniteMdp> synthetic_family(int C, int S, int A, double gamma_sep,
                                        std::uint64_t seed);

/// Synthetic stand-in for the 605-state, 27-action box-pose collaboration
/// domain: a (5 x 11 x 11) pose lattice with one move action per axis-delta
/// combination, deterministic shared dynamics, and four deterministic reward
/// variants perturbed by clipped Gaussian noise (sigma = 0.01).
struct HriAnalog {
    std::vector<FiniteMdp> models;
    TaskSchedule schedule;   // mu = (0.07, 0.31, 0.31, 0.31)
    long long horizon = 0;   // recommended H = 3*S*A
};

HriAnalog hri_analog();
HriAnalog hri_analog_scaled(int nx, int ny, int nz);

}  // namespace couponrl
