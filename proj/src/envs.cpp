#include "couponrl/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace couponrl {

namespace {

constexpr int kGridSide = 5;
constexpr int kGridStates = kGridSide * kGridSide;
constexpr int kStart = 12;  // s13

// Special corner states keep 0.95 self mass and send the rest to the start,
// for every action. s1 keeps ordinary dynamics in all variants.
const int kTrapStates[] = {4, 19, 24};  // s5, s20, s25

bool is_trap(int s) {
    return s == kTrapStates[0] || s == kTrapStates[1] || s == kTrapStates[2];
}

// Row-major moves: 0=up, 1=down, 2=left, 3=right. Wall moves stay in place.
int move_from(int s, int dir) {
    int row = s / kGridSide, col = s % kGridSide;
    switch (dir) {
        case 0: row = std::max(0, row - 1); break;
        case 1: row = std::min(kGridSide - 1, row + 1); break;
        case 2: col = std::max(0, col - 1); break;
        case 3: col = std::min(kGridSide - 1, col + 1); break;
        default: throw std::invalid_argument("move_from: bad direction");
    }
    return row * kGridSide + col;
}

}  // namespace

FiniteMdp build_gridworld(int variant) {
    if (variant < 1 || variant > 4) throw std::invalid_argument("build_gridworld: variant in 1..4");

    FiniteMdp mdp;
    mdp.S = kGridStates;
    mdp.A = 4;
    mdp.gamma = 0.95;
    mdp.reward_noise = RewardNoise::Bernoulli;
    mdp.P.assign(4, Eigen::MatrixXd::Zero(kGridStates, kGridStates));
    mdp.R = Eigen::MatrixXd::Zero(kGridStates, 4);
    mdp.start = Eigen::VectorXd::Zero(kGridStates);
    mdp.start(kStart) = 1.0;

    for (int s = 0; s < kGridStates; ++s) {
        for (int a = 0; a < 4; ++a) {
            if (is_trap(s)) {
                mdp.P[a](s, s) += 0.95;
                mdp.P[a](s, kStart) += 0.05;
                continue;
            }
            mdp.P[a](s, move_from(s, a)) += 0.85;
            for (int other = 0; other < 4; ++other)
                if (other != a) mdp.P[a](s, move_from(s, other)) += 0.05;
        }
    }

    auto set_state_reward = [&mdp](int s, double p) {
        for (int a = 0; a < 4; ++a) mdp.R(s, a) = p;
    };
    switch (variant) {
        case 1: set_state_reward(19, 0.75); break;             // s20
        case 2: set_state_reward(4, 0.75); break;              // s5
        case 3: set_state_reward(24, 0.75); break;             // s25
        case 4:
            set_state_reward(24, 0.75);                        // s25
            set_state_reward(0, 0.99);                         // s1
            break;
    }
    return mdp;
}

std::vector<FiniteMdp> gridworld_family() {
    std::vector<FiniteMdp> family;
    family.reserve(4);
    for (int v = 1; v <= 4; ++v) family.push_back(build_gridworld(v));
    return family;
}

int TaskSchedule::sample_id(int t, Rng& rng) const {
    if (t < 1) throw std::invalid_argument("sample_id: t is 1-based");
    switch (kind) {
        case Kind::Stochastic: {
            return rng.categorical({mu.data(), static_cast<size_t>(mu.size())});
        }
        case Kind::Scripted: {
            if (t > static_cast<int>(script.size()))
                throw std::invalid_argument("sample_id: scripted schedule exhausted");
            return script[t - 1];
        }
        case Kind::Nonstationary: {
            int offset = t - 1;
            for (const auto& phase : phases) {
                if (offset < phase.count) {
                    if (phase.ids.size() == 1) return phase.ids[0];
                    return phase.ids[rng.uniform_int(static_cast<int>(phase.ids.size()))];
                }
                offset -= phase.count;
            }
            throw std::invalid_argument("sample_id: t beyond schedule phases");
        }
    }
    throw std::invalid_argument("sample_id: bad kind");
}

int TaskSchedule::max_id() const {
    int m = 0;
    switch (kind) {
        case Kind::Stochastic: m = static_cast<int>(mu.size()) - 1; break;
        case Kind::Scripted:
            for (int id : script) m = std::max(m, id);
            break;
        case Kind::Nonstationary:
            for (const auto& phase : phases)
                for (int id : phase.ids) m = std::max(m, id);
            break;
    }
    return m;
}

TaskSchedule stochastic_schedule(const Eigen::VectorXd& mu, int total) {
    if ((mu.array() < 0).any() || std::abs(mu.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("stochastic_schedule: mu must be a distribution");
    TaskSchedule s;
    s.kind = TaskSchedule::Kind::Stochastic;
    s.mu = mu;
    s.total = total;
    return s;
}

TaskSchedule scripted_schedule(std::vector<int> ids) {
    TaskSchedule s;
    s.kind = TaskSchedule::Kind::Scripted;
    s.total = static_cast<int>(ids.size());
    s.script = std::move(ids);
    return s;
}

TaskSchedule nonstationary_schedule(int E, int first_id) {
    if (E < 0 || E + 25 > 100)
        throw std::invalid_argument("nonstationary_schedule: need E + 25 <= 100");
    TaskSchedule s;
    s.kind = TaskSchedule::Kind::Nonstationary;
    s.total = 100;
    std::vector<int> first_three{first_id, first_id + 1, first_id + 2};
    s.phases.push_back({first_three, E});
    s.phases.push_back({{first_id + 3}, 25});
    s.phases.push_back({first_three, 100 - E - 25});
    return s;
}

int sample_task(const TaskSchedule& schedule, int t, Rng& rng) {
    return schedule.sample_id(t, rng);
}

std::vector<FiniteMdp> synthetic_family(int C, int S, int A, double gamma_sep,
                                        std::uint64_t seed) {
    if (C < 2) throw std::invalid_argument("synthetic_family: C >= 2");
    if (S < 1 || A < 1) throw std::invalid_argument("synthetic_family: bad shape");
    if (C > S * A) throw std::invalid_argument("synthetic_family: C > S*A signature pairs");
    if (gamma_sep >= 1.0)
        throw std::invalid_argument("synthetic_family: gamma_sep infeasible for [0,1] rewards");

    Rng rng = make_substream(seed, 0x5f5f);
    const int support = std::min(4, S);
    const double margin = std::min(0.05, (1.0 - gamma_sep) / 2.0);
    const double hi = std::min(1.0, gamma_sep + margin);

    for (int attempt = 0; attempt < 10; ++attempt) {
        // Shared dynamics for the whole family.
        std::vector<Eigen::MatrixXd> p(A, Eigen::MatrixXd::Zero(S, S));
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                std::vector<int> states(S);
                std::iota(states.begin(), states.end(), 0);
                for (int i = 0; i < support; ++i)
                    std::swap(states[i], states[i + rng.uniform_int(S - i)]);
                double total = 0.0;
                std::vector<double> w(support);
                for (int i = 0; i < support; ++i) {
                    w[i] = -std::log(1.0 - rng.uniform());
                    total += w[i];
                }
                for (int i = 0; i < support; ++i) p[a](s, states[i]) += w[i] / total;
            }
        }

        Eigen::MatrixXd base = Eigen::MatrixXd::Zero(S, A);
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) base(s, a) = 0.2 * rng.uniform();

        std::vector<FiniteMdp> family(C);
        for (int k = 0; k < C; ++k) {
            FiniteMdp& m = family[k];
            m.S = S;
            m.A = A;
            m.gamma = 0.95;
            m.reward_noise = RewardNoise::Bernoulli;
            m.P = p;
            m.R = base;
            m.start = Eigen::VectorXd::Constant(S, 1.0 / S);
            // Signature pair j carries hi for model j and 0 for the others,
            // fixing every pairwise gap at >= gamma_sep.
            for (int j = 0; j < C; ++j) m.R(j / A, j % A) = (j == k) ? hi : 0.0;
        }

        bool ok = true;
        for (int i = 0; i < C && ok; ++i)
            for (int j = i + 1; j < C && ok; ++j)
                if (separation_gap(family[i], family[j]) < gamma_sep) ok = false;
        for (const auto& m : family)
            if (!validate(m).empty()) ok = false;
        if (ok) return family;
    }
    throw std::invalid_argument("synthetic_family: could not satisfy gamma_sep");
}

namespace {

HriAnalog build_box_lattice(int nx, int ny, int nz) {
    const int S = nx * ny * nz;
    const int A = 27;
    HriAnalog out;

    FiniteMdp shared;
    shared.S = S;
    shared.A = A;
    shared.gamma = 0.95;
    shared.reward_noise = RewardNoise::Deterministic;
    shared.P.assign(A, Eigen::MatrixXd::Zero(S, S));
    shared.R = Eigen::MatrixXd::Zero(S, A);
    shared.start = Eigen::VectorXd::Zero(S);
    shared.start(0) = 1.0;

    auto index_of = [ny, nz](int x, int y, int z) { return (x * ny + y) * nz + z; };
    for (int x = 0; x < nx; ++x) {
        for (int y = 0; y < ny; ++y) {
            for (int z = 0; z < nz; ++z) {
                int s = index_of(x, y, z);
                for (int a = 0; a < A; ++a) {
                    int dx = a / 9 - 1, dy = (a / 3) % 3 - 1, dz = a % 3 - 1;
                    int xn = std::clamp(x + dx, 0, nx - 1);
                    int yn = std::clamp(y + dy, 0, ny - 1);
                    int zn = std::clamp(z + dz, 0, nz - 1);
                    shared.P[a](s, index_of(xn, yn, zn)) = 1.0;
                }
            }
        }
    }

    const int goals[4] = {
        index_of(0, 0, 0),
        index_of(nx - 1, ny - 1, nz - 1),
        index_of(0, ny - 1, nz - 1),
        index_of(nx - 1, 0, 0),
    };

    out.models.assign(4, shared);
    for (int k = 0; k < 4; ++k) {
        FiniteMdp& m = out.models[k];
        for (int a = 0; a < A; ++a) m.R(goals[k], a) = 0.9;
        // Clipped Gaussian perturbation of the reward parameters, fixed seed
        // per variant so the builder is a pure function.
        Rng noise = make_substream(0xb0c5ed, 100 + k);
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                double u1 = std::max(1e-12, noise.uniform());
                double u2 = noise.uniform();
                double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
                m.R(s, a) = std::clamp(m.R(s, a) + 0.01 * g, 0.0, 1.0);
            }
        }
    }

    Eigen::VectorXd mu(4);
    mu << 0.07, 0.31, 0.31, 0.31;
    out.schedule = stochastic_schedule(mu);
    out.horizon = 3LL * S * A;
    return out;
}

}  // namespace

HriAnalog hri_analog() { return build_box_lattice(5, 11, 11); }

HriAnalog hri_analog_scaled(int nx, int ny, int nz) {
    if (nx < 1 || ny < 1 || nz < 1) throw std::invalid_argument("hri_analog_scaled: bad dims");
    return build_box_lattice(nx, ny, nz);
}

}  // namespace couponrl
