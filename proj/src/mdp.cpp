#include "couponrl/mdp.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace couponrl {

namespace {

constexpr double kRowSumTol = 1e-9;

void require_shape(const FiniteMdp& mdp) {
    if (mdp.S <= 0 || mdp.A <= 0) throw std::invalid_argument("mdp: empty state or action set");
    if (static_cast<int>(mdp.P.size()) != mdp.A) throw std::invalid_argument("mdp: P size != A");
    if (mdp.R.rows() != mdp.S || mdp.R.cols() != mdp.A)
        throw std::invalid_argument("mdp: R shape mismatch");
}

}  // namespace

ValueSolution value_iteration(const FiniteMdp& mdp, double tol, const Eigen::VectorXd* warm) {
    require_shape(mdp);
    if (tol <= 0) throw std::invalid_argument("value_iteration: tol must be positive");

    ValueSolution out;
    Eigen::VectorXd v = warm ? *warm : Eigen::VectorXd::Zero(mdp.S);
    Eigen::MatrixXd q(mdp.S, mdp.A);
    // Residual-based stop: ||V_{k+1} - V_k||_inf <= tol implies the fixed
    // point is within tol * gamma / (1 - gamma) in sup norm.
    const int max_iter = 1000000;
    int it = 0;
    double resid = std::numeric_limits<double>::infinity();
    while (it < max_iter) {
        for (int a = 0; a < mdp.A; ++a) q.col(a) = mdp.R.col(a) + mdp.gamma * (mdp.P[a] * v);
        Eigen::VectorXd v_next = q.rowwise().maxCoeff();
        resid = (v_next - v).cwiseAbs().maxCoeff();
        v.swap(v_next);
        ++it;
        if (resid <= tol) break;
    }
    out.V = v;
    out.Q.resize(mdp.S, mdp.A);
    for (int a = 0; a < mdp.A; ++a) out.Q.col(a) = mdp.R.col(a) + mdp.gamma * (mdp.P[a] * v);
    out.policy.assign(mdp.S, 0);
    for (int s = 0; s < mdp.S; ++s) {
        int best = 0;
        double best_q = out.Q(s, 0);
        for (int a = 1; a < mdp.A; ++a) {
            if (out.Q(s, a) > best_q) {  // strict: lowest index wins ties
                best_q = out.Q(s, a);
                best = a;
            }
        }
        out.policy[s] = best;
    }
    out.residual = resid;
    out.iterations = it;
    return out;
}

Eigen::VectorXd policy_value(const FiniteMdp& mdp, std::span<const int> policy, double /*tol*/) {
    require_shape(mdp);
    if (static_cast<int>(policy.size()) != mdp.S)
        throw std::invalid_argument("policy_value: policy length != S");
    Eigen::MatrixXd p_pi(mdp.S, mdp.S);
    Eigen::VectorXd r_pi(mdp.S);
    for (int s = 0; s < mdp.S; ++s) {
        int a = policy[s];
        if (a < 0 || a >= mdp.A) throw std::invalid_argument("policy_value: action out of range");
        p_pi.row(s) = mdp.P[a].row(s);
        r_pi(s) = mdp.R(s, a);
    }
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(mdp.S, mdp.S) - mdp.gamma * p_pi;
    return lhs.partialPivLu().solve(r_pi);
}

DiameterResult diameter(const FiniteMdp& mdp, double tol) {
    require_shape(mdp);
    DiameterResult out;
    out.hitting = Eigen::MatrixXd::Zero(mdp.S, mdp.S);
    if (mdp.S == 1) return out;  // no ordered pair

    // Reachability first (union support graph over actions), so unreachable
    // pairs are reported as infinite instead of diverging in the DP.
    std::vector<std::vector<int>> adj(mdp.S);
    for (int s = 0; s < mdp.S; ++s)
        for (int a = 0; a < mdp.A; ++a)
            for (int sp = 0; sp < mdp.S; ++sp)
                if (mdp.P[a](s, sp) > 0) adj[s].push_back(sp);

    const double inf = std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (int target = 0; target < mdp.S; ++target) {
        std::vector<char> can_reach(mdp.S, 0);
        {  // backward BFS to the target
            std::deque<int> q{target};
            can_reach[target] = 1;
            // forward adjacency, so scan all sources each pop (S is small)
            while (!q.empty()) {
                int cur = q.front();
                q.pop_front();
                for (int s = 0; s < mdp.S; ++s) {
                    if (can_reach[s]) continue;
                    for (int sp : adj[s]) {
                        if (sp == cur) {
                            can_reach[s] = 1;
                            q.push_back(s);
                            break;
                        }
                    }
                }
            }
        }
        bool all_reach = true;
        for (int s = 0; s < mdp.S; ++s)
            if (!can_reach[s]) all_reach = false;
        if (!all_reach) {
            out.finite = false;
            for (int s = 0; s < mdp.S; ++s)
                if (s != target && !can_reach[s]) out.hitting(s, target) = inf;
        }

        // Optimal-stopping DP on hitting costs, target absorbing at 0.
        Eigen::VectorXd h = Eigen::VectorXd::Zero(mdp.S);
        const int max_iter = 4000000;
        for (int it = 0; it < max_iter; ++it) {
            double change = 0.0;
            for (int s = 0; s < mdp.S; ++s) {
                if (s == target || !can_reach[s]) continue;
                double best = inf;
                for (int a = 0; a < mdp.A; ++a) {
                    double e = 1.0;
                    for (int sp = 0; sp < mdp.S; ++sp) {
                        double p = mdp.P[a](s, sp);
                        if (p > 0 && sp != target) e += p * h(sp);
                    }
                    if (e < best) best = e;
                }
                change = std::max(change, std::abs(best - h(s)));
                h(s) = best;  // Gauss-Seidel update speeds convergence
            }
            if (change <= tol) break;
        }
        for (int s = 0; s < mdp.S; ++s) {
            if (s == target) continue;
            if (!can_reach[s]) continue;
            out.hitting(s, target) = h(s);
            worst = std::max(worst, h(s));
        }
    }
    out.value = out.finite ? worst : inf;
    return out;
}

Eigen::VectorXd dynamics_vector(const FiniteMdp& mdp, int s, int a) {
    Eigen::VectorXd theta(mdp.S + 1);
    theta.head(mdp.S) = mdp.P[a].row(s).transpose();
    theta(mdp.S) = mdp.R(s, a);
    return theta;
}

double separation_gap(const FiniteMdp& m1, const FiniteMdp& m2) {
    if (m1.S != m2.S || m1.A != m2.A)
        throw std::invalid_argument("separation_gap: shape mismatch");
    double gap = 0.0;
    for (int a = 0; a < m1.A; ++a) {
        for (int s = 0; s < m1.S; ++s) {
            double trans = (m1.P[a].row(s) - m2.P[a].row(s)).squaredNorm();
            double rew = m1.R(s, a) - m2.R(s, a);
            gap = std::max(gap, std::sqrt(trans + rew * rew));
        }
    }
    return gap;
}

double family_separation(std::span<const FiniteMdp> models) {
    double gamma = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < models.size(); ++i)
        for (size_t j = i + 1; j < models.size(); ++j)
            gamma = std::min(gamma, separation_gap(models[i], models[j]));
    return gamma;
}

int max_support(const FiniteMdp& mdp) {
    int n = 0;
    for (int a = 0; a < mdp.A; ++a)
        for (int s = 0; s < mdp.S; ++s)
            n = std::max(n, static_cast<int>((mdp.P[a].row(s).array() > 0.0).count()));
    return n;
}

int family_max_support(std::span<const FiniteMdp> models) {
    int n = 0;
    for (const auto& m : models) n = std::max(n, max_support(m));
    return n;
}

std::pair<int, double> sample_step(const FiniteMdp& mdp, int s, int a, Rng& rng) {
    if (s < 0 || s >= mdp.S || a < 0 || a >= mdp.A)
        throw std::invalid_argument("sample_step: (s,a) out of range");
    double u = rng.uniform();
    double acc = 0.0;
    int next = -1;
    for (int sp = 0; sp < mdp.S; ++sp) {
        double p = mdp.P[a](s, sp);
        if (p <= 0.0) continue;
        next = sp;  // falls through to the last support state on rounding
        acc += p;
        if (u < acc) break;
    }
    double mean = mdp.R(s, a);
    double reward = mean;
    if (mdp.reward_noise == RewardNoise::Bernoulli) reward = rng.bernoulli(mean) ? 1.0 : 0.0;
    return {next, reward};
}

std::vector<std::string> validate(const FiniteMdp& mdp) {
    std::vector<std::string> violations;
    auto add = [&violations](const std::string& msg) { violations.push_back(msg); };
    if (mdp.S <= 0 || mdp.A <= 0) {
        add("empty state or action set");
        return violations;
    }
    if (static_cast<int>(mdp.P.size()) != mdp.A) {
        add("P has wrong number of action slices");
        return violations;
    }
    if (mdp.R.rows() != mdp.S || mdp.R.cols() != mdp.A) add("R shape mismatch");
    if (!(mdp.gamma > 0.0 && mdp.gamma < 1.0)) add("gamma outside (0,1)");
    for (int a = 0; a < mdp.A; ++a) {
        if (mdp.P[a].rows() != mdp.S || mdp.P[a].cols() != mdp.S) {
            add("P slice shape mismatch at action " + std::to_string(a));
            continue;
        }
        for (int s = 0; s < mdp.S; ++s) {
            double row_sum = mdp.P[a].row(s).sum();
            if (std::abs(row_sum - 1.0) > kRowSumTol) {
                std::ostringstream os;
                os << "transition row sums to " << row_sum << " at (s=" << s << ",a=" << a << ")";
                add(os.str());
            }
            if ((mdp.P[a].row(s).array() < 0.0).any()) {
                add("negative transition probability at (s=" + std::to_string(s) + ",a=" +
                    std::to_string(a) + ")");
            }
        }
    }
    if (mdp.R.rows() == mdp.S && mdp.R.cols() == mdp.A) {
        for (int s = 0; s < mdp.S; ++s)
            for (int a = 0; a < mdp.A; ++a)
                if (mdp.R(s, a) < 0.0 || mdp.R(s, a) > 1.0) {
                    std::ostringstream os;
                    os << "reward " << mdp.R(s, a) << " outside [0,1] at (s=" << s << ",a=" << a
                       << ")";
                    add(os.str());
                }
    }
    if (mdp.start.size() != mdp.S) {
        add("start distribution length mismatch");
    } else if (std::abs(mdp.start.sum() - 1.0) > kRowSumTol || (mdp.start.array() < 0.0).any()) {
        add("start distribution invalid");
    }
    return violations;
}

double gamma0_default(double epsilon, double gamma, double n_support, double v_max, double c) {
    if (epsilon <= 0 || n_support <= 0 || v_max <= 0)
        throw std::invalid_argument("gamma0_default: arguments must be positive");
    return c * epsilon * (1.0 - gamma) / (std::sqrt(n_support) * v_max);
}

EnvSampler::EnvSampler(const FiniteMdp& mdp) : mdp_(&mdp), S_(mdp.S), A_(mdp.A) {
    bernoulli_ = mdp.reward_noise == RewardNoise::Bernoulli;
    offset_.assign(static_cast<size_t>(S_) * A_ + 1, 0);
    reward_.resize(static_cast<size_t>(S_) * A_);
    for (int s = 0; s < S_; ++s) {
        for (int a = 0; a < A_; ++a) {
            size_t idx = static_cast<size_t>(s) * A_ + a;
            reward_[idx] = mdp.R(s, a);
            double acc = 0.0;
            for (int sp = 0; sp < S_; ++sp) {
                double p = mdp.P[a](s, sp);
                if (p > 0) {
                    acc += p;
                    cum_.push_back(acc);
                    next_.push_back(sp);
                }
            }
            offset_[idx + 1] = static_cast<int>(cum_.size());
        }
    }
    double acc = 0.0;
    for (int s = 0; s < S_; ++s) {
        acc += mdp.start(s);
        start_cum_.push_back(acc);
    }
}

int EnvSampler::step(int s, int a, Rng& rng, double& reward) const {
    size_t idx = static_cast<size_t>(s) * A_ + a;
    double u = rng.uniform();
    int lo = offset_[idx], hi = offset_[idx + 1];
    int next = next_[hi - 1];
    for (int i = lo; i < hi - 1; ++i) {
        if (u < cum_[i]) {
            next = next_[i];
            break;
        }
    }
    double mean = reward_[idx];
    reward = bernoulli_ ? (rng.bernoulli(mean) ? 1.0 : 0.0) : mean;
    return next;
}

int EnvSampler::draw_start(Rng& rng) const {
    double u = rng.uniform();
    for (int s = 0; s < S_ - 1; ++s)
        if (u < start_cum_[s]) return s;
    return S_ - 1;
}

}  // namespace couponrl
