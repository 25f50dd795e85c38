#include "couponrl/mdp_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace couponrl {

using nlohmann::json;

std::string mdp_to_json(const FiniteMdp& mdp) {
    json j;
    j["S"] = mdp.S;
    j["A"] = mdp.A;
    j["gamma"] = mdp.gamma;
    j["reward_noise"] = mdp.reward_noise == RewardNoise::Bernoulli ? "bernoulli" : "deterministic";
    j["start"] = std::vector<double>(mdp.start.data(), mdp.start.data() + mdp.start.size());
    json p = json::array();
    for (int s = 0; s < mdp.S; ++s) {
        json per_action = json::array();
        for (int a = 0; a < mdp.A; ++a) {
            json row = json::array();
            for (int sp = 0; sp < mdp.S; ++sp) row.push_back(mdp.P[a](s, sp));
            per_action.push_back(std::move(row));
        }
        p.push_back(std::move(per_action));
    }
    j["P"] = std::move(p);
    json r = json::array();
    for (int s = 0; s < mdp.S; ++s) {
        json row = json::array();
        for (int a = 0; a < mdp.A; ++a) row.push_back(mdp.R(s, a));
        r.push_back(std::move(row));
    }
    j["R"] = std::move(r);
    return j.dump();
}

FiniteMdp mdp_from_json(const std::string& text) {
    json j = json::parse(text);
    FiniteMdp mdp;
    mdp.S = j.at("S").get<int>();
    mdp.A = j.at("A").get<int>();
    mdp.gamma = j.at("gamma").get<double>();
    std::string noise = j.at("reward_noise").get<std::string>();
    if (noise == "bernoulli")
        mdp.reward_noise = RewardNoise::Bernoulli;
    else if (noise == "deterministic")
        mdp.reward_noise = RewardNoise::Deterministic;
    else
        throw std::invalid_argument("mdp json: unknown reward_noise '" + noise + "'");

    const auto& start = j.at("start");
    if (static_cast<int>(start.size()) != mdp.S)
        throw std::invalid_argument("mdp json: start length mismatch");
    mdp.start.resize(mdp.S);
    for (int s = 0; s < mdp.S; ++s) mdp.start(s) = start[s].get<double>();

    const auto& p = j.at("P");
    const auto& r = j.at("R");
    if (static_cast<int>(p.size()) != mdp.S || static_cast<int>(r.size()) != mdp.S)
        throw std::invalid_argument("mdp json: P or R state dimension mismatch");
    mdp.P.assign(mdp.A, Eigen::MatrixXd::Zero(mdp.S, mdp.S));
    mdp.R.resize(mdp.S, mdp.A);
    for (int s = 0; s < mdp.S; ++s) {
        if (static_cast<int>(p[s].size()) != mdp.A || static_cast<int>(r[s].size()) != mdp.A)
            throw std::invalid_argument("mdp json: action dimension mismatch at state " +
                                        std::to_string(s));
        for (int a = 0; a < mdp.A; ++a) {
            if (static_cast<int>(p[s][a].size()) != mdp.S)
                throw std::invalid_argument("mdp json: transition row length mismatch");
            for (int sp = 0; sp < mdp.S; ++sp) mdp.P[a](s, sp) = p[s][a][sp].get<double>();
            mdp.R(s, a) = r[s][a].get<double>();
        }
    }

    auto violations = validate(mdp);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "mdp json: invalid model:";
        for (const auto& v : violations) os << "\n  " << v;
        throw std::invalid_argument(os.str());
    }
    return mdp;
}

void save_mdp(const FiniteMdp& mdp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_mdp: cannot open " + path);
    out << mdp_to_json(mdp);
}

FiniteMdp load_mdp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_mdp: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return mdp_from_json(buf.str());
}

}  // namespace couponrl
