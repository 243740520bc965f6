// SPDX-License-Identifier: Apache-2.0
//
// beamsel - beam selection for beamspace mmWave massive MIMO
// Copyright (C) 2026 The beamsel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMSEL_CONFIG_HPP
#define BEAMSEL_CONFIG_HPP

#include "beamsel/experiment.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <set>
#include <sstream>

namespace beamsel {

// Configuration file: INI sections [scenario], [aco], [sweep], [run].
// Every key is optional; unknown sections or keys are rejected.
//
//   [scenario]  n_antennas n_users distance ring_radius sector_origin
//               n_clusters n_rays_min n_rays_max angle_spread_deg
//               los_gain_db nlos_gain_db noise_variance transmit_power_db
//   [aco]       a q gamma omega sigma_reg t_max b_k selection
//   [sweep]     parameter values name
//   [run]       trials seed schemes exhaustive_budget
//
// sector_origin is "random" (drawn per trial) or an angle in radians.

namespace detail {

template <class T>
T parse_value(const std::string &section, const std::string &key, const std::string &text)
{
    std::istringstream is(boost::trim_copy(text));
    T v{};
    is >> v;
    if (is.fail() || !is.eof())
        throw config_error("[" + section + "] " + key + ": cannot parse '" + text + "'");
    return v;
}

inline std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(","));
    for (auto &p : parts) boost::trim(p);
    std::erase_if(parts, [](const std::string &p) { return p.empty(); });
    return parts;
}

} // namespace detail

inline std::vector<Scheme> parse_schemes(const std::string &list)
{
    std::vector<Scheme> out;
    for (const auto &name : detail::split_list(list)) {
        const Scheme s = scheme_from_string(boost::to_lower_copy(name));
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    if (out.empty()) throw config_error("empty scheme list");
    return out;
}

inline ExperimentSpec parse_config(std::istream &in)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw config_error(std::string("malformed config: ") + e.what());
    }

    ExperimentSpec spec;
    Sweep sweep{"transmit_power_db", SweepParam::TransmitPowerDb,
                {spec.scenario.transmit_power_db}, {}, {}};
    bool sweep_named = false;
    int rays_lo = spec.scenario.n_rays_range.first;
    int rays_hi = spec.scenario.n_rays_range.second;

    using Handler = std::function<void(const std::string &)>;
    auto num = [](double &dst, const char *sec, const char *key) -> Handler {
        return [&dst, sec, key](const std::string &v) { dst = detail::parse_value<double>(sec, key, v); };
    };
    auto integer = [](int &dst, const char *sec, const char *key) -> Handler {
        return [&dst, sec, key](const std::string &v) { dst = detail::parse_value<int>(sec, key, v); };
    };

    ScenarioConfig &sc = spec.scenario;
    AcoParams &aco = spec.aco;
    const std::map<std::string, std::map<std::string, Handler>> handlers{
        {"scenario",
         {{"n_antennas", integer(sc.n_antennas, "scenario", "n_antennas")},
          {"n_users", integer(sc.n_users, "scenario", "n_users")},
          {"distance", num(sc.distance, "scenario", "distance")},
          {"ring_radius", num(sc.ring_radius, "scenario", "ring_radius")},
          {"sector_origin",
           [&](const std::string &v) {
               if (boost::iequals(boost::trim_copy(v), "random")) {
                   spec.random_sector_origin = true;
               } else {
                   spec.random_sector_origin = false;
                   sc.sector_origin = detail::parse_value<double>("scenario", "sector_origin", v);
               }
           }},
          {"n_clusters", integer(sc.n_clusters, "scenario", "n_clusters")},
          {"n_rays_min", integer(rays_lo, "scenario", "n_rays_min")},
          {"n_rays_max", integer(rays_hi, "scenario", "n_rays_max")},
          {"angle_spread_deg",
           [&](const std::string &v) {
               sc.angle_spread = detail::parse_value<double>("scenario", "angle_spread_deg", v) *
                                 std::numbers::pi / 180.0;
           }},
          {"los_gain_db", num(sc.los_gain_db, "scenario", "los_gain_db")},
          {"nlos_gain_db", num(sc.nlos_gain_db, "scenario", "nlos_gain_db")},
          {"noise_variance", num(sc.noise_variance, "scenario", "noise_variance")},
          {"transmit_power_db", num(sc.transmit_power_db, "scenario", "transmit_power_db")}}},
        {"aco",
         {{"a", num(aco.a, "aco", "a")},
          {"q", num(aco.q, "aco", "q")},
          {"gamma", num(aco.gamma, "aco", "gamma")},
          {"omega", num(aco.omega, "aco", "omega")},
          {"sigma_reg", num(aco.sigma_reg, "aco", "sigma_reg")},
          {"t_max", integer(aco.t_max, "aco", "t_max")},
          {"b_k", integer(aco.b_k, "aco", "b_k")},
          {"selection",
           [&](const std::string &v) {
               const std::string s = boost::to_lower_copy(boost::trim_copy(v));
               if (s == "argmax") aco.selection = AcoSelection::Argmax;
               else if (s == "roulette") aco.selection = AcoSelection::Roulette;
               else throw config_error("[aco] selection must be argmax or roulette");
           }}}},
        {"sweep",
         {{"parameter",
           [&](const std::string &v) {
               sweep.param = sweep_param_from_string(boost::trim_copy(v));
               if (!sweep_named) sweep.name = to_string(sweep.param);
           }},
          {"values",
           [&](const std::string &v) {
               sweep.values.clear();
               for (const auto &p : detail::split_list(v))
                   sweep.values.push_back(detail::parse_value<double>("sweep", "values", p));
           }},
          {"name",
           [&](const std::string &v) {
               sweep.name = boost::trim_copy(v);
               sweep_named = true;
           }}}},
        {"run",
         {{"trials", integer(spec.n_trials, "run", "trials")},
          {"seed",
           [&](const std::string &v) {
               spec.master_seed = detail::parse_value<std::uint64_t>("run", "seed", v);
           }},
          {"schemes", [&](const std::string &v) { spec.schemes = parse_schemes(v); }},
          {"exhaustive_budget",
           [&](const std::string &v) {
               spec.exhaustive_budget =
                   detail::parse_value<std::uint64_t>("run", "exhaustive_budget", v);
           }}}},
    };

    for (const auto &[section, body] : tree) {
        auto sec = handlers.find(section);
        if (sec == handlers.end()) {
            if (body.empty()) throw config_error("key '" + section + "' outside any section");
            throw config_error("unknown section [" + section + "]");
        }
        for (const auto &[key, value] : body) {
            auto h = sec->second.find(key);
            if (h == sec->second.end())
                throw config_error("unknown key '" + key + "' in [" + section + "]");
            h->second(value.data());
        }
    }
    sc.n_rays_range = {rays_lo, rays_hi};
    spec.sweeps = {sweep};
    spec.validate();
    return spec;
}

inline ExperimentSpec load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    return parse_config(in);
}

// Template with every default filled in.
inline std::string default_config_text()
{
    const ExperimentSpec spec;
    const ScenarioConfig &sc = spec.scenario;
    const AcoParams &aco = spec.aco;
    return fmt::format(
        "[scenario]\n"
        "n_antennas = {}\nn_users = {}\ndistance = {}\nring_radius = {}\nsector_origin = random\n"
        "n_clusters = {}\nn_rays_min = {}\nn_rays_max = {}\nangle_spread_deg = {}\n"
        "los_gain_db = {}\nnlos_gain_db = {}\nnoise_variance = {}\ntransmit_power_db = {}\n\n"
        "[aco]\n"
        "a = {}\nq = {}\ngamma = {}\nomega = {}\nsigma_reg = {}\nt_max = {}\nb_k = {}\n"
        "selection = argmax\n\n"
        "[sweep]\n"
        "parameter = transmit_power_db\nvalues = 0, 5, 10, 15, 20, 25, 30\n\n"
        "[run]\n"
        "trials = {}\nseed = {}\nschemes = mm1, ia, aco\nexhaustive_budget = {}\n",
        sc.n_antennas, sc.n_users, sc.distance, sc.ring_radius, sc.n_clusters, sc.n_rays_range.first,
        sc.n_rays_range.second, sc.angle_spread * 180.0 / std::numbers::pi, sc.los_gain_db,
        sc.nlos_gain_db, sc.noise_variance, sc.transmit_power_db, aco.a, aco.q, aco.gamma,
        aco.omega, aco.sigma_reg, aco.t_max, aco.b_k, spec.n_trials, spec.master_seed,
        spec.exhaustive_budget);
}

} // namespace beamsel

#endif
