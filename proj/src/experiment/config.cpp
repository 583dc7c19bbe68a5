#include "qglab/lab/config.hpp"

#include "qglab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace qglab::lab {

using nlohmann::json;

Potential ExperimentConfig::make_potential() const { return qglab::make_potential(potential, potential_params); }

void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& what) { throw InvalidParameter("config: " + what); };
    if (c.nu < 1 || c.nu > 3)
        fail("nu must be 1, 2 or 3");
    if (c.ell_list.empty())
        fail("ell list is empty");
    for (std::size_t i = 0; i < c.ell_list.size(); ++i) {
        if (!(c.ell_list[i] > 0.0))
            fail("ell values must be positive");
        if (i > 0 && !(c.ell_list[i] < c.ell_list[i - 1]))
            fail("ell list must be strictly decreasing");
        if (c.lattice_radius(c.ell_list[i]) < c.ell_list[i])
            fail("radius must be at least 2 ell for every ell");
    }
    if (!(c.fine_h > 0.0) || c.fine_h > c.ell_list.back() / 4.0 * (1.0 + 1e-12))
        fail("fine_h must satisfy 0 < h <= min(ell)/4");
    if (c.z_list.empty())
        fail("z list is empty");
    if (c.probes < 1 || c.adjoint_pairs < 0 || c.bubble_modes < 0)
        fail("probe counts must be positive");
    if (c.window.empty())
        fail("window must satisfy a < b");
    if (c.eigen_count < 1)
        fail("eigen_count must be positive");
    if (!(c.secular_tol > 0.0) || !(c.richardson_tol > 0.0) || !(c.noise_band >= 0.0))
        fail("tolerances must be positive");
    if (c.power.max_iterations < 1 || !(c.power.relative_tolerance > 0.0))
        fail("power iteration settings must be positive");
    qglab::make_potential(c.potential, c.potential_params);
}

json to_json(const ExperimentConfig& c) {
    json z = json::array();
    for (const auto& v : c.z_list)
        z.push_back(format_complex(v));
    return json{
        {"nu", c.nu},
        {"potential", {{"label", c.potential}, {"params", c.potential_params}}},
        {"m_shift", c.m_shift},
        {"z", z},
        {"ell", c.ell_list},
        {"radius", c.radius},
        {"fine_h", c.fine_h},
        {"probes", c.probes},
        {"adjoint_pairs", c.adjoint_pairs},
        {"bubble_modes", c.bubble_modes},
        {"h1_form", c.h1_form},
        {"window", {c.window.lower, c.window.upper}},
        {"eigen_count", c.eigen_count},
        {"tolerances",
         {{"noise_band", c.noise_band},
          {"slope", c.slope_threshold},
          {"secular", c.secular_tol},
          {"richardson", c.richardson_tol},
          {"adjoint", c.adjoint_tol},
          {"nonvacuity", c.nonvacuity},
          {"power_relative", c.power.relative_tolerance},
          {"power_max_iterations", c.power.max_iterations}}},
        {"out_dir", c.out_dir},
        {"seed", c.seed},
    };
}

namespace {

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key))
        out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [k, _] : j.items())
        if (!known.count(k))
            throw ParseError("unknown config key '" + where + k + "'");
}

} // namespace

ExperimentConfig from_json(const json& j) {
    if (!j.is_object())
        throw ParseError("config must be a JSON object");
    reject_unknown(j,
                   {"nu", "potential", "m_shift", "z", "ell", "radius", "fine_h", "probes", "adjoint_pairs",
                    "bubble_modes", "h1_form", "window", "eigen_count", "tolerances", "out_dir", "seed"},
                   "");
    ExperimentConfig c;
    try {
        read(j, "nu", c.nu);
        if (j.contains("potential")) {
            const auto& p = j.at("potential");
            if (p.is_string()) {
                c.potential = p.get<std::string>();
            } else {
                reject_unknown(p, {"label", "params"}, "potential.");
                read(p, "label", c.potential);
                read(p, "params", c.potential_params);
            }
        }
        read(j, "m_shift", c.m_shift);
        if (j.contains("z")) {
            c.z_list.clear();
            for (const auto& v : j.at("z"))
                c.z_list.push_back(v.is_string() ? parse_complex(v.get<std::string>()) : cplx(v.get<double>(), 0.0));
        }
        read(j, "ell", c.ell_list);
        read(j, "radius", c.radius);
        read(j, "fine_h", c.fine_h);
        read(j, "probes", c.probes);
        read(j, "adjoint_pairs", c.adjoint_pairs);
        read(j, "bubble_modes", c.bubble_modes);
        read(j, "h1_form", c.h1_form);
        if (j.contains("window")) {
            const auto w = j.at("window").get<std::vector<double>>();
            if (w.size() != 2)
                throw ParseError("window must have two entries");
            c.window = {w[0], w[1]};
        }
        read(j, "eigen_count", c.eigen_count);
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            reject_unknown(t,
                           {"noise_band", "slope", "secular", "richardson", "adjoint", "nonvacuity", "power_relative",
                            "power_max_iterations"},
                           "tolerances.");
            read(t, "noise_band", c.noise_band);
            read(t, "slope", c.slope_threshold);
            read(t, "secular", c.secular_tol);
            read(t, "richardson", c.richardson_tol);
            read(t, "adjoint", c.adjoint_tol);
            read(t, "nonvacuity", c.nonvacuity);
            read(t, "power_relative", c.power.relative_tolerance);
            read(t, "power_max_iterations", c.power.max_iterations);
        }
        read(j, "out_dir", c.out_dir);
        read(j, "seed", c.seed);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot read config file '" + path + "'");
    try {
        return from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ParseError("config file '" + path + "': " + e.what());
    }
}

std::string config_hash(const ExperimentConfig& c) {
    // where results land is not part of the experiment
    json j = to_json(c);
    j.erase("out_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ')
            s += ch;
    if (s.empty())
        throw ParseError("empty complex number");
    auto to_double = [&](const std::string& part) {
        if (part.empty() || part == "+")
            return 1.0;
        if (part == "-")
            return -1.0;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw ParseError("cannot parse complex number '" + text + "'");
        }
        if (used != part.size())
            throw ParseError("cannot parse complex number '" + text + "'");
        return v;
    };
    if (s.back() != 'i')
        return {to_double(s), 0.0};
    s.pop_back();
    // split at the last sign that is not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    if (split == std::string::npos)
        return {0.0, to_double(s)};
    return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

std::string format_complex(cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find(',', start);
        const std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!item.empty()) {
            std::size_t used = 0;
            try {
                out.push_back(std::stod(item, &used));
            } catch (const std::exception&) {
                throw ParseError("cannot parse number '" + item + "'");
            }
            if (used != item.size())
                throw ParseError("cannot parse number '" + item + "'");
        }
        if (end == std::string::npos)
            break;
        start = end + 1;
    }
    return out;
}

} // namespace qglab::lab
