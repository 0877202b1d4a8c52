#include "wldp/lawspec.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace wldp::lawspec {

namespace {

using nlohmann::ordered_json;

laws::EntryLaw from_json(const ordered_json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") return laws::gaussian();
    if (kind == "rademacher") return laws::rademacher();
    if (kind == "sparse_gaussian") return laws::sparse_gaussian(j.at("p").get<double>());
    if (kind == "gauss_rademacher_mix") {
        return laws::gauss_rademacher_mix(j.at("a").get<double>(), j.at("b").get<double>(),
                                          j.at("B").get<double>());
    }
    if (kind == "rademacher_mixture") {
        return laws::rademacher_mixture(j.at("weights").get<std::vector<double>>(),
                                        j.at("atoms").get<std::vector<double>>());
    }
    if (kind == "three_point") return laws::three_point(j.at("p").get<double>());
    if (kind == "mixture") {
        laws::MixtureSpec spec;
        spec.gauss_weight = j.value("gauss_weight", 0.0);
        spec.gauss_variance = j.value("gauss_variance", 0.0);
        for (const auto& a : j.value("atoms", ordered_json::array())) {
            spec.atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
        }
        const std::string name = j.value("name", std::string("mixture"));
        return laws::mixture(name, spec);
    }
    throw InvalidParameters("unknown law kind: " + kind);
}

ordered_json to_json(const laws::EntryLaw& law) {
    ordered_json j;
    const auto& name = law.name();
    const auto& mix = law.mixture();
    const auto kind_of = [&]() -> std::string {
        const auto paren = name.find('(');
        return paren == std::string::npos ? name : name.substr(0, paren);
    };
    const std::string kind = kind_of();
    if (kind == "gaussian" || kind == "rademacher") {
        j["kind"] = kind;
        return j;
    }
    if (kind == "sparse_gaussian") {
        j["kind"] = kind;
        j["p"] = mix.gauss_weight;
        return j;
    }
    if (kind == "gauss_rademacher_mix") {
        j["kind"] = kind;
        j["a"] = mix.gauss_weight;
        j["b"] = mix.atoms.at(1).value;
        j["B"] = mix.gauss_variance;
        return j;
    }
    if (kind == "three_point") {
        j["kind"] = kind;
        j["p"] = mix.atoms.at(0).mass * 2.0;
        return j;
    }
    if (kind == "rademacher_mixture") {
        // Fold signed atoms back into (weight, |atom|) pairs.
        std::map<double, double> pos;
        for (const auto& a : mix.atoms) pos[std::abs(a.value)] += a.mass;
        std::vector<double> weights;
        std::vector<double> atoms;
        for (const auto& [v, m] : pos) {
            atoms.push_back(v);
            weights.push_back(m);
        }
        j["kind"] = kind;
        j["weights"] = weights;
        j["atoms"] = atoms;
        return j;
    }
    j["kind"] = "mixture";
    j["name"] = name;
    j["gauss_weight"] = mix.gauss_weight;
    j["gauss_variance"] = mix.gauss_variance;
    auto arr = ordered_json::array();
    for (const auto& a : mix.atoms) arr.push_back({a.value, a.mass});
    j["atoms"] = arr;
    return j;
}

laws::EntryLaw parse_inline(const std::string& spec) {
    const auto colon = spec.find(':');
    ordered_json j;
    j["kind"] = spec.substr(0, colon);
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw InvalidParameters("law spec parameter needs key=value: " + item);
            }
            j[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        }
    }
    return from_json(j);
}

} // namespace

laws::EntryLaw parse(const std::string& spec) {
    if (spec.empty()) throw InvalidParameters("empty law spec");
    std::ifstream in(spec);
    if (in.good()) {
        std::stringstream ss;
        ss << in.rdbuf();
        return from_json_text(ss.str());
    }
    if (spec.front() == '{') return from_json_text(spec);
    return parse_inline(spec);
}

laws::EntryLaw from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameters(std::string("law spec is not valid JSON: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameters(std::string("law spec is missing fields: ") + e.what());
    }
}

std::string to_json_text(const laws::EntryLaw& law) {
    return to_json(law).dump(2) + "\n";
}

} // namespace wldp::lawspec
