#include <set>
#include <string>

#include <json.hpp>

#include "cdbundle/error.hpp"
#include "cdbundle/kernels.hpp"

namespace cdbundle {

namespace {

using nlohmann::json;

void require_fields(const json& j, const std::set<std::string>& allowed, const std::string& type) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw SpecParseError("kernel spec '" + type + "': unknown field '" + it.key() + "'");
        }
    }
    for (const auto& name : allowed) {
        if (!j.contains(name)) {
            throw SpecParseError("kernel spec '" + type + "': missing field '" + name + "'");
        }
    }
}

double number_field(const json& j, const char* name) {
    const json& v = j.at(name);
    if (!v.is_number()) {
        throw SpecParseError(std::string("field '") + name + "' must be a number");
    }
    return v.get<double>();
}

int integer_field(const json& j, const char* name) {
    const json& v = j.at(name);
    if (!v.is_number_integer()) {
        throw SpecParseError(std::string("field '") + name + "' must be an integer");
    }
    return v.get<int>();
}

KernelSpec from_json(const json& j) {
    if (!j.is_object()) {
        throw SpecParseError("kernel spec must be a JSON object");
    }
    if (!j.contains("type") || !j.at("type").is_string()) {
        throw SpecParseError("kernel spec needs a string 'type' field");
    }
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "bergman") {
            require_fields(j, {"type", "lambda"}, type);
            return KernelSpec::bergman(number_field(j, "lambda"));
        }
        if (type == "jet") {
            require_fields(j, {"type", "alpha", "beta", "k"}, type);
            return KernelSpec::jet(number_field(j, "alpha"), number_field(j, "beta"), integer_field(j, "k"));
        }
        if (type == "direct_sum") {
            require_fields(j, {"type", "parts"}, type);
            const json& parts = j.at("parts");
            if (!parts.is_array()) throw SpecParseError("direct_sum 'parts' must be an array");
            std::vector<KernelSpec> out;
            for (const auto& p : parts) out.push_back(from_json(p));
            return KernelSpec::direct_sum(std::move(out));
        }
        if (type == "homogeneous") {
            require_fields(j, {"type", "lambda", "mu", "m"}, type);
            const json& mu = j.at("mu");
            if (!mu.is_array()) throw SpecParseError("homogeneous 'mu' must be an array");
            std::vector<double> values;
            for (const auto& v : mu) {
                if (!v.is_number()) throw SpecParseError("homogeneous 'mu' entries must be numbers");
                values.push_back(v.get<double>());
            }
            return KernelSpec::homogeneous(number_field(j, "lambda"), std::move(values), integer_field(j, "m"));
        }
        if (type == "permuted") {
            require_fields(j, {"type", "sigma", "inner"}, type);
            const json& sigma = j.at("sigma");
            if (!sigma.is_array()) throw SpecParseError("permuted 'sigma' must be an array");
            std::vector<int> s;
            for (const auto& v : sigma) {
                if (!v.is_number_integer()) throw SpecParseError("permuted 'sigma' entries must be integers");
                s.push_back(v.get<int>());
            }
            return KernelSpec::permuted(std::move(s), from_json(j.at("inner")));
        }
    } catch (const DomainError& e) {
        throw SpecParseError(std::string("invalid kernel parameters: ") + e.what());
    }
    throw SpecParseError("unknown kernel type '" + type + "'");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json to_json(const KernelSpec& spec) {
    return std::visit(overloaded{
                          [](const BergmanPower& b) { return json{{"type", "bergman"}, {"lambda", b.lambda}}; },
                          [](const Jet& j) {
                              return json{{"type", "jet"}, {"alpha", j.alpha}, {"beta", j.beta}, {"k", j.k}};
                          },
                          [](const DirectSum& d) {
                              json parts = json::array();
                              for (const auto& p : d.parts) parts.push_back(to_json(p));
                              return json{{"type", "direct_sum"}, {"parts", parts}};
                          },
                          [](const Homogeneous& h) {
                              return json{{"type", "homogeneous"}, {"lambda", h.lambda}, {"mu", h.mu}, {"m", h.m}};
                          },
                          [](const Permuted& p) {
                              return json{{"type", "permuted"}, {"sigma", p.sigma}, {"inner", to_json(*p.inner)}};
                          },
                      },
                      spec.node());
}

}  // namespace

KernelSpec parse_kernel_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecParseError(std::string("malformed JSON: ") + e.what());
    }
    return from_json(j);
}

std::string kernel_spec_to_json(const KernelSpec& spec) { return to_json(spec).dump(); }

}  // namespace cdbundle
