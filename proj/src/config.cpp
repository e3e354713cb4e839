#include "bdris/config.hpp"

#include "bdris/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace bdris {

using nlohmann::json;

namespace {

std::string json_type_name(const json& v) {
    switch (v.type()) {
        case json::value_t::null: return "null";
        case json::value_t::object: return "object";
        case json::value_t::array: return "array";
        case json::value_t::string: return "string";
        case json::value_t::boolean: return "boolean";
        case json::value_t::number_integer:
        case json::value_t::number_unsigned:
        case json::value_t::number_float: return "number";
        default: return "unknown";
    }
}

[[noreturn]] void type_error(const std::string& path, const char* expected, const json& got) {
    throw ConfigError(path + ": expected " + expected + ", got " + json_type_name(got));
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number())
        type_error(path, "number", v);
    return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        type_error(path, "integer", v);
    return v.get<int>();
}

std::uint64_t as_uint64(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        type_error(path, "non-negative integer", v);
    return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean())
        type_error(path, "boolean", v);
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string())
        type_error(path, "string", v);
    return v.get<std::string>();
}

Eigen::Vector3d as_vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3)
        throw ConfigError(path + ": expected an array of 3 coordinates");
    Eigen::Vector3d out;
    for (int i = 0; i < 3; ++i)
        out(i) = as_number(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
    return out;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return item.key() == k;
            }) == allowed.end())
            throw ConfigError(path + "." + item.key() + ": unknown field");
    }
}

// Section accessor: missing sections fall back to defaults; present
// non-objects are rejected by name.
const json* section(const json& root, const char* key) {
    auto it = root.find(key);
    if (it == root.end())
        return nullptr;
    if (!it->is_object())
        type_error(key, "object", *it);
    return &*it;
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    const std::size_t upto = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ":" + std::to_string(line_of_byte(text, e.byte)) +
                          ": " + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_overrides(json& root, const std::vector<std::string>& overrides) {
    for (const std::string& ov : overrides) {
        const std::size_t eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--set " + ov + ": expected key.path=value");
        std::string key = ov.substr(0, eq);
        const std::string raw = ov.substr(eq + 1);
        std::string pointer = "/";
        for (char c : key)
            pointer += c == '.' ? '/' : c;
        pointer.erase(std::unique(pointer.begin(), pointer.end(),
                                  [](char a, char b) { return a == '/' && b == '/'; }),
                      pointer.end());
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw; // unquoted strings pass through verbatim
        }
        try {
            root[json::json_pointer(pointer)] = value;
        } catch (const json::exception& e) {
            throw ConfigError("--set " + ov + ": cannot apply (" + e.what() + ")");
        }
    }
}

int parse_resolution(const json& v, const std::string& path) {
    if (v.is_string()) {
        if (v.get<std::string>() == "continuous")
            return 0;
        throw ConfigError(path + ": expected \"continuous\" or an integer >= 2, got \"" +
                          v.get<std::string>() + "\"");
    }
    const int m = as_int(v, path);
    if (m < 2)
        throw ConfigError(path + ": alphabet size must be >= 2 (got " + std::to_string(m) + ")");
    return m;
}

SystemConfig config_from_json(const json& root) {
    SystemConfig cfg;
    check_keys(root, "config",
               {"seed", "trial", "architecture", "arrays", "carrier", "phases", "objective",
                "noise", "path_loss", "geometry", "power", "penalty"});

    if (auto it = root.find("seed"); it != root.end())
        cfg.seed = as_uint64(*it, "seed");

    if (const json* arrays = section(root, "arrays")) {
        check_keys(*arrays, "arrays", {"dfbs_antennas", "users", "ris_lx", "ris_ly"});
        if (auto it = arrays->find("dfbs_antennas"); it != arrays->end())
            cfg.n_tx = as_int(*it, "arrays.dfbs_antennas");
        if (auto it = arrays->find("users"); it != arrays->end())
            cfg.n_users = as_int(*it, "arrays.users");
        if (auto it = arrays->find("ris_lx"); it != arrays->end())
            cfg.ris_lx = as_int(*it, "arrays.ris_lx");
        if (auto it = arrays->find("ris_ly"); it != arrays->end())
            cfg.ris_ly = as_int(*it, "arrays.ris_ly");
    }

    if (const json* carrier = section(root, "carrier")) {
        check_keys(*carrier, "carrier", {"fc_hz", "spacing_m"});
        if (auto it = carrier->find("fc_hz"); it != carrier->end())
            cfg.fc_hz = as_number(*it, "carrier.fc_hz");
        if (auto it = carrier->find("spacing_m"); it != carrier->end())
            cfg.spacing_m = as_number(*it, "carrier.spacing_m");
    }

    if (const json* phases = section(root, "phases")) {
        check_keys(*phases, "phases", {"resolution"});
        if (auto it = phases->find("resolution"); it != phases->end())
            cfg.resolution = parse_resolution(*it, "phases.resolution");
    }

    if (const json* objective = section(root, "objective")) {
        check_keys(*objective, "objective", {"beta"});
        if (auto it = objective->find("beta"); it != objective->end())
            cfg.beta = as_number(*it, "objective.beta");
    }

    if (const json* noise = section(root, "noise")) {
        check_keys(*noise, "noise", {"sigma2_c_dbm", "sigma2_r_dbm"});
        if (auto it = noise->find("sigma2_c_dbm"); it != noise->end())
            cfg.sigma2_c_w = dbm_to_watts(as_number(*it, "noise.sigma2_c_dbm"));
        if (auto it = noise->find("sigma2_r_dbm"); it != noise->end())
            cfg.sigma2_r_w = dbm_to_watts(as_number(*it, "noise.sigma2_r_dbm"));
    }

    if (const json* pl = section(root, "path_loss")) {
        check_keys(*pl, "path_loss", {"p0_db", "alpha_rd", "alpha_ur", "alpha_ud"});
        if (auto it = pl->find("p0_db"); it != pl->end())
            cfg.p0 = db_to_linear(as_number(*it, "path_loss.p0_db"));
        if (auto it = pl->find("alpha_rd"); it != pl->end())
            cfg.alpha_rd = as_number(*it, "path_loss.alpha_rd");
        if (auto it = pl->find("alpha_ur"); it != pl->end())
            cfg.alpha_ur = as_number(*it, "path_loss.alpha_ur");
        if (auto it = pl->find("alpha_ud"); it != pl->end())
            cfg.alpha_ud = as_number(*it, "path_loss.alpha_ud");
    }

    if (const json* geo = section(root, "geometry")) {
        check_keys(*geo, "geometry", {"dfbs", "ris", "users", "target"});
        if (auto it = geo->find("dfbs"); it != geo->end())
            cfg.pos_dfbs = as_vec3(*it, "geometry.dfbs");
        if (auto it = geo->find("ris"); it != geo->end())
            cfg.pos_ris = as_vec3(*it, "geometry.ris");
        if (auto it = geo->find("users"); it != geo->end())
            cfg.pos_users = as_vec3(*it, "geometry.users");
        if (auto it = geo->find("target"); it != geo->end())
            cfg.pos_target = as_vec3(*it, "geometry.target");
    }

    if (const json* power = section(root, "power")) {
        check_keys(*power, "power", {"tx_power_w", "precoder"});
        if (auto it = power->find("tx_power_w"); it != power->end())
            cfg.tx_power_w = as_number(*it, "power.tx_power_w");
        if (auto it = power->find("precoder"); it != power->end()) {
            const std::string kind = as_string(*it, "power.precoder");
            if (kind == "gaussian")
                cfg.precoder = PrecoderKind::gaussian;
            else if (kind == "dft")
                cfg.precoder = PrecoderKind::dft;
            else
                throw ConfigError("power.precoder: expected \"gaussian\" or \"dft\", got \"" +
                                  kind + "\"");
        }
    }

    if (const json* penalty = section(root, "penalty")) {
        check_keys(*penalty, "penalty",
                   {"rho0", "rho1", "rho2", "eps_inner", "eps_inner_latent", "eps_outer",
                    "max_inner_iters", "max_outer_iters", "ramp"});
        PenaltyConfig& pc = cfg.penalty;
        if (auto it = penalty->find("rho0"); it != penalty->end())
            pc.rho0 = as_number(*it, "penalty.rho0");
        if (auto it = penalty->find("rho1"); it != penalty->end())
            pc.rho1 = as_number(*it, "penalty.rho1");
        if (auto it = penalty->find("rho2"); it != penalty->end())
            pc.rho2 = as_number(*it, "penalty.rho2");
        if (auto it = penalty->find("eps_inner"); it != penalty->end())
            pc.eps_inner = as_number(*it, "penalty.eps_inner");
        if (auto it = penalty->find("eps_inner_latent"); it != penalty->end())
            pc.eps_inner_latent = as_number(*it, "penalty.eps_inner_latent");
        if (auto it = penalty->find("eps_outer"); it != penalty->end())
            pc.eps_outer = as_number(*it, "penalty.eps_outer");
        if (auto it = penalty->find("max_inner_iters"); it != penalty->end())
            pc.max_inner_iters = as_int(*it, "penalty.max_inner_iters");
        if (auto it = penalty->find("max_outer_iters"); it != penalty->end())
            pc.max_outer_iters = as_int(*it, "penalty.max_outer_iters");
        if (auto it = penalty->find("ramp"); it != penalty->end())
            pc.ramp = as_bool(*it, "penalty.ramp");
    }

    return cfg;
}

} // namespace

double dbm_to_watts(double dbm) {
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

double db_to_linear(double db) {
    return std::pow(10.0, db / 10.0);
}

void PenaltyConfig::validate() const {
    auto positive = [](std::optional<double> v, const char* name) {
        if (v && *v <= 0.0)
            throw ConfigError(std::string("penalty.") + name + ": must be positive");
    };
    positive(rho0, "rho0");
    positive(rho1, "rho1");
    positive(rho2, "rho2");
    if (eps_inner <= 0.0)
        throw ConfigError("penalty.eps_inner: must be positive");
    if (eps_inner_latent <= 0.0)
        throw ConfigError("penalty.eps_inner_latent: must be positive");
    if (eps_outer <= 0.0)
        throw ConfigError("penalty.eps_outer: must be positive");
    if (max_inner_iters < 1)
        throw ConfigError("penalty.max_inner_iters: must be >= 1");
    if (max_outer_iters < 1)
        throw ConfigError("penalty.max_outer_iters: must be >= 1");
}

void SystemConfig::validate() const {
    if (n_tx < 1)
        throw ConfigError("arrays.dfbs_antennas: must be >= 1");
    if (n_users < 1)
        throw ConfigError("arrays.users: must be >= 1");
    if (ris_lx < 1)
        throw ConfigError("arrays.ris_lx: must be >= 1");
    if (ris_ly < 1)
        throw ConfigError("arrays.ris_ly: must be >= 1");
    if (fc_hz <= 0.0)
        throw ConfigError("carrier.fc_hz: must be positive");
    if (spacing_m && *spacing_m <= 0.0)
        throw ConfigError("carrier.spacing_m: must be positive");
    if (resolution != 0 && resolution < 2)
        throw ConfigError("phases.resolution: alphabet size must be >= 2");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw ConfigError("objective.beta: must be within [0, 1]");
    if (sigma2_c_w <= 0.0)
        throw ConfigError("noise.sigma2_c_dbm: resulting noise power must be positive");
    if (sigma2_r_w <= 0.0)
        throw ConfigError("noise.sigma2_r_dbm: resulting noise power must be positive");
    if (p0 <= 0.0)
        throw ConfigError("path_loss.p0_db: resulting reference gain must be positive");
    if (alpha_rd < 0.0)
        throw ConfigError("path_loss.alpha_rd: must be non-negative");
    if (alpha_ur < 0.0)
        throw ConfigError("path_loss.alpha_ur: must be non-negative");
    if (alpha_ud < 0.0)
        throw ConfigError("path_loss.alpha_ud: must be non-negative");
    if (tx_power_w <= 0.0)
        throw ConfigError("power.tx_power_w: must be positive");
    if ((pos_target - pos_ris).norm() <= 0.0)
        throw ConfigError("geometry.target: coincides with the RIS, direction undefined");
    penalty.validate();
}

ArchSpec parse_architecture(const std::string& token) {
    ArchSpec spec;
    if (token == "no-ris") {
        spec.family = ArchSpec::Family::no_ris;
        return spec;
    }
    if (token == "random") {
        spec.family = ArchSpec::Family::random;
        return spec;
    }
    std::string head = token, tail;
    if (const std::size_t dash = token.find('-'); dash != std::string::npos) {
        head = token.substr(0, dash);
        tail = token.substr(dash + 1);
    }
    if (head == "bdris")
        spec.family = ArchSpec::Family::bdris;
    else if (head == "dris")
        spec.family = ArchSpec::Family::dris;
    else
        throw ConfigError("architecture: unknown token \"" + token +
                          "\" (expected bdris, dris, no-ris or random, optionally "
                          "-continuous or -M)");
    if (!tail.empty()) {
        if (tail == "continuous") {
            spec.resolution = 0;
        } else {
            try {
                const int m = std::stoi(tail);
                if (m < 2 || std::to_string(m) != tail)
                    throw std::invalid_argument("");
                spec.resolution = m;
            } catch (const std::exception&) {
                throw ConfigError("architecture: bad resolution suffix in \"" + token + "\"");
            }
        }
    }
    return spec;
}

int ArchSpec::effective_resolution(const SystemConfig& cfg) const {
    return resolution ? *resolution : cfg.resolution;
}

std::string ArchSpec::canonical(const SystemConfig& cfg) const {
    switch (family) {
        case Family::no_ris: return "no-ris";
        case Family::random: return "random";
        case Family::bdris:
        case Family::dris: {
            const std::string head = family == Family::bdris ? "bdris" : "dris";
            const int m = effective_resolution(cfg);
            return head + (m == 0 ? "-continuous" : "-" + std::to_string(m));
        }
    }
    return "?";
}

RunSpec parse_run_spec(const std::string& text, const std::string& origin,
                       const std::vector<std::string>& overrides) {
    json root = parse_json_text(text, origin);
    if (!root.is_object())
        throw ConfigError(origin + ": top level must be an object");
    apply_overrides(root, overrides);

    RunSpec spec;
    if (auto it = root.find("architecture"); it != root.end())
        spec.architecture = as_string(*it, "architecture");
    if (auto it = root.find("trial"); it != root.end())
        spec.trial = as_uint64(*it, "trial");
    spec.config = config_from_json(root);
    spec.config.validate();
    parse_architecture(spec.architecture); // reject bad tokens now
    return spec;
}

RunSpec load_run_spec(const std::string& path, const std::vector<std::string>& overrides) {
    return parse_run_spec(read_file(path), path, overrides);
}

void SweepSpec::validate() const {
    if (axis != "beta" && axis != "L" && axis != "M" && axis != "architecture")
        throw ConfigError("axis: expected beta, L, M or architecture, got \"" + axis + "\"");
    if (value_tokens.empty())
        throw ConfigError("values: must be a non-empty array");
    if (trials < 1)
        throw ConfigError("trials: must be >= 1");
    if (axis != "architecture" && architectures.empty())
        throw ConfigError("architectures: must be a non-empty array");
    for (const std::string& a : architectures)
        parse_architecture(a);
    if (output_dir.empty())
        throw ConfigError("output_dir: must be non-empty");
    base.validate();
}

SweepSpec parse_sweep_spec(const std::string& text, const std::string& origin,
                           const std::string& base_dir) {
    json root = parse_json_text(text, origin);
    if (!root.is_object())
        throw ConfigError(origin + ": top level must be an object");
    check_keys(root, "sweep",
               {"axis", "values", "trials", "architectures", "base_config", "output_dir"});

    SweepSpec spec;
    if (auto it = root.find("axis"); it != root.end())
        spec.axis = as_string(*it, "axis");
    else
        throw ConfigError("axis: required field is missing");

    if (auto it = root.find("trials"); it != root.end())
        spec.trials = as_int(*it, "trials");

    if (auto it = root.find("output_dir"); it != root.end())
        spec.output_dir = as_string(*it, "output_dir");

    if (auto it = root.find("base_config"); it != root.end()) {
        if (it->is_string()) {
            std::filesystem::path p = it->get<std::string>();
            if (p.is_relative() && !base_dir.empty())
                p = std::filesystem::path(base_dir) / p;
            const std::string ptext = read_file(p.string());
            json broot = parse_json_text(ptext, p.string());
            if (!broot.is_object())
                throw ConfigError(p.string() + ": top level must be an object");
            spec.base = config_from_json(broot);
        } else if (it->is_object()) {
            spec.base = config_from_json(*it);
        } else {
            type_error("base_config", "string path or object", *it);
        }
    }

    auto vit = root.find("values");
    if (vit == root.end() || !vit->is_array())
        throw ConfigError("values: required array is missing");

    char buf[64];
    for (std::size_t i = 0; i < vit->size(); ++i) {
        const json& v = (*vit)[i];
        const std::string path = "values[" + std::to_string(i) + "]";
        if (spec.axis == "beta") {
            const double b = as_number(v, path);
            spec.beta_values.push_back(b);
            std::snprintf(buf, sizeof buf, "%.12g", b);
            spec.value_tokens.emplace_back(buf);
        } else if (spec.axis == "L") {
            if (!v.is_array() || v.size() != 2)
                throw ConfigError(path + ": expected [lx, ly]");
            const int lx = as_int(v[0], path + "[0]");
            const int ly = as_int(v[1], path + "[1]");
            spec.l_values.emplace_back(lx, ly);
            spec.value_tokens.push_back(std::to_string(lx) + "x" + std::to_string(ly));
        } else if (spec.axis == "M") {
            const int m = parse_resolution(v, path);
            spec.m_values.push_back(m);
            spec.value_tokens.push_back(m == 0 ? "continuous" : std::to_string(m));
        } else { // architecture
            const std::string token = as_string(v, path);
            spec.architectures.push_back(token);
            spec.value_tokens.push_back(token);
        }
    }

    if (auto it = root.find("architectures"); it != root.end()) {
        if (spec.axis == "architecture")
            throw ConfigError("architectures: not allowed when axis is architecture");
        if (!it->is_array())
            type_error("architectures", "array", *it);
        for (std::size_t i = 0; i < it->size(); ++i)
            spec.architectures.push_back(
                as_string((*it)[i], "architectures[" + std::to_string(i) + "]"));
    }

    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_sweep_spec(read_file(path), path, dir);
}

} // namespace bdris
