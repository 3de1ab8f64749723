#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "locreq/engine.hpp"
#include "locreq/error.hpp"
#include "locreq/simulate.hpp"
#include "locreq/uncertainty.hpp"

namespace locreq {

using json = nlohmann::json;

// Optional simulation settings: trial count, seed, and (when no candidate
// system is listed) the update model and latency the budgets are solved
// against.
struct SimulationFragment {
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<UpdateModel> update;
    std::optional<double> latency_s;
    std::string mode = "worst_case";
};

struct TabulateFragment {
    double start_s = 0.0;
    double stop_s = 0.0;
    double step_s = 0.0;

    std::vector<double> grid() const {
        std::vector<double> g;
        for (int i = 0;; ++i) {
            const double v = start_s + static_cast<double>(i) * step_s;
            if (v > stop_s + 1e-9) break;
            g.push_back(v);
        }
        return g;
    }
};

struct ProjectConfig {
    LocalizationFunctionSpec function;
    std::vector<IlsSpec> ils;
    std::optional<SimulationFragment> simulation;
    std::optional<TabulateFragment> tabulate;
    std::string digest;  // of the raw config bytes
};

namespace cfgdetail {

[[noreturn]] inline void bad(const std::string& path, const std::string& what) {
    fail(Errc::config, path + ": " + what);
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) bad(path, std::string("missing required key '") + key + "'");
    return *it;
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) bad(path, "unknown key '" + it.key() + "'");
    }
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) bad(path, "expected a number");
    return v.get<double>();
}

inline bool boolean(const json& v, const std::string& path) {
    if (!v.is_boolean()) bad(path, "expected a boolean");
    return v.get<bool>();
}

inline std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) bad(path, "expected a string");
    return v.get<std::string>();
}

inline std::uint64_t unsigned_int(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        bad(path, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

// Interval as a two-element [lo, hi] array; null means an unbounded side
// (translational axes only).
inline void parse_interval(const json& v, Axis axis, AxisSpace& out, const std::string& path) {
    if (!v.is_array() || v.size() != 2) bad(path, "expected a two-element [lo, hi] array");
    auto side = [&](const json& e, bool lower) -> double {
        if (e.is_null()) {
            if (axis == Axis::yaw) bad(path, "yaw bounds cannot be unbounded");
            return lower ? -kInf : kInf;
        }
        return number(e, path);
    };
    const double lo = side(v[0], true);
    const double hi = side(v[1], false);
    try {
        out.set(axis, lo, hi);
    } catch (const Error& e) {
        bad(path, e.what());
    }
}

inline AxisSpace parse_space(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected an object of axis intervals");
    AxisSpace space;
    for (auto it = v.begin(); it != v.end(); ++it) {
        Axis axis;
        try {
            axis = axis_from_name(it.key());
        } catch (const Error&) {
            bad(path, "unknown axis '" + it.key() + "'");
        }
        parse_interval(it.value(), axis, space, path + "." + it.key());
    }
    return space;
}

inline ConfidenceLevel parse_confidence(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected {\"sigma\": s} or {\"percentile\": p}");
    reject_unknown_keys(v, {"sigma", "percentile"}, path);
    const bool has_sigma = v.contains("sigma");
    const bool has_pct = v.contains("percentile");
    if (has_sigma == has_pct) bad(path, "exactly one of 'sigma' or 'percentile' required");
    try {
        return has_sigma ? ConfidenceLevel::sigma(number(v["sigma"], path + ".sigma"))
                         : ConfidenceLevel::percentile(number(v["percentile"], path + ".percentile"));
    } catch (const Error& e) {
        bad(path, e.what());
    }
}

inline UpdateModel parse_update(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected an update-model object");
    const std::string type = text(require(v, "type", path), path + ".type");
    if (type == "periodic") {
        reject_unknown_keys(v, {"type", "rate_hz"}, path);
        try {
            return UpdateModel::periodic(number(require(v, "rate_hz", path), path + ".rate_hz"));
        } catch (const Error& e) {
            bad(path, e.what());
        }
    }
    reject_unknown_keys(v, {"type"}, path);
    if (type == "on_request") return UpdateModel::on_request();
    if (type == "on_event") return UpdateModel::on_event();
    bad(path, "unknown update type '" + type + "'");
}

inline ErrorPercentiles parse_percentiles(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected a percentile object");
    reject_unknown_keys(v, {"x", "y", "z", "yaw", "confidence"}, path);
    const double x = number(require(v, "x", path), path + ".x");
    const double y = number(require(v, "y", path), path + ".y");
    const double z = number(require(v, "z", path), path + ".z");
    const double yaw = v.contains("yaw") ? number(v["yaw"], path + ".yaw") : 0.0;
    const ConfidenceLevel c = parse_confidence(require(v, "confidence", path), path + ".confidence");
    try {
        return ErrorPercentiles(x, y, z, yaw, c);
    } catch (const Error& e) {
        bad(path, e.what());
    }
}

inline IlsSpec parse_ils(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected an object");
    reject_unknown_keys(v, {"name", "accuracy", "repeatability", "update", "latency_s"}, path);
    const std::string name = text(require(v, "name", path), path + ".name");
    const ErrorPercentiles acc = parse_percentiles(require(v, "accuracy", path), path + ".accuracy");
    std::optional<ErrorPercentiles> rep;
    if (v.contains("repeatability"))
        rep = parse_percentiles(v["repeatability"], path + ".repeatability");
    const UpdateModel update = parse_update(require(v, "update", path), path + ".update");
    const double latency = number(require(v, "latency_s", path), path + ".latency_s");
    try {
        return IlsSpec(name, acc, rep, update, latency);
    } catch (const Error& e) {
        bad(path, e.what());
    }
}

inline LocalizationFunctionSpec parse_function(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected an object");
    reject_unknown_keys(v,
                        {"name", "entity", "localization_type", "dof", "interest_space",
                         "motion_space", "safety_margin", "reference_basis", "confidence",
                         "max_velocity", "realtime_required", "transform_L_to_I"},
                        path);

    LocalizationFunctionSpec spec{.name = text(require(v, "name", path), path + ".name"),
                                  .entity = text(require(v, "entity", path), path + ".entity"),
                                  .localization_type = LocalizationType::absolute,
                                  .dof = {},
                                  .interest_space = {},
                                  .motion_space = {},
                                  .safety_margin = MarginVector(DofMask::of({Axis::x}), {}),
                                  .reference_basis = StaticBasis::ground_truth,
                                  .confidence = ConfidenceLevel::percentile(0.5),
                                  .max_velocity = {},
                                  .realtime_required = false,
                                  .transform_L_to_I = {}};

    const std::string type =
        text(require(v, "localization_type", path), path + ".localization_type");
    if (type == "absolute")
        spec.localization_type = LocalizationType::absolute;
    else if (type == "relative")
        spec.localization_type = LocalizationType::relative;
    else
        bad(path + ".localization_type", "must be 'absolute' or 'relative'");

    const json& dof_json = require(v, "dof", path);
    if (!dof_json.is_array() || dof_json.empty())
        bad(path + ".dof", "expected a nonempty array of axis names");
    std::vector<Axis> axes;
    for (const auto& e : dof_json) axes.push_back(axis_from_name(text(e, path + ".dof")));
    try {
        spec.dof = DofMask::make(axes);
    } catch (const Error& e) {
        bad(path + ".dof", e.what());
    }

    spec.interest_space =
        parse_space(require(v, "interest_space", path), path + ".interest_space");
    spec.motion_space = parse_space(require(v, "motion_space", path), path + ".motion_space");

    const json& safety = require(v, "safety_margin", path);
    if (!safety.is_object()) bad(path + ".safety_margin", "expected an object of axis values");
    reject_unknown_keys(safety, {"x", "y", "z", "yaw"}, path + ".safety_margin");
    std::array<double, 4> s{};
    for (Axis a : spec.dof.axes()) {
        const std::string key{axis_name(a)};
        if (!safety.contains(key))
            bad(path + ".safety_margin", "missing dof axis '" + key + "'");
        s[axis_index(a)] = number(safety[key], path + ".safety_margin." + key);
    }
    try {
        spec.safety_margin = MarginVector(spec.dof, s);
    } catch (const Error& e) {
        bad(path + ".safety_margin", e.what());
    }

    const std::string basis =
        text(require(v, "reference_basis", path), path + ".reference_basis");
    if (basis == "ground_truth")
        spec.reference_basis = StaticBasis::ground_truth;
    else if (basis == "same_system_map")
        spec.reference_basis = StaticBasis::same_system_map;
    else
        bad(path + ".reference_basis", "must be 'ground_truth' or 'same_system_map'");

    spec.confidence = parse_confidence(require(v, "confidence", path), path + ".confidence");

    const json& vel = require(v, "max_velocity", path);
    if (!vel.is_object()) bad(path + ".max_velocity", "expected an object of axis values");
    reject_unknown_keys(vel, {"x", "y", "z", "yaw"}, path + ".max_velocity");
    std::array<double, 4> vv{};
    for (Axis a : kAxisOrder) {
        const std::string key{axis_name(a)};
        if (vel.contains(key))
            vv[axis_index(a)] = number(vel[key], path + ".max_velocity." + key);
        else if (spec.dof.contains(a))
            bad(path + ".max_velocity", "missing dof axis '" + key + "'");
    }
    try {
        spec.max_velocity = VelocityBound(vv[0], vv[1], vv[2], vv[3]);
    } catch (const Error& e) {
        bad(path + ".max_velocity", e.what());
    }

    spec.realtime_required =
        boolean(require(v, "realtime_required", path), path + ".realtime_required");

    const json& tr = require(v, "transform_L_to_I", path);
    if (!tr.is_object()) bad(path + ".transform_L_to_I", "expected an object");
    reject_unknown_keys(tr, {"translation", "yaw_offset"}, path + ".transform_L_to_I");
    const json& trans = require(tr, "translation", path + ".transform_L_to_I");
    if (!trans.is_array() || trans.size() != 3)
        bad(path + ".transform_L_to_I.translation", "expected a three-element [x, y, z] array");
    const std::string tpath = path + ".transform_L_to_I";
    try {
        spec.transform_L_to_I =
            RigidTransform(number(trans[0], tpath), number(trans[1], tpath),
                           number(trans[2], tpath),
                           number(require(tr, "yaw_offset", tpath), tpath + ".yaw_offset"));
    } catch (const Error& e) {
        bad(tpath, e.what());
    }

    // Cross-field invariants (containment and friends); validate() already
    // speaks in config paths.
    spec.validate();
    return spec;
}

inline SimulationFragment parse_simulation(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected an object");
    reject_unknown_keys(v, {"trials", "seed", "update", "latency_s", "mode"}, path);
    SimulationFragment f;
    if (v.contains("trials")) {
        f.trials = unsigned_int(v["trials"], path + ".trials");
        if (*f.trials < 1) bad(path + ".trials", "at least one trial required");
    }
    if (v.contains("seed")) f.seed = unsigned_int(v["seed"], path + ".seed");
    if (v.contains("update")) f.update = parse_update(v["update"], path + ".update");
    if (v.contains("latency_s")) {
        f.latency_s = number(v["latency_s"], path + ".latency_s");
        if (!(*f.latency_s >= 0.0)) bad(path + ".latency_s", "must be nonnegative");
    }
    if (v.contains("mode")) {
        f.mode = text(v["mode"], path + ".mode");
        if (f.mode != "worst_case") bad(path + ".mode", "only 'worst_case' is supported");
    }
    return f;
}

inline TabulateFragment parse_tabulate(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected an object");
    reject_unknown_keys(v, {"start_s", "stop_s", "step_s"}, path);
    TabulateFragment f;
    f.start_s = number(require(v, "start_s", path), path + ".start_s");
    f.stop_s = number(require(v, "stop_s", path), path + ".stop_s");
    f.step_s = number(require(v, "step_s", path), path + ".step_s");
    if (!(f.start_s >= 0.0)) bad(path + ".start_s", "must be nonnegative");
    if (!(f.step_s > 0.0)) bad(path + ".step_s", "must be strictly positive");
    if (!(f.stop_s >= f.start_s)) bad(path + ".stop_s", "must be >= start_s");
    return f;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

}  // namespace cfgdetail

inline ProjectConfig parse_config(std::string_view bytes) {
    json root;
    try {
        root = json::parse(bytes);
    } catch (const json::parse_error& e) {
        fail(Errc::config, std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail(Errc::config, "config: top level must be an object");
    cfgdetail::reject_unknown_keys(root, {"function", "ils", "simulation", "tabulate"}, "config");

    ProjectConfig cfg{
        .function = cfgdetail::parse_function(cfgdetail::require(root, "function", "config"),
                                              "function"),
        .ils = {},
        .simulation = {},
        .tabulate = {},
        .digest = cfgdetail::fnv1a64_hex(bytes)};

    if (root.contains("ils")) {
        const json& arr = root["ils"];
        if (!arr.is_array()) cfgdetail::bad("ils", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.ils.push_back(cfgdetail::parse_ils(arr[i], "ils[" + std::to_string(i) + "]"));
    }
    if (root.contains("simulation"))
        cfg.simulation = cfgdetail::parse_simulation(root["simulation"], "simulation");
    if (root.contains("tabulate"))
        cfg.tabulate = cfgdetail::parse_tabulate(root["tabulate"], "tabulate");
    return cfg;
}

// Normalized echo of a parsed config: defaults materialized, keys sorted.
// Parsing the echo again yields an equivalent config.
inline json config_echo(const ProjectConfig& cfg) {
    const auto& f = cfg.function;

    auto confidence_json = [](const ConfidenceLevel& c) {
        json j;
        if (c.is_sigma())
            j["sigma"] = c.sigma_level();
        else
            j["percentile"] = c.percentile_value();
        return j;
    };
    auto space_json = [&](const AxisSpace& s) {
        json j = json::object();
        for (Axis a : kAxisOrder) {
            if (auto iv = s.maybe(a)) {
                json lo = std::isinf(iv->lo) ? json() : json(iv->lo);
                json hi = std::isinf(iv->hi) ? json() : json(iv->hi);
                j[std::string(axis_name(a))] = json::array({lo, hi});
            }
        }
        return j;
    };
    auto update_json = [](const UpdateModel& u) {
        json j;
        switch (u.kind()) {
            case UpdateModel::Kind::periodic:
                j["type"] = "periodic";
                j["rate_hz"] = u.rate_hz();
                break;
            case UpdateModel::Kind::on_request: j["type"] = "on_request"; break;
            case UpdateModel::Kind::on_event: j["type"] = "on_event"; break;
        }
        return j;
    };
    auto percentiles_json = [&](const ErrorPercentiles& p) {
        json j;
        j["x"] = p.x;
        j["y"] = p.y;
        j["z"] = p.z;
        j["yaw"] = p.yaw;
        j["confidence"] = confidence_json(p.confidence);
        return j;
    };

    json fj;
    fj["name"] = f.name;
    fj["entity"] = f.entity;
    fj["localization_type"] = std::string(localization_type_name(f.localization_type));
    json dof = json::array();
    for (Axis a : f.dof.axes()) dof.push_back(std::string(axis_name(a)));
    fj["dof"] = dof;
    fj["interest_space"] = space_json(f.interest_space);
    fj["motion_space"] = space_json(f.motion_space);
    json safety = json::object();
    for (Axis a : f.dof.axes()) safety[std::string(axis_name(a))] = f.safety_margin[a];
    fj["safety_margin"] = safety;
    fj["reference_basis"] = std::string(basis_name(f.reference_basis));
    fj["confidence"] = confidence_json(f.confidence);
    json vel;
    for (Axis a : kAxisOrder) vel[std::string(axis_name(a))] = f.max_velocity.at(a);
    fj["max_velocity"] = vel;
    fj["realtime_required"] = f.realtime_required;
    json tr;
    tr["translation"] =
        json::array({f.transform_L_to_I.tx, f.transform_L_to_I.ty, f.transform_L_to_I.tz});
    tr["yaw_offset"] = f.transform_L_to_I.yaw_offset;
    fj["transform_L_to_I"] = tr;

    json root;
    root["function"] = fj;
    if (!cfg.ils.empty()) {
        json arr = json::array();
        for (const IlsSpec& ils : cfg.ils) {
            json j;
            j["name"] = ils.name;
            j["accuracy"] = percentiles_json(ils.accuracy);
            if (ils.repeatability) j["repeatability"] = percentiles_json(*ils.repeatability);
            j["update"] = update_json(ils.update);
            j["latency_s"] = ils.latency_s;
            arr.push_back(j);
        }
        root["ils"] = arr;
    }
    if (cfg.simulation) {
        json j = json::object();
        if (cfg.simulation->trials) j["trials"] = *cfg.simulation->trials;
        if (cfg.simulation->seed) j["seed"] = *cfg.simulation->seed;
        if (cfg.simulation->update) j["update"] = update_json(*cfg.simulation->update);
        if (cfg.simulation->latency_s) j["latency_s"] = *cfg.simulation->latency_s;
        j["mode"] = cfg.simulation->mode;
        root["simulation"] = j;
    }
    if (cfg.tabulate) {
        json j;
        j["start_s"] = cfg.tabulate->start_s;
        j["stop_s"] = cfg.tabulate->stop_s;
        j["step_s"] = cfg.tabulate->step_s;
        root["tabulate"] = j;
    }
    return root;
}

}  // namespace locreq
