#include "schro/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "schro/eigensolve.hpp"
#include "schro/errors.hpp"
#include "schro/functions.hpp"

namespace schro {

namespace {

using json = ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw config_error(path + ": " + what);
}

double get_number(const json& j, const std::string& path, const std::string& key,
                  std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required number missing");
    }
    if (!j.at(key).is_number()) fail(path + "." + key, "expected a number");
    return j.at(key).get<double>();
}

std::size_t get_count(const json& j, const std::string& path, const std::string& key,
                      std::optional<std::size_t> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required integer missing");
    }
    if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 0)
        fail(path + "." + key, "expected a nonnegative integer");
    return j.at(key).get<std::size_t>();
}

std::string get_string(const json& j, const std::string& path, const std::string& key,
                       std::optional<std::string> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required string missing");
    }
    if (!j.at(key).is_string()) fail(path + "." + key, "expected a string");
    return j.at(key).get<std::string>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) fail(path + "." + key, "expected a boolean");
    return j.at(key).get<bool>();
}

void check_space_location(const json& d, const std::string& path) {
    const double x0 = get_number(d, path, "x0", 0.5);
    if (!(x0 > 0.0 && x0 < 1.0)) fail(path + ".x0", "must lie inside (0,1)");
}

// Canonicalizes a potential descriptor; `vws_context` allows eps-free weak
// kinds (the ladder supplies eps).
json canon_potential(const json& in, bool vws_context) {
    const std::string path = "problem.potential";
    if (!in.is_object()) fail(path, "expected an object");
    const std::string kind = get_string(in, path, "kind");
    json out;
    out["kind"] = kind;
    if (kind == "direct_q") {
        if (in.contains("constant")) {
            const double c = get_number(in, path, "constant");
            if (c < 0.0) fail(path + ".constant", "potential must satisfy q >= 0");
            out["constant"] = c;
        } else {
            const std::string fn = get_string(in, path, "function", "zero");
            space_function(fn);  // existence check
            out["function"] = fn;
        }
        out["mollify"] = get_bool(in, path, "mollify", false);
    } else if (kind == "delta") {
        check_space_location(in, path);
        out["x0"] = get_number(in, path, "x0", 0.5);
        if (!vws_context) out["epsilon"] = get_number(in, path, "epsilon");
    } else if (kind == "heaviside_nu") {
        check_space_location(in, path);
        out["x0"] = get_number(in, path, "x0", 0.5);
        if (!vws_context) out["epsilon"] = get_number(in, path, "epsilon");
    } else if (kind == "power_nu") {
        check_space_location(in, path);
        out["x0"] = get_number(in, path, "x0", 0.5);
        const double alpha = get_number(in, path, "alpha");
        if (!(alpha > 0.0 && alpha < 0.5)) fail(path + ".alpha", "must lie in (0, 1/2)");
        out["alpha"] = alpha;
        if (!vws_context) out["epsilon"] = get_number(in, path, "epsilon");
    } else {
        fail(path + ".kind",
             "unknown potential kind '" + kind +
                 "' (expected direct_q | delta | heaviside_nu | power_nu)");
    }
    if (!vws_context && out.contains("epsilon") && !(out["epsilon"].get<double>() > 0.0))
        fail(path + ".epsilon", "must be positive");
    return out;
}

json canon_coefficient(const json& in) {
    const std::string path = "problem.a";
    if (!in.is_object()) fail(path, "expected an object");
    const std::string kind = get_string(in, path, "kind", "constant");
    json out;
    out["kind"] = kind;
    if (kind == "constant") {
        const double v = get_number(in, path, "value", 1.0);
        if (!(v > 0.0)) fail(path + ".value", "constant coefficient must be positive");
        out["value"] = v;
    } else if (kind == "function") {
        const std::string fn = get_string(in, path, "name");
        time_function(fn);
        out["name"] = fn;
    } else if (kind == "jump") {
        out["t0"] = get_number(in, path, "t0");
        out["left"] = get_number(in, path, "left");
        out["right"] = get_number(in, path, "right");
        if (!(out["left"].get<double>() > 0.0 && out["right"].get<double>() > 0.0))
            fail(path, "jump levels must be positive");
    } else {
        fail(path + ".kind", "unknown coefficient kind '" + kind + "'");
    }
    return out;
}

json canon_u0(const json& in, bool vws_context) {
    const std::string path = "problem.u0";
    if (!in.is_object()) fail(path, "expected an object");
    const std::string kind = get_string(in, path, "kind", "function");
    json out;
    out["kind"] = kind;
    if (kind == "function") {
        const std::string fn = get_string(in, path, "name", "sqrt2_sin_pi");
        space_function(fn);
        out["name"] = fn;
        out["mollify"] = get_bool(in, path, "mollify", false);
    } else if (kind == "delta") {
        check_space_location(in, path);
        out["x0"] = get_number(in, path, "x0", 0.5);
        if (!vws_context) out["epsilon"] = get_number(in, path, "epsilon");
    } else if (kind == "mode") {
        const std::size_t n = get_count(in, path, "n", std::size_t{1});
        if (n == 0) fail(path + ".n", "mode index is 1-based");
        out["n"] = n;
    } else {
        fail(path + ".kind", "unknown u0 kind '" + kind + "' (expected function | delta | mode)");
    }
    return out;
}

json canon_source(const json& in) {
    const std::string path = "problem.f";
    if (!in.is_object()) fail(path, "expected an object");
    const std::string kind = get_string(in, path, "kind", "none");
    json out;
    out["kind"] = kind;
    if (kind == "none") return out;
    if (kind == "mode_constant") {
        out["mode"] = get_count(in, path, "mode", std::size_t{1});
        out["re"] = get_number(in, path, "re", 1.0);
        out["im"] = get_number(in, path, "im", 0.0);
    } else if (kind == "mode_oscillating") {
        out["mode"] = get_count(in, path, "mode", std::size_t{1});
        out["omega"] = get_number(in, path, "omega", 1.0);
        out["amplitude"] = get_number(in, path, "amplitude", 1.0);
    } else if (kind == "separable") {
        const std::string fn = get_string(in, path, "space");
        space_function(fn);
        out["space"] = fn;
        out["omega"] = get_number(in, path, "omega", 0.0);
    } else {
        fail(path + ".kind", "unknown source kind '" + kind + "'");
    }
    return out;
}

json canon_net(const json& in, std::size_t index) {
    const std::string path = "moderateness.nets[" + std::to_string(index) + "]";
    if (!in.is_object()) fail(path, "expected an object");
    json out;
    out["name"] = get_string(in, path, "name", "net" + std::to_string(index));
    const std::string kind = get_string(in, path, "kind");
    out["kind"] = kind;
    const std::string role = get_string(in, path, "role");
    if (role != "potential_q" && role != "potential_nu" && role != "initial_datum")
        fail(path + ".role", "expected potential_q | potential_nu | initial_datum");
    out["role"] = role;
    if (kind == "delta" || kind == "heaviside_nu" || kind == "power_nu") {
        check_space_location(in, path);
        out["x0"] = get_number(in, path, "x0", 0.5);
        if (kind == "power_nu") {
            const double alpha = get_number(in, path, "alpha");
            if (!(alpha > 0.0 && alpha < 0.5)) fail(path + ".alpha", "must lie in (0, 1/2)");
            out["alpha"] = alpha;
        }
    } else if (kind == "smooth") {
        const std::string fn = get_string(in, path, "function");
        space_function(fn);
        out["function"] = fn;
    } else {
        fail(path + ".kind", "unknown net kind '" + kind + "'");
    }
    const std::string norm = get_string(in, path, "norm", "linf");
    if (norm != "linf" && norm != "l2" && norm != "h2")
        fail(path + ".norm", "expected linf | l2 | h2");
    out["norm"] = norm;
    if (in.contains("expect")) {
        const json& e = in.at("expect");
        json eo;
        eo["slope"] = get_number(e, path + ".expect", "slope");
        eo["tol"] = get_number(e, path + ".expect", "tol");
        out["expect"] = eo;
    }
    return out;
}

}  // namespace

RunConfig parse_config_json(const json& input) {
    if (!input.is_object()) throw config_error("config: top level must be a JSON object");

    static const std::set<std::string> commands = {
        "eig", "evolve", "vws-existence", "vws-uniqueness", "vws-consistency", "moderateness"};
    RunConfig cfg;
    cfg.command = get_string(input, "config", "command");
    if (!commands.count(cfg.command))
        throw config_error("config.command: unknown command '" + cfg.command + "'");
    const bool vws_context = cfg.command.rfind("vws-", 0) == 0;

    // problem block (flat aliases accepted for terseness)
    json problem = input.contains("problem") ? input.at("problem") : json::object();
    for (const char* key : {"potential", "a", "u0", "f", "s", "t_end"}) {
        if (input.contains(key) && !problem.contains(key)) problem[key] = input.at(key);
    }
    cfg.potential =
        canon_potential(problem.contains("potential") ? problem.at("potential")
                                                      : json{{"kind", "direct_q"}},
                        vws_context);
    cfg.a = canon_coefficient(problem.contains("a") ? problem.at("a")
                                                    : json{{"kind", "constant"}, {"value", 1.0}});
    cfg.u0 = canon_u0(problem.contains("u0") ? problem.at("u0")
                                             : json{{"kind", "function"}, {"name", "sqrt2_sin_pi"}},
                      vws_context);
    cfg.f = canon_source(problem.contains("f") ? problem.at("f") : json{{"kind", "none"}});
    cfg.s = get_number(problem, "problem", "s", 1.0);
    cfg.t_end = get_number(problem, "problem", "t_end", 1.0);
    if (!(cfg.t_end > 0.0)) throw config_error("problem.t_end: must be positive");
    cfg.a_floor = get_number(problem, "problem", "a_floor", 0.5);
    if (!(cfg.a_floor > 0.0)) throw config_error("problem.a_floor: must be positive");
    if (cfg.a["kind"] == "jump") {
        const double t0 = cfg.a["t0"].get<double>();
        if (!(t0 > 0.0 && t0 < cfg.t_end))
            throw config_error("problem.a.t0: jump must lie inside (0, t_end)");
    }

    // discretization block
    json disc = input.contains("discretization") ? input.at("discretization") : json::object();
    for (const char* key : {"m", "n_modes", "steps"}) {
        if (input.contains(key) && !disc.contains(key)) disc[key] = input.at(key);
    }
    cfg.m = get_count(disc, "discretization", "m", std::size_t{1999});
    cfg.n_modes = get_count(disc, "discretization", "n_modes", std::size_t{8});
    cfg.steps = get_count(disc, "discretization", "steps", std::size_t{400});
    if (cfg.m < 16) throw config_error("discretization.m: need at least 16 interior nodes");
    if (cfg.steps < 2) throw config_error("discretization.steps: need at least 2 steps");
    if (cfg.n_modes == 0 || cfg.n_modes > cfg.m / 16)
        throw config_error("discretization.n_modes: guard n_modes <= m/16 = " +
                           std::to_string(cfg.m / 16) + " violated");

    // vws block
    json vws = input.contains("vws") ? input.at("vws") : json::object();
    int j_min = 3, j_max = 10;
    if (vws.contains("ladder")) {
        const json& lad = vws.at("ladder");
        j_min = static_cast<int>(get_count(lad, "vws.ladder", "j_min", std::size_t{3}));
        j_max = static_cast<int>(get_count(lad, "vws.ladder", "j_max", std::size_t{10}));
        if (j_max < j_min + 3)
            throw config_error("vws.ladder: need at least 4 rungs (j_max >= j_min + 3)");
    }
    cfg.epsilons = default_epsilons(j_min, j_max);
    cfg.tol_consistency_rel = get_number(vws, "vws", "tol_consistency_rel", 1e-3);
    cfg.reference_refine = get_count(vws, "vws", "reference_refine", std::size_t{2});
    cfg.mollifier_resolution = get_count(vws, "vws", "mollifier_resolution", std::size_t{2048});
    if (cfg.mollifier_resolution < 64)
        throw config_error("vws.mollifier_resolution: must be at least 64");
    if (vws.contains("perturbation")) {
        const json& p = vws.at("perturbation");
        PerturbationSpec ps;
        ps.order = get_number(p, "vws.perturbation", "order");
        if (!(ps.order >= 1.0)) throw config_error("vws.perturbation.order: must be >= 1");
        ps.shape = get_string(p, "vws.perturbation", "shape", "sine");
        if (ps.shape != "sine" && ps.shape != "constant" && ps.shape != "zero")
            throw config_error("vws.perturbation.shape: expected sine | constant | zero");
        ps.on_q = ps.on_a = ps.on_u0 = false;
        if (!p.contains("targets")) throw config_error("vws.perturbation.targets: required");
        for (const auto& t : p.at("targets")) {
            const std::string name = t.get<std::string>();
            if (name == "q") ps.on_q = true;
            else if (name == "a") ps.on_a = true;
            else if (name == "u0") ps.on_u0 = true;
            else throw config_error("vws.perturbation.targets: unknown target '" + name + "'");
        }
        if (!ps.on_q && !ps.on_a && !ps.on_u0)
            throw config_error("vws.perturbation.targets: select at least one of q, a, u0");
        cfg.perturbation = ps;
    }

    // the grid/ladder guard applies to every vws command
    if (vws_context || cfg.command == "moderateness") {
        const double eps_min = cfg.epsilons.back();
        const double h = 1.0 / static_cast<double>(cfg.m + 1);
        if (h > eps_min / 8.0)
            throw config_error("discretization.m: guard h <= eps_min/8 violated (h = " +
                               format_double(h) + ", bound = " + format_double(eps_min / 8.0) +
                               "); enlarge m or shorten the ladder");
    }
    if (cfg.command == "vws-uniqueness" && !cfg.perturbation)
        throw config_error("vws.perturbation: required for vws-uniqueness");

    // moderateness block
    if (input.contains("moderateness")) {
        const json& mod = input.at("moderateness");
        if (!mod.contains("nets") || !mod.at("nets").is_array() || mod.at("nets").empty())
            throw config_error("moderateness.nets: nonempty array required");
        for (std::size_t i = 0; i < mod.at("nets").size(); ++i)
            cfg.nets.push_back(canon_net(mod.at("nets")[i], i));
    }
    if (cfg.command == "moderateness" && cfg.nets.empty())
        throw config_error("moderateness.nets: required for the moderateness command");

    // output block
    json outb = input.contains("output") ? input.at("output") : json::object();
    cfg.out_dir = get_string(outb, "output", "dir", "out");
    if (outb.contains("formats")) {
        cfg.emit_csv = cfg.emit_json = cfg.emit_svg = false;
        for (const auto& f : outb.at("formats")) {
            const std::string name = f.get<std::string>();
            if (name == "csv") cfg.emit_csv = true;
            else if (name == "json") cfg.emit_json = true;
            else if (name == "svg") cfg.emit_svg = true;
            else throw config_error("output.formats: unknown format '" + name + "'");
        }
    }
    cfg.seed = static_cast<std::uint64_t>(get_count(outb, "output", "seed", std::size_t{20240101}));

    // canonical echo: every effective parameter, defaults included
    json eff;
    eff["command"] = cfg.command;
    eff["problem"] = json{{"potential", cfg.potential}, {"a", cfg.a},
                          {"a_floor", cfg.a_floor},     {"u0", cfg.u0},
                          {"f", cfg.f},                 {"s", cfg.s},
                          {"t_end", cfg.t_end}};
    eff["discretization"] = json{{"m", cfg.m}, {"n_modes", cfg.n_modes}, {"steps", cfg.steps}};
    json effvws;
    effvws["ladder"] = json{{"j_min", j_min}, {"j_max", j_max}};
    effvws["tol_consistency_rel"] = cfg.tol_consistency_rel;
    effvws["reference_refine"] = cfg.reference_refine;
    effvws["mollifier_resolution"] = cfg.mollifier_resolution;
    if (cfg.perturbation) {
        json targets = json::array();
        if (cfg.perturbation->on_q) targets.push_back("q");
        if (cfg.perturbation->on_a) targets.push_back("a");
        if (cfg.perturbation->on_u0) targets.push_back("u0");
        effvws["perturbation"] = json{{"order", cfg.perturbation->order},
                                      {"shape", cfg.perturbation->shape},
                                      {"targets", targets}};
    }
    eff["vws"] = effvws;
    if (!cfg.nets.empty()) eff["moderateness"] = json{{"nets", cfg.nets}};
    json fmts = json::array();
    if (cfg.emit_csv) fmts.push_back("csv");
    if (cfg.emit_json) fmts.push_back("json");
    if (cfg.emit_svg) fmts.push_back("svg");
    eff["output"] = json{{"dir", cfg.out_dir}, {"formats", fmts}, {"seed", cfg.seed}};
    cfg.effective = eff;

    const std::string canon = eff.dump();
    cfg.config_hash = fnv1a(canon.data(), canon.size());
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error("config parse error in " + path + ": " + e.what());
    }
    return parse_config_json(j);
}

}  // namespace schro
