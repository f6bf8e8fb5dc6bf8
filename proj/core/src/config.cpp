#include "grushin/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace grushin {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    fail(errc::schema_error, path + ": " + what);
}

[[noreturn]] void value_fail(const std::string& path, const std::string& what) {
    fail(errc::validation_error, path + ": " + what);
}

// Every object is checked against the exhaustive key list of its schema node;
// typos surface as errors instead of silently running defaults.
void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) schema_fail(path + "." + key, "unknown key");
    }
}

const json* get(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) schema_fail(path, "expected a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) schema_fail(path, "expected an integer");
    return v.get<int>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) schema_fail(path, "expected a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) schema_fail(path, "expected a string");
    return v.get<std::string>();
}

DomainSpec parse_domain(const json& j) {
    if (!j.is_object()) schema_fail("$.domain", "expected an object");
    reject_unknown(j, "$.domain", {"m", "k", "gamma", "extents", "nodes"});
    DomainSpec spec;
    const json* v;
    if (!(v = get(j, "m"))) schema_fail("$.domain.m", "missing");
    spec.m = as_int(*v, "$.domain.m");
    if (!(v = get(j, "k"))) schema_fail("$.domain.k", "missing");
    spec.k = as_int(*v, "$.domain.k");
    if (!(v = get(j, "gamma"))) schema_fail("$.domain.gamma", "missing");
    spec.gamma = as_number(*v, "$.domain.gamma");
    if (!(v = get(j, "extents"))) schema_fail("$.domain.extents", "missing");
    if (!v->is_array()) schema_fail("$.domain.extents", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        const std::string p = "$.domain.extents[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2) schema_fail(p, "expected [a, b]");
        spec.extents.push_back({as_number(e[0], p + "[0]"), as_number(e[1], p + "[1]")});
    }
    if (!(v = get(j, "nodes"))) schema_fail("$.domain.nodes", "missing");
    if (!v->is_array()) schema_fail("$.domain.nodes", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i)
        spec.nodes.push_back(as_int((*v)[i], "$.domain.nodes[" + std::to_string(i) + "]"));

    // cross-validate now so bad domains fail at parse time with a JSON path
    try {
        validate_domain(spec);
    } catch (const Error& e) {
        value_fail("$.domain", e.what());
    }
    return spec;
}

SourceModel parse_source(const json& j) {
    if (!j.is_object()) schema_fail("$.source", "expected an object");
    reject_unknown(j, "$.source", {"terms"});
    const json* terms = get(j, "terms");
    if (!terms) schema_fail("$.source.terms", "missing");
    if (!terms->is_array()) schema_fail("$.source.terms", "expected an array");
    SourceModel src;
    for (std::size_t i = 0; i < terms->size(); ++i) {
        const json& t = (*terms)[i];
        const std::string p = "$.source.terms[" + std::to_string(i) + "]";
        if (!t.is_object()) schema_fail(p, "expected an object");
        reject_unknown(t, p, {"c", "p"});
        const json* c = get(t, "c");
        const json* e = get(t, "p");
        if (!c) schema_fail(p + ".c", "missing");
        if (!e) schema_fail(p + ".p", "missing");
        src.terms.push_back({as_number(*c, p + ".c"), as_number(*e, p + ".p")});
    }
    try {
        validate_source(src);
    } catch (const Error& e) {
        value_fail("$.source", e.what());
    }
    return src;
}

InitialData parse_initial(const json& j) {
    if (!j.is_object()) schema_fail("$.solver.initial", "expected an object");
    reject_unknown(j, "$.solver.initial", {"kind", "scale", "j0_headroom", "path"});
    const json* kind = get(j, "kind");
    if (!kind) schema_fail("$.solver.initial.kind", "missing");
    const std::string k = as_string(*kind, "$.solver.initial.kind");
    InitialData init;
    if (k == "eigenfield")
        init.kind = InitialData::Kind::Eigenfield;
    else if (k == "bump")
        init.kind = InitialData::Kind::Bump;
    else if (k == "file")
        init.kind = InitialData::Kind::File;
    else
        value_fail("$.solver.initial.kind", "expected eigenfield | bump | file, got " + k);

    const json* scale = get(j, "scale");
    const json* headroom = get(j, "j0_headroom");
    const json* path = get(j, "path");
    if (scale && headroom)
        value_fail("$.solver.initial", "scale and j0_headroom are mutually exclusive");
    if (headroom && init.kind != InitialData::Kind::Eigenfield)
        value_fail("$.solver.initial.j0_headroom", "only valid for kind=eigenfield");
    if (init.kind == InitialData::Kind::File) {
        if (!path) schema_fail("$.solver.initial.path", "missing for kind=file");
        init.path = as_string(*path, "$.solver.initial.path");
        if (scale || headroom)
            value_fail("$.solver.initial", "scale/j0_headroom do not apply to kind=file");
    } else if (path) {
        value_fail("$.solver.initial.path", "only valid for kind=file");
    }
    if (scale) {
        init.scale = as_number(*scale, "$.solver.initial.scale");
        if (!(init.scale > 0.0)) value_fail("$.solver.initial.scale", "must be > 0");
    }
    if (headroom) {
        init.j0_headroom = as_number(*headroom, "$.solver.initial.j0_headroom");
        if (!(init.j0_headroom >= 0.0)) value_fail("$.solver.initial.j0_headroom", "must be >= 0");
    }
    return init;
}

void parse_solver(const json& j, SolverConfig& solver) {
    if (!j.is_object()) schema_fail("$.solver", "expected an object");
    reject_unknown(j, "$.solver",
                   {"t_end", "cfl", "u_blow", "dt_min", "sample_every", "initial"});
    const json* v;
    if (!(v = get(j, "t_end"))) schema_fail("$.solver.t_end", "missing");
    solver.t_end = as_number(*v, "$.solver.t_end");
    if (!(solver.t_end > 0.0)) value_fail("$.solver.t_end", "must be > 0");
    if ((v = get(j, "cfl"))) {
        solver.cfl = as_number(*v, "$.solver.cfl");
        if (!(solver.cfl > 0.0 && solver.cfl <= 1.0)) value_fail("$.solver.cfl", "must be in (0, 1]");
    }
    if ((v = get(j, "u_blow"))) {
        solver.u_blow = as_number(*v, "$.solver.u_blow");
        if (!(solver.u_blow > 0.0)) value_fail("$.solver.u_blow", "must be > 0");
    }
    if ((v = get(j, "dt_min"))) {
        solver.dt_min = as_number(*v, "$.solver.dt_min");
        if (!(solver.dt_min > 0.0)) value_fail("$.solver.dt_min", "must be > 0");
    }
    if ((v = get(j, "sample_every"))) {
        solver.sample_every = as_int(*v, "$.solver.sample_every");
        if (solver.sample_every < 1) value_fail("$.solver.sample_every", "must be >= 1");
    }
    if (!(v = get(j, "initial"))) schema_fail("$.solver.initial", "missing");
    solver.initial = parse_initial(*v);
}

void parse_params(const json& j, RunConfig& config) {
    if (!j.is_object()) schema_fail("$.params", "expected an object");
    reject_unknown(j, "$.params", {"ell", "alpha", "beta", "theta"});
    const json* v;
    if (!(v = get(j, "ell"))) schema_fail("$.params.ell", "missing");
    config.params.ell = as_number(*v, "$.params.ell");
    if (!(config.params.ell >= 1.0)) value_fail("$.params.ell", "must be >= 1");
    config.solver.ell = config.params.ell;

    const bool theorem_mode = config.mode != RunMode::SimulateOnly;
    if ((v = get(j, "alpha"))) config.params.alpha = as_number(*v, "$.params.alpha");
    else if (theorem_mode) schema_fail("$.params.alpha", "missing (required by this mode)");
    if ((v = get(j, "theta"))) config.params.theta = as_number(*v, "$.params.theta");
    else if (theorem_mode) schema_fail("$.params.theta", "missing (required by this mode)");
    if ((v = get(j, "beta"))) {
        if (v->is_string()) {
            const std::string s = as_string(*v, "$.params.beta");
            if (s != "max-admissible")
                value_fail("$.params.beta", "expected a number or \"max-admissible\"");
            if (config.mode != RunMode::BlowUp)
                value_fail("$.params.beta", "\"max-admissible\" only applies to blow-up mode");
            config.beta_auto = true;
        } else {
            config.params.beta = as_number(*v, "$.params.beta");
        }
    } else if (theorem_mode) {
        schema_fail("$.params.beta", "missing (required by this mode)");
    }

    // mode constraints that need no spectral information are enforced here
    if (config.mode == RunMode::BlowUp) {
        if (!(config.params.alpha > config.params.ell + 1.0))
            value_fail("$.params.alpha", "blow-up mode needs alpha > ell + 1 (concavity exponent "
                                         "sigma would not be positive)");
        if (!(config.params.theta > 0.0)) value_fail("$.params.theta", "blow-up mode needs theta > 0");
        if (!config.beta_auto && !(config.params.beta > 0.0))
            value_fail("$.params.beta", "blow-up mode needs beta > 0");
    } else if (config.mode == RunMode::Global) {
        if (!(config.params.alpha <= 0.0))
            value_fail("$.params.alpha", "global mode needs alpha <= 0");
        if (!(config.params.theta >= 0.0))
            value_fail("$.params.theta", "global mode needs theta >= 0");
    }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json root = json::parse(json_text, nullptr, false);
    if (root.is_discarded()) fail(errc::schema_error, "$: not valid JSON");
    if (!root.is_object()) schema_fail("$", "expected an object");
    reject_unknown(root, "$",
                   {"mode", "seed", "domain", "source", "params", "solver", "eigen", "condition",
                    "convergence", "output", "tolerances"});

    RunConfig config;
    const json* v;
    if (!(v = get(root, "mode"))) schema_fail("$.mode", "missing");
    const std::string mode = as_string(*v, "$.mode");
    if (mode == "blow-up")
        config.mode = RunMode::BlowUp;
    else if (mode == "global")
        config.mode = RunMode::Global;
    else if (mode == "simulate-only")
        config.mode = RunMode::SimulateOnly;
    else
        value_fail("$.mode", "expected blow-up | global | simulate-only, got " + mode);

    if ((v = get(root, "seed"))) {
        if (!v->is_number_unsigned()) schema_fail("$.seed", "expected a nonnegative integer");
        config.seed = v->get<std::uint64_t>();
    }

    if (!(v = get(root, "domain"))) schema_fail("$.domain", "missing");
    config.domain = parse_domain(*v);
    if (!(v = get(root, "source"))) schema_fail("$.source", "missing");
    config.solver.source = parse_source(*v);
    if (config.mode != RunMode::SimulateOnly && config.solver.source.zero())
        value_fail("$.source.terms", "theorem modes need a nonzero source (f > 0 on (0, inf))");
    if (!(v = get(root, "params"))) schema_fail("$.params", "missing");
    parse_params(*v, config);
    if (!(v = get(root, "solver"))) schema_fail("$.solver", "missing");
    parse_solver(*v, config.solver);

    if ((v = get(root, "eigen"))) {
        if (!v->is_object()) schema_fail("$.eigen", "expected an object");
        reject_unknown(*v, "$.eigen", {"tol", "max_iter", "poincare_trials", "gamma_sweep"});
        const json* w;
        if ((w = get(*v, "tol"))) {
            config.eigen_tol = as_number(*w, "$.eigen.tol");
            if (!(config.eigen_tol > 0.0)) value_fail("$.eigen.tol", "must be > 0");
        }
        if ((w = get(*v, "max_iter"))) {
            config.eigen_max_iter = as_int(*w, "$.eigen.max_iter");
            if (config.eigen_max_iter < 1) value_fail("$.eigen.max_iter", "must be >= 1");
        }
        if ((w = get(*v, "poincare_trials"))) {
            config.poincare_trials = as_int(*w, "$.eigen.poincare_trials");
            if (config.poincare_trials < 0) value_fail("$.eigen.poincare_trials", "must be >= 0");
        }
        if ((w = get(*v, "gamma_sweep"))) {
            if (!w->is_array()) schema_fail("$.eigen.gamma_sweep", "expected an array");
            for (std::size_t i = 0; i < w->size(); ++i) {
                const double g =
                    as_number((*w)[i], "$.eigen.gamma_sweep[" + std::to_string(i) + "]");
                if (!(g >= 0.0))
                    value_fail("$.eigen.gamma_sweep[" + std::to_string(i) + "]", "must be >= 0");
                config.gamma_sweep.push_back(g);
            }
        }
    }

    if ((v = get(root, "condition"))) {
        if (!v->is_object()) schema_fail("$.condition", "expected an object");
        reject_unknown(*v, "$.condition", {"u_max", "samples"});
        const json* w;
        if ((w = get(*v, "u_max"))) {
            config.condition_u_max = as_number(*w, "$.condition.u_max");
            if (!(config.condition_u_max > 0.0)) value_fail("$.condition.u_max", "must be > 0");
        }
        if ((w = get(*v, "samples"))) {
            config.condition_samples = as_int(*w, "$.condition.samples");
            if (config.condition_samples < 2) value_fail("$.condition.samples", "must be >= 2");
        }
    }

    if ((v = get(root, "convergence"))) {
        if (!v->is_object()) schema_fail("$.convergence", "expected an object");
        reject_unknown(*v, "$.convergence", {"nodes"});
        const json* w = get(*v, "nodes");
        if (!w) schema_fail("$.convergence.nodes", "missing");
        if (!w->is_array()) schema_fail("$.convergence.nodes", "expected an array");
        for (std::size_t i = 0; i < w->size(); ++i) {
            const int n = as_int((*w)[i], "$.convergence.nodes[" + std::to_string(i) + "]");
            if (n < 1) value_fail("$.convergence.nodes[" + std::to_string(i) + "]", "must be >= 1");
            config.convergence_nodes.push_back(n);
        }
    }

    if ((v = get(root, "output"))) {
        if (!v->is_object()) schema_fail("$.output", "expected an object");
        reject_unknown(*v, "$.output", {"dir", "write_csv"});
        const json* w;
        if ((w = get(*v, "dir"))) config.output_dir = as_string(*w, "$.output.dir");
        if ((w = get(*v, "write_csv"))) config.write_csv = as_bool(*w, "$.output.write_csv");
    }

    if ((v = get(root, "tolerances"))) {
        if (!v->is_object()) schema_fail("$.tolerances", "expected an object");
        reject_unknown(*v, "$.tolerances",
                       {"tol_j", "tol_c", "tol_m", "blowup_margin", "warmup_samples"});
        const json* w;
        if ((w = get(*v, "tol_j"))) config.tolerances.tol_J = as_number(*w, "$.tolerances.tol_j");
        if ((w = get(*v, "tol_c"))) config.tolerances.tol_C = as_number(*w, "$.tolerances.tol_c");
        if ((w = get(*v, "tol_m"))) config.tolerances.tol_m = as_number(*w, "$.tolerances.tol_m");
        if ((w = get(*v, "blowup_margin"))) {
            config.tolerances.blowup_margin = as_number(*w, "$.tolerances.blowup_margin");
            if (!(config.tolerances.blowup_margin >= 0.0))
                value_fail("$.tolerances.blowup_margin", "must be >= 0");
        }
        if ((w = get(*v, "warmup_samples"))) {
            config.tolerances.warmup_samples = as_int(*w, "$.tolerances.warmup_samples");
            if (config.tolerances.warmup_samples < 1)
                value_fail("$.tolerances.warmup_samples", "must be >= 1");
        }
    }

    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace grushin
