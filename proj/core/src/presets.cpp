#include "grushin/config.hpp"

namespace grushin {

namespace {

// Cubic reaction on the unit square with gamma = 1: eigenfield start scaled so
// the energy functional starts positive, singular time certified against the
// concavity bound.
const std::string kBlowupP3 = R"({
  "mode": "blow-up",
  "seed": 20260823,
  "domain": {"m": 1, "k": 1, "gamma": 1.0, "extents": [[0.0, 1.0], [0.0, 1.0]], "nodes": [31, 31]},
  "source": {"terms": [{"c": 1.0, "p": 3.0}]},
  "params": {"ell": 1.0, "alpha": 4.0, "beta": "max-admissible", "theta": 0.01},
  "solver": {"t_end": 10.0, "cfl": 0.5, "u_blow": 1.0e6, "sample_every": 10,
             "initial": {"kind": "eigenfield", "j0_headroom": 0.1}},
  "eigen": {"tol": 1.0e-12},
  "output": {"dir": "out/blowup-p3"}
})";

// Linear source with alpha = 0: mass must never increase on the way to t_end.
const std::string kGlobalLinear = R"({
  "mode": "global",
  "seed": 20260823,
  "domain": {"m": 1, "k": 1, "gamma": 1.0, "extents": [[0.0, 1.0], [0.0, 1.0]], "nodes": [31, 31]},
  "source": {"terms": [{"c": 1.0, "p": 1.0}]},
  "params": {"ell": 1.0, "alpha": 0.0, "beta": -1.0, "theta": 0.0},
  "solver": {"t_end": 5.0, "cfl": 0.5, "sample_every": 10,
             "initial": {"kind": "bump", "scale": 1.0}},
  "eigen": {"tol": 1.0e-12},
  "output": {"dir": "out/global-linear"}
})";

// Source-free decay from the eigenfield: the trajectory follows the linear
// recurrence (1 - dt lambda1)^n, a closed-form regression target.
const std::string kHeatDecay = R"({
  "mode": "simulate-only",
  "seed": 20260823,
  "domain": {"m": 1, "k": 1, "gamma": 1.0, "extents": [[0.0, 1.0], [0.0, 1.0]], "nodes": [15, 15]},
  "source": {"terms": []},
  "params": {"ell": 1.0},
  "solver": {"t_end": 0.07, "cfl": 0.1, "sample_every": 1,
             "initial": {"kind": "eigenfield", "scale": 1.0}},
  "eigen": {"tol": 1.0e-12},
  "output": {"dir": "out/heat-decay"}
})";

// Smallest eigenvalue as a function of the degeneracy strength; on the unit
// square every |x| < 1, so lambda1 decreases weakly along the sweep.
const std::string kEigenGammaSweep = R"({
  "mode": "simulate-only",
  "seed": 20260823,
  "domain": {"m": 1, "k": 1, "gamma": 1.0, "extents": [[0.0, 1.0], [0.0, 1.0]], "nodes": [31, 31]},
  "source": {"terms": []},
  "params": {"ell": 1.0},
  "solver": {"t_end": 0.01, "initial": {"kind": "bump", "scale": 1.0}},
  "eigen": {"tol": 1.0e-12, "gamma_sweep": [0.0, 0.5, 1.0, 1.5, 2.0]},
  "output": {"dir": "out/eigen-gamma-sweep"}
})";

// gamma = 0 refinement study: lambda1 admits a closed form per grid and tends
// to 2 pi^2 at second order, so the error ratio across a refinement is ~4.
const std::string kConvergenceOperator = R"({
  "mode": "simulate-only",
  "seed": 20260823,
  "domain": {"m": 1, "k": 1, "gamma": 0.0, "extents": [[0.0, 1.0], [0.0, 1.0]], "nodes": [15, 15]},
  "source": {"terms": []},
  "params": {"ell": 1.0},
  "solver": {"t_end": 0.01, "initial": {"kind": "bump", "scale": 1.0}},
  "eigen": {"tol": 1.0e-12},
  "convergence": {"nodes": [7, 15, 31, 63]},
  "output": {"dir": "out/convergence-operator"}
})";

}  // namespace

std::vector<std::string> preset_names() {
    return {"blowup-p3", "global-linear", "heat-decay", "eigen-gamma-sweep",
            "convergence-operator"};
}

const std::string& preset_document(const std::string& name) {
    if (name == "blowup-p3") return kBlowupP3;
    if (name == "global-linear") return kGlobalLinear;
    if (name == "heat-decay") return kHeatDecay;
    if (name == "eigen-gamma-sweep") return kEigenGammaSweep;
    if (name == "convergence-operator") return kConvergenceOperator;
    fail(errc::validation_error, "unknown preset '" + name + "'");
}

}  // namespace grushin
