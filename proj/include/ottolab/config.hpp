#ifndef OTTOLAB_CONFIG_HPP
#define OTTOLAB_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ottolab/flows.hpp"
#include "ottolab/verify.hpp"

namespace ottolab {

/** Schema violations; mapped to exit code 2 by the CLI. */
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct InitSpec {
    std::string preset;  // "", uniform, perturbed_uniform, model_patch, random_trig, zero
    double a = 0.0;
    double u0 = 1.0;
    int kmax = 3;
    double amplitude = 0.1;
    std::vector<TrigTerm> coeffs;
    double constant = 0.0;
    bool normalize = false;
};

struct VectorInitSpec {
    bool gradient = false;   // u0 = grad(potential)
    InitSpec potential;
    std::vector<InitSpec> components;
};

struct CheckRequest {
    std::string id;
    CheckOverrides overrides;
};

struct ScenarioConfig {
    GeometryConfig geometry;
    bool has_flow = false;
    FlowKind kind = FlowKind::heat;
    double c = 1.0;
    InitSpec rho0, phi0;
    VectorInitSpec u0;
    SolverConfig solver;
    std::vector<CheckRequest> checks;
    std::string output_dir = "out";
};

ScenarioConfig load_scenario_file(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text);

ScalarField materialize_scalar(const GeometryPtr& g, const InitSpec& spec,
                               std::optional<std::uint64_t> seed, bool density);
VectorField materialize_vector(const GeometryPtr& g, const VectorInitSpec& spec,
                               std::optional<std::uint64_t> seed);

}  // namespace ottolab

#endif
