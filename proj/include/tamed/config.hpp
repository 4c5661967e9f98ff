#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tamed/harness.hpp"
#include "tamed/problem.hpp"

namespace tamed {

/// Flat `[section]` / `key = value` run configuration. Unknown sections or
/// keys are rejected; parse -> serialize -> parse is the identity on values.

enum class ProblemKind { linear, polynomial, particles };
std::string problem_kind_name(ProblemKind kind);
ProblemKind problem_kind_from_name(const std::string& name);

struct ProblemConfig {
    ProblemKind kind = ProblemKind::polynomial;
    // linear / polynomial
    double x0 = 1.0;
    double beta = 1.0;
    double lyapunov_scale = 1.5;  // polynomial V = scale (1 + x^2)
    // particles
    int particle_count = 4;
    double alpha = 2.0;
    double sigma = 1.0;
    std::string confinement = "quadratic";  // quadratic | none
    std::string initial = "equispaced";     // equispaced | explicit
    double initial_spacing = 1.0;
    Vec initial_positions;  // used when initial = explicit
    double lyapunov_constant = 1.0;
};

struct SimulateConfig {
    long step_count = 1024;
    long samples = 1;
};

struct CheckConfig {
    std::vector<std::string> conditions;
    long samples = 10000;
    std::uint64_t seed = 1;
    double p = 2.0;
    double min_gap_floor = 1e-3;
    std::string generator_convention = "ito";  // ito | half_intensity
    double generator_a_p = 0.0;                // 0: use calibrated table or estimate
    double generator_q = 0.0;                  // 0: derive (particles) or 1.5
    double lipschitz_constant = 0.0;           // 0: calibrated table (particles) or 1
    double higher_order_constant = 0.0;        // 0: calibrated table (particles) or 1
};

struct OutputConfig {
    std::string dir = "out";
    bool emit_paths = false;
};

struct RunConfig {
    ProblemConfig problem;
    double horizon = 1.0;
    ExperimentPlan plan;
    SimulateConfig simulate;
    CheckConfig check;
    OutputConfig output;

    static RunConfig parse_text(const std::string& text);
    static RunConfig parse_file(const std::string& path);

    /// Applies a --set override "section.key=value".
    void apply_override(const std::string& assignment);

    /// Canonical text form covering every key.
    std::string serialize() const;

    /// Instantiates the configured SDE problem (validated).
    SdeProblem instantiate_problem() const;
};

}  // namespace tamed

namespace tamed::particles {
struct ParticleSystemSpec;
}

namespace tamed {

/// Particle spec for kind = particles configs (UsageError otherwise).
particles::ParticleSystemSpec particle_spec_from(const RunConfig& config);

}  // namespace tamed
