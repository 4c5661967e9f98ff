#include "tamed/particles.hpp"

#include <algorithm>
#include <cmath>

#include "tamed/errors.hpp"

namespace tamed {
namespace particles {

namespace {

/// One pass over all pairs i < j. Accumulates sum_u = sum gap^{1-alpha},
/// optionally the interaction force (the drift without confinement),
/// optionally sum_curv = sum gap^{-alpha-1}. Throws DomainBoundaryError on a
/// coincident (or inverted) pair, so gap powers never overflow silently.
void pairwise_pass(int n, double alpha, ConstSpan x, double* sum_u, double* force,
                   double* sum_curv) {
    const double inv_n = 1.0 / static_cast<double>(n);
    if (force != nullptr) std::fill(force, force + n, 0.0);
    double su = 0.0, sc = 0.0;
    const bool alpha_is_2 = (alpha == 2.0);
    const bool alpha_is_3 = (alpha == 3.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double g = x[j] - x[i];
            if (!(g >= kCoincidentGap))
                throw DomainBoundaryError("particles: coincident pair (gap " + std::to_string(g) +
                                          " at indices " + std::to_string(i + 1) + "," +
                                          std::to_string(j + 1) + ")");
            double t;  // g^{1-alpha}
            if (alpha_is_2) t = 1.0 / g;
            else if (alpha_is_3) t = 1.0 / (g * g);
            else t = std::pow(g, 1.0 - alpha);
            su += t;
            if (force != nullptr) {
                const double s = t / g;  // g^{-alpha}
                force[j] += s * inv_n;
                force[i] -= s * inv_n;
            }
            if (sum_curv != nullptr) sc += (t / g) / g;  // g^{-alpha-1}
        }
    }
    if (sum_u != nullptr) *sum_u = su;
    if (sum_curv != nullptr) *sum_curv = sc;
}

struct Kernel {
    ParticleSystemSpec spec;
    double vn_scale, vn_exp, vnhat_scale, vnhat_exp;

    explicit Kernel(const ParticleSystemSpec& s)
        : spec(s),
          vn_scale(std::pow(static_cast<double>(s.particle_count), 2.0 / (s.alpha - 1.0))),
          vn_exp(lyapunov_exponent(s.alpha)),
          vnhat_scale(std::pow(static_cast<double>(s.particle_count), 3.0 / (s.alpha - 1.0))),
          vnhat_exp(lyapunov_hat_exponent(s.alpha)) {}

    double energy_from_sum(double sum_u) const {
        return sum_u / ((spec.alpha - 1.0) * static_cast<double>(spec.particle_count));
    }
    double v_from_energy(double u) const {
        return spec.lyapunov_constant + vn_scale * pow_general(u, vn_exp);
    }
    double vhat_from_energy(double u) const {
        return spec.lyapunov_constant + vnhat_scale * pow_general(u, vnhat_exp);
    }
};

}  // namespace

double lyapunov_exponent(double alpha) { return (alpha + 1.0) / (alpha - 1.0); }
double lyapunov_hat_exponent(double alpha) { return (alpha + 2.0) / (alpha - 1.0); }

void ParticleSystemSpec::validate() const {
    if (particle_count < 2) throw UsageError("particles: particle_count must be at least 2");
    if (!(alpha > 1.0)) throw UsageError("particles: alpha must exceed 1");
    if (!(sigma > 0.0)) throw UsageError("particles: sigma must be positive");
    if (!confinement_derivative || !confinement_second_derivative)
        throw UsageError("particles: confinement derivative callbacks are required");
    if (confinement_lipschitz < 0.0) throw UsageError("particles: Lipschitz constant must be nonnegative");
    if (!(lyapunov_constant > 0.0)) throw UsageError("particles: lyapunov_constant must be positive");
    if (static_cast<int>(initial_positions.size()) != particle_count)
        throw UsageError("particles: initial_positions must have length particle_count");
    for (int i = 1; i < particle_count; ++i) {
        if (!(initial_positions[i] - initial_positions[i - 1] >= kCoincidentGap))
            throw UsageError("particles: initial positions must be strictly increasing");
    }
}

ParticleSystemSpec ParticleSystemSpec::quadratic_confinement(int n, double alpha, double sigma,
                                                             Vec initial_positions,
                                                             double lyapunov_constant) {
    ParticleSystemSpec s;
    s.particle_count = n;
    s.alpha = alpha;
    s.sigma = sigma;
    s.confinement_derivative = [](double x) { return x; };
    s.confinement_second_derivative = [](double) { return 1.0; };
    s.confinement_lipschitz = 1.0;
    s.initial_positions = std::move(initial_positions);
    s.lyapunov_constant = lyapunov_constant;
    s.validate();
    return s;
}

ParticleSystemSpec ParticleSystemSpec::no_confinement(int n, double alpha, double sigma,
                                                      Vec initial_positions,
                                                      double lyapunov_constant) {
    ParticleSystemSpec s;
    s.particle_count = n;
    s.alpha = alpha;
    s.sigma = sigma;
    s.confinement_derivative = [](double) { return 0.0; };
    s.confinement_second_derivative = [](double) { return 0.0; };
    s.confinement_lipschitz = 0.0;
    s.initial_positions = std::move(initial_positions);
    s.lyapunov_constant = lyapunov_constant;
    s.validate();
    return s;
}

Vec equispaced_positions(int n, double spacing) {
    if (n < 2 || !(spacing > 0.0)) throw UsageError("equispaced_positions: need n >= 2, spacing > 0");
    Vec x(n);
    const double mid = 0.5 * static_cast<double>(n - 1);
    for (int k = 0; k < n; ++k) x[k] = (static_cast<double>(k) - mid) * spacing;
    return x;
}

GapSummary min_gap(ConstSpan x) {
    if (x.size() < 2) throw UsageError("min_gap: need at least two particles");
    GapSummary g;
    g.raw_min = x[1] - x[0];
    g.argmin_index = 2;
    for (std::size_t j = 2; j < x.size(); ++j) {
        const double gap = x[j] - x[j - 1];
        if (gap < g.raw_min) {
            g.raw_min = gap;
            g.argmin_index = static_cast<int>(j) + 1;
        }
    }
    g.min_gap = std::min(g.raw_min, 1.0);
    g.in_domain = g.raw_min > 0.0;
    return g;
}

double interaction_energy(const ParticleSystemSpec& spec, ConstSpan x) {
    double sum_u = 0.0;
    pairwise_pass(spec.particle_count, spec.alpha, x, &sum_u, nullptr, nullptr);
    return sum_u / ((spec.alpha - 1.0) * static_cast<double>(spec.particle_count));
}

void drift(const ParticleSystemSpec& spec, ConstSpan x, MutSpan out) {
    pairwise_pass(spec.particle_count, spec.alpha, x, nullptr, out.data(), nullptr);
    for (int i = 0; i < spec.particle_count; ++i) out[i] -= spec.confinement_derivative(x[i]);
}

double lyapunov(const ParticleSystemSpec& spec, ConstSpan x) {
    const Kernel k(spec);
    return k.v_from_energy(interaction_energy(spec, x));
}

double lyapunov_hat(const ParticleSystemSpec& spec, ConstSpan x) {
    const Kernel k(spec);
    return k.vhat_from_energy(interaction_energy(spec, x));
}

void interaction_gradient(const ParticleSystemSpec& spec, ConstSpan x, MutSpan out) {
    pairwise_pass(spec.particle_count, spec.alpha, x, nullptr, out.data(), nullptr);
    for (int i = 0; i < spec.particle_count; ++i) out[i] = -out[i];
}

double interaction_laplacian(const ParticleSystemSpec& spec, ConstSpan x) {
    double sum_curv = 0.0;
    pairwise_pass(spec.particle_count, spec.alpha, x, nullptr, nullptr, &sum_curv);
    return 2.0 * spec.alpha * sum_curv / static_cast<double>(spec.particle_count);
}

void drift_jacobian(const ParticleSystemSpec& spec, ConstSpan x, MutSpan out) {
    const int n = spec.particle_count;
    if (static_cast<int>(out.size()) != n * n) throw UsageError("drift_jacobian: output size must be N^2");
    std::fill(out.begin(), out.end(), 0.0);
    const double scale = spec.alpha / static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double g = x[j] - x[i];
            if (!(g >= kCoincidentGap)) throw DomainBoundaryError("particles: coincident pair");
            double curv;  // g^{-alpha-1}
            if (spec.alpha == 2.0) curv = 1.0 / (g * g * g);
            else if (spec.alpha == 3.0) curv = 1.0 / ((g * g) * (g * g));
            else curv = std::pow(g, -spec.alpha - 1.0);
            const double v = scale * curv;
            out[static_cast<std::size_t>(i) * n + j] += v;
            out[static_cast<std::size_t>(j) * n + i] += v;
            out[static_cast<std::size_t>(i) * n + i] -= v;
            out[static_cast<std::size_t>(j) * n + j] -= v;
        }
    }
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i) * n + i] -= spec.confinement_second_derivative(x[i]);
}

PointSampler config_sampler(const ParticleSystemSpec& spec, double min_gap_floor) {
    spec.validate();
    if (!(min_gap_floor > 0.0 && min_gap_floor <= 1.0))
        throw UsageError("config_sampler: min_gap_floor must lie in (0, 1]");
    const int n = spec.particle_count;
    const double log_floor = std::log(min_gap_floor);
    return [n, log_floor](CounterRng& rng, Vec& out) {
        out.resize(n);
        const bool near_boundary = rng.uniform() <= 0.5;
        double pos = rng.uniform(-1.0, 1.0);
        out[0] = pos;
        for (int i = 1; i < n; ++i) {
            const double gap = near_boundary ? std::exp(rng.uniform(log_floor, 0.0))
                                             : rng.uniform(0.25, 1.5);
            pos += gap;
            out[i] = pos;
        }
    };
}

SdeProblem build_problem(const ParticleSystemSpec& spec, double horizon) {
    spec.validate();
    auto kernel = std::make_shared<Kernel>(spec);
    const int n = spec.particle_count;

    SdeProblem p;
    p.dimension = n;
    p.label = "particles";
    p.in_domain = [n](ConstSpan x) {
        for (int i = 1; i < n; ++i) {
            if (!(x[i] - x[i - 1] >= kCoincidentGap)) return false;
        }
        return true;
    };
    p.drift = [kernel](ConstSpan x, MutSpan out) { drift(kernel->spec, x, out); };
    p.lyapunov_V = [kernel](ConstSpan x) {
        double sum_u = 0.0;
        pairwise_pass(kernel->spec.particle_count, kernel->spec.alpha, x, &sum_u, nullptr, nullptr);
        return kernel->v_from_energy(kernel->energy_from_sum(sum_u));
    };
    p.lyapunov_V_hat = [kernel](ConstSpan x) {
        double sum_u = 0.0;
        pairwise_pass(kernel->spec.particle_count, kernel->spec.alpha, x, &sum_u, nullptr, nullptr);
        return kernel->vhat_from_energy(kernel->energy_from_sum(sum_u));
    };
    p.drift_and_lyapunov = [kernel](ConstSpan x, MutSpan out) {
        double sum_u = 0.0;
        pairwise_pass(kernel->spec.particle_count, kernel->spec.alpha, x, &sum_u, out.data(), nullptr);
        for (int i = 0; i < kernel->spec.particle_count; ++i)
            out[i] -= kernel->spec.confinement_derivative(x[i]);
        return kernel->v_from_energy(kernel->energy_from_sum(sum_u));
    };
    p.lyapunov_gradient = [kernel](ConstSpan x, MutSpan out) {
        const auto& s = kernel->spec;
        double sum_u = 0.0;
        pairwise_pass(s.particle_count, s.alpha, x, &sum_u, out.data(), nullptr);
        const double u = kernel->energy_from_sum(sum_u);
        const double factor = kernel->vn_scale * kernel->vn_exp * pow_general(u, kernel->vn_exp - 1.0);
        for (int i = 0; i < s.particle_count; ++i) out[i] = -factor * out[i];
    };
    p.lyapunov_laplacian = [kernel](ConstSpan x) {
        const auto& s = kernel->spec;
        const int np = s.particle_count;
        Vec grad_u(np);
        double sum_u = 0.0, sum_curv = 0.0;
        pairwise_pass(np, s.alpha, x, &sum_u, grad_u.data(), &sum_curv);
        const double u = kernel->energy_from_sum(sum_u);
        const double grad_u_sq = squared_norm(grad_u);
        const double lap_u = 2.0 * s.alpha * sum_curv / static_cast<double>(np);
        return kernel->vn_scale * kernel->vn_exp *
               ((kernel->vn_exp - 1.0) * pow_general(u, kernel->vn_exp - 2.0) * grad_u_sq +
                pow_general(u, kernel->vn_exp - 1.0) * lap_u);
    };
    p.drift_jacobian = [kernel](ConstSpan x, MutSpan out) { drift_jacobian(kernel->spec, x, out); };
    p.noise_intensity = std::sqrt(2.0 * spec.sigma / static_cast<double>(n));
    p.initial_state = spec.initial_positions;
    p.horizon = horizon;
    p.validate();
    return p;
}

}  // namespace particles
}  // namespace tamed
