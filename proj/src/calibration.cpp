#include "tamed/calibration.hpp"

namespace tamed {
namespace calibration {

namespace {

struct GeneratorEntry {
    int particle_count;
    double alpha;
    double a_p;
};

// p = 2 table; see the header comment for the calibration provenance.
constexpr GeneratorEntry kGeneratorTable[] = {
    {2, 1.5, 1.0}, {3, 1.5, 1.0}, {5, 1.5, 1.0}, {8, 1.5, 1.0},
    {2, 2.0, 1.0}, {3, 2.0, 1.0}, {5, 2.0, 1.0}, {8, 2.0, 1.0},
    {2, 3.0, 1.0}, {3, 3.0, 1.0}, {5, 3.0, 1.0}, {8, 3.0, 1.0},
};

const GeneratorEntry* find_entry(int particle_count, double alpha) {
    for (const auto& e : kGeneratorTable) {
        if (e.particle_count == particle_count && e.alpha == alpha) return &e;
    }
    return nullptr;
}

}  // namespace

bool has_particle_generator_a(int particle_count, double alpha, double p) {
    return p == 2.0 && find_entry(particle_count, alpha) != nullptr;
}

double particle_generator_a(int particle_count, double alpha, double p) {
    if (p == 2.0) {
        if (const auto* e = find_entry(particle_count, alpha)) return e->a_p;
    }
    throw UsageError("calibration: no frozen generator constant for this (N, alpha, p)");
}

}  // namespace calibration
}  // namespace tamed
