#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "groupmark/random.hpp"

namespace groupmark {

/// Synthetic cohort: one ideal mark per student plus the parameters that
/// produced it. Marks are not clamped to [0, 100].
struct StudentPopulation {
    std::vector<double> ideal_marks;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double sd = 0.0;

    std::size_t size() const noexcept { return ideal_marks.size(); }
};

/// n i.i.d. Gaussian(mean, sd) ideal marks drawn from the population
/// substream of `seed`.
StudentPopulation generate_population(std::size_t n, double mean, double sd, std::uint64_t seed);

/// Wraps a population around externally supplied marks.
StudentPopulation population_from_marks(std::vector<double> marks);

enum class NoiseKind { UniformSymmetric };

struct NoiseModel {
    NoiseKind kind = NoiseKind::UniformSymmetric;
    double half_range = 16.0;
};

/// q + Uniform(-half_range, half_range), clamped below at zero.
double perturb(double q, const NoiseModel& noise, Engine& rng);

/// A noise model bound to one substream of a seed. Two sources built from
/// the same (seed, stream) produce identical draw sequences.
class NoiseSource {
public:
    NoiseSource(NoiseModel model, std::uint64_t seed, Stream stream)
        : model_(model), rng_(make_engine(seed, stream)) {}

    double perturb(double q) { return groupmark::perturb(q, model_, rng_); }

    const NoiseModel& model() const noexcept { return model_; }

private:
    NoiseModel model_;
    Engine rng_;
};

} // namespace groupmark
