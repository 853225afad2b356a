#include "groupmark/population.hpp"

#include <algorithm>
#include <cmath>

#include "groupmark/error.hpp"

namespace groupmark {

StudentPopulation generate_population(std::size_t n, double mean, double sd, std::uint64_t seed) {
    if (n == 0) {
        throw Error(ErrorKind::EmptyPopulation, "population must contain at least one student");
    }
    if (!std::isfinite(mean) || !std::isfinite(sd) || sd < 0.0) {
        throw Error(ErrorKind::Parameter, "population mean and sd must be finite with sd >= 0");
    }

    StudentPopulation pop;
    pop.seed = seed;
    pop.mean = mean;
    pop.sd = sd;
    pop.ideal_marks.resize(n, mean);
    if (sd > 0.0) {
        auto rng = make_engine(seed, Stream::Population);
        std::normal_distribution<double> dist(mean, sd);
        for (auto& q : pop.ideal_marks) {
            q = dist(rng);
        }
    }
    return pop;
}

StudentPopulation population_from_marks(std::vector<double> marks) {
    if (marks.empty()) {
        throw Error(ErrorKind::EmptyPopulation, "population must contain at least one student");
    }
    for (double q : marks) {
        if (!std::isfinite(q)) {
            throw Error(ErrorKind::Parameter, "ideal marks must be finite");
        }
    }
    StudentPopulation pop;
    pop.ideal_marks = std::move(marks);
    return pop;
}

double perturb(double q, const NoiseModel& noise, Engine& rng) {
    if (!std::isfinite(noise.half_range) || noise.half_range < 0.0) {
        throw Error(ErrorKind::Parameter, "noise half-range must be finite and non-negative");
    }
    std::uniform_real_distribution<double> dist(-noise.half_range, noise.half_range);
    const double u = noise.half_range > 0.0 ? dist(rng) : 0.0;
    return std::max(0.0, q + u);
}

} // namespace groupmark
