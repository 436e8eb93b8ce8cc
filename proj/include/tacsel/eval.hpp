#pragma once

#include <vector>

#include "tacsel/sensor_sim.hpp"

namespace tacsel {

// Mean |hardness(pred) - hardness(true)| in the class hardness units (mm/N).
double mae(const std::vector<int>& predicted, const std::vector<int>& truth,
           const ClassSet& classes);

struct AggregateStat {
    double mean = 0.0;
    double stddev = 0.0;  // population
};

AggregateStat aggregate(const std::vector<double>& values);

}  // namespace tacsel
