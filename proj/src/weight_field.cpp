#include "richlab/weight_field.hpp"

#include <string>

#include "richlab/error.hpp"

namespace richlab {

WeightField::WeightField(std::uint64_t master_seed, std::int64_t replication_index, ClockMode mode, double lambda1,
                         double lambda2)
    : seed_(master_seed), rep_(replication_index), mode_(mode), lambda1_(lambda1), lambda2_(lambda2) {
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1) || !(lambda2 > 0.0) || !std::isfinite(lambda2)) {
    throw ConfigError("rates must satisfy lambda > 0, got lambda1=" + std::to_string(lambda1) +
                      " lambda2=" + std::to_string(lambda2));
  }
  if (mode == ClockMode::Single && lambda1 != lambda2) {
    throw ConfigError("single-clock mode requires lambda1 == lambda2");
  }
  const std::uint64_t base = mixing::absorb(mixing::seed_state(master_seed), static_cast<std::uint64_t>(replication_index));
  prefix_[0] = mixing::absorb(base, 1);
  prefix_[1] = mixing::absorb(base, 2);
}

double WeightField::uniform01(const Edge& edge, int clock_index) const {
  if (clock_index != 1 && clock_index != 2) throw ContractViolation("clock index must be 1 or 2");
  return uniform_at(edge.low(), edge.axis(), clock_index);
}

double WeightField::edge_weight(const Edge& edge, int type_index) const {
  if (type_index != 1 && type_index != 2) throw ContractViolation("type index must be 1 or 2");
  return weight_at(edge.low(), edge.axis(), type_index);
}

double uniform01(std::uint64_t master_seed, std::int64_t replication_index, const Edge& edge, int clock_index) {
  return WeightField(master_seed, replication_index, ClockMode::Two, 1.0, 1.0).uniform01(edge, clock_index);
}

}  // namespace richlab
