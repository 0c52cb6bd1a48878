#pragma once

#include <cstdint>
#include <vector>

#include "morp/road_network.hpp"
#include "morp/sim.hpp"

namespace morp {

// Grid city: 100 m blocks walked at 1.4 m/s, two-way arterials three times
// faster every fifth row and column, alternating one-way local streets and
// short dead-end spurs.
struct city_params {
  unsigned rows = 30U;
  unsigned cols = 30U;
  double spur_probability = 0.1;
  double one_way_probability = 0.9;
  std::uint64_t seed = 1U;
};

road_network make_city(city_params const& p);

struct demand_params {
  std::size_t count = 2000U;
  time_ms horizon = 3'600'000;
  int max_demand = 1;
  std::uint64_t seed = 1U;
};

// Releases uniform over the horizon; endpoints favour vertices near
// arterials. Pairs are drawn from V_c and always differ.
std::vector<request_spec> make_requests(road_network const& net,
                                        demand_params const& p);

}  // namespace morp
