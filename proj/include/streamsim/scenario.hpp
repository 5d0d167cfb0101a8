// scenario.hpp - Demography, infrastructure, traffic, and cost arithmetic.
//
// Exact arithmetic on scenario inputs; results are integral whenever the
// inputs are. Pure functions, no shared state.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace streamsim::scenario {

struct District {
    std::string name;
    double density_per_km2 = 0.0;  // persons/km^2
    double area_km2 = 0.0;
    long towers = 0;
};

struct SocialProfile {
    double population = 0.0;         // persons
    double penetration = 0.0;        // active fraction in [0,1]
    double platforms_per_user = 0.0; // concurrent platforms per active user
};

struct CostModel {
    double unit_cost_per_mb = 0.0;  // cost-units/MB
    double handled_fraction = 0.0;  // fraction of volume priced, in [0,1]
    double reduction = 0.0;         // cost reduction fraction in [0,1]
};

struct OffloadConfig {
    long ap_count = 0;            // access points
    double avg_offload_mb = 0.0;  // MB per AP per slot
    double generated_mb = 0.0;    // MB generated per slot
};

inline double district_population(const District& d) {
    if (d.density_per_km2 < 0.0)
        throw std::invalid_argument("district_population: density must be >= 0");
    if (d.area_km2 <= 0.0)
        throw std::invalid_argument("district_population: area must be > 0");
    return d.density_per_km2 * d.area_km2;
}

inline double persons_per_tower(double population, long towers) {
    if (population < 0.0)
        throw std::invalid_argument("persons_per_tower: population must be >= 0");
    if (towers <= 0)
        throw std::invalid_argument(
            "persons_per_tower: degenerate infrastructure, towers must be > 0");
    return population / static_cast<double>(towers);
}

inline double active_connections(const SocialProfile& s) {
    if (s.population < 0.0)
        throw std::invalid_argument("active_connections: population must be >= 0");
    if (s.penetration < 0.0 || s.penetration > 1.0)
        throw std::invalid_argument("active_connections: penetration must be in [0,1]");
    if (s.platforms_per_user < 0.0)
        throw std::invalid_argument("active_connections: platforms_per_user must be >= 0");
    return s.penetration * s.population * s.platforms_per_user;
}

inline double baseline_cost(double volume_mb, const CostModel& c) {
    if (volume_mb < 0.0)
        throw std::invalid_argument("baseline_cost: volume must be >= 0");
    if (c.handled_fraction < 0.0 || c.handled_fraction > 1.0)
        throw std::invalid_argument("baseline_cost: handled_fraction must be in [0,1]");
    if (c.unit_cost_per_mb < 0.0)
        throw std::invalid_argument("baseline_cost: unit_cost_per_mb must be >= 0");
    return c.handled_fraction * volume_mb * c.unit_cost_per_mb;
}

// Exact value; use display_cost_units for the half-up integer rendering.
inline double reduced_cost(double baseline, const CostModel& c) {
    if (baseline < 0.0)
        throw std::invalid_argument("reduced_cost: baseline must be >= 0");
    if (c.reduction < 0.0 || c.reduction > 1.0)
        throw std::invalid_argument("reduced_cost: reduction must be in [0,1]");
    return baseline * (1.0 - c.reduction);
}

// Half-up rounding for display (9562.5 -> 9563).
inline long long display_cost_units(double cost) {
    return std::llround(cost);
}

// Total AP-offloaded volume, capped at the generated volume.
inline double offloaded_volume(const OffloadConfig& o) {
    if (o.ap_count < 0 || o.avg_offload_mb < 0.0 || o.generated_mb < 0.0)
        throw std::invalid_argument("offloaded_volume: all fields must be >= 0");
    return std::min(static_cast<double>(o.ap_count) * o.avg_offload_mb, o.generated_mb);
}

inline double offload_ratio(double offloaded_mb, double generated_mb) {
    if (generated_mb <= 0.0)
        throw std::invalid_argument("offload_ratio: generated volume must be > 0");
    if (offloaded_mb < 0.0)
        throw std::invalid_argument("offload_ratio: offloaded volume must be >= 0");
    if (offloaded_mb > generated_mb)
        throw std::invalid_argument(
            "offload_ratio: offloaded volume exceeds generated volume; cap it first");
    return offloaded_mb / generated_mb;
}

}  // namespace streamsim::scenario
