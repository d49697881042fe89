#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shs/errors.hpp"

namespace shs {

// Every unit price and operational parameter of the UAV mission cost model.
// Defaults reflect a US-based operation; all of them vary with location and
// are meant to be overridden from a flat JSON file.
struct CostAssumptions {
    // Legal & permit, per pilot / drone.
    double part107_fee = 150.0;        // $/pilot
    double training = 300.0;           // $/pilot
    double registration = 5.0;         // $/drone-year

    // Transportation.
    double car_rental = 1700.0;        // $/month
    double car_insurance = 400.0;      // $/month
    double fuel_price = 3.0;           // $/gallon
    double airfare = 2000.0;           // $/pilot
    double translator = 0.0;           // $/day (0 for US)

    // Labor.
    double wage = 40.0;                // $/hour
    double benefits = 20.0;            // $/hour
    double paid_hours_per_day = 8.0;   // hours
    double hotel = 125.0;              // $/night

    // Drone & data.
    double drone_price = 27000.0;      // $/drone
    double camera_price = 0.0;         // $/drone
    double battery_bundle = 3000.0;    // $/drone
    double storage_price = 130.0;      // $ per storage unit
    double storage_unit_bytes = 5e12;  // 5 TB

    // Operations.
    double drone_lifetime_h = 800.0;   // flight hours
    double flight_hours_per_day = 6.0;
    double workdays_per_week = 5.0;
    double sunny_fraction = 0.8;       // probability a day is flyable
    double max_mission_days = 90.0;    // per-pilot engagement cap

    double comm_radius_km = 7.0;       // drone-controller range
    double km_per_gallon = 40.0;

    // Coverage calibration: km^2 mapped per flight hour at the reference
    // GSD; coverage scales linearly with GSD.
    double coverage_per_flight_hour_km2_at_ref = 0.293;
    double ref_gsd_m = 0.03;

    // Data volume.
    double channels = 4.0;
    double bytes_per_channel = 1.0;

    // When set, labor cost multiplies by N_pilots on top of total
    // pilot-days (the literal source formula, which double-counts).
    bool literal_human_formula = false;

    void validate() const;
};

// Loads a flat key/value JSON whose keys match the field names above.
// Unknown keys are rejected.
CostAssumptions load_assumptions(const std::filesystem::path& path);
std::string assumptions_to_json(const CostAssumptions& a);

struct MissionSpec {
    double area_km2 = 0.0;
    double gsd_m = 0.0;
    std::optional<std::string> region_label;

    void validate() const;
};

struct CostBreakdown {
    double day_tot = 0.0;      // total pilot-days of engagement
    long n_pilots = 0;
    double fixed = 0.0;
    double human = 0.0;
    double drone = 0.0;
    double fuel = 0.0;
    double storage = 0.0;
    double total = 0.0;
    double unit_cost = 0.0;    // $/km^2
    double hotel_share = 0.0;  // hotel / total
};

// km^2 coverable per calendar flying day; linear in GSD.
double area_per_day(double gsd_m, const CostAssumptions& a);

// Total pilot-days: area / area_per_day * (7/5) / sunny_fraction. The 7/5
// weekend-pay factor is fixed by the model, independent of
// workdays_per_week.
double mission_days(const MissionSpec& spec, const CostAssumptions& a);

// ceil(day_tot / max_mission_days); 0 for an empty mission.
long pilots_required(double day_tot, const CostAssumptions& a);

double fixed_cost(long n_pilots, const CostAssumptions& a);
double human_cost(double day_tot, const CostAssumptions& a);
double drone_cost(double day_tot, const CostAssumptions& a);
double fuel_cost(const MissionSpec& spec, const CostAssumptions& a);
double storage_cost(const MissionSpec& spec, const CostAssumptions& a);

CostBreakdown estimate(const MissionSpec& spec, const CostAssumptions& a);

struct CurvePoint {
    double area_km2 = 0.0;
    double total_usd = 0.0;
    double unit_cost_usd_km2 = 0.0;
};
std::vector<CurvePoint> unit_cost_curve(double gsd_m, const std::vector<double>& areas,
                                        const CostAssumptions& a);

struct PlatformQuote {
    std::string name;
    double gsd_m = 0.0;
    double unit_cost_usd_km2 = 0.0;
};

struct PlatformRow {
    PlatformQuote quote;
    std::optional<double> break_even_area_km2;   // absent = never within bounds
};

struct PlatformComparison {
    double uav_unit_cost_usd_km2 = 0.0;   // at the mission spec
    std::vector<PlatformRow> rows;
};

// Break-even: smallest area in [1e-2, 1e7] km^2 where the UAV unit cost (at
// the mission GSD) drops to or below the platform quote, found by bisection
// over the nonincreasing unit-cost curve.
PlatformComparison compare_platforms(const MissionSpec& spec, const CostAssumptions& a,
                                     const std::vector<PlatformQuote>& platforms);

std::vector<PlatformQuote> load_platforms(const std::filesystem::path& path);

} // namespace shs
