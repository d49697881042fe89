#include "shs/costmodel.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace shs {

void CostAssumptions::validate() const {
    const double prices[] = {part107_fee, training,   registration,  car_rental,
                             car_insurance, fuel_price, airfare,      translator,
                             wage,          benefits,   hotel,        drone_price,
                             camera_price,  battery_bundle, storage_price};
    for (double p : prices)
        if (p < 0.0)
            throw ArgumentError("cost assumption prices must be nonnegative");
    if (!(sunny_fraction > 0.0 && sunny_fraction <= 1.0))
        throw ArgumentError("sunny_fraction must lie in (0,1]");
    if (!(paid_hours_per_day >= 0.0) || !(flight_hours_per_day >= 0.0))
        throw ArgumentError("hours per day must be nonnegative");
    if (!(drone_lifetime_h > 0.0))
        throw ArgumentError("drone_lifetime_h must be positive");
    if (!(workdays_per_week > 0.0 && workdays_per_week <= 7.0))
        throw ArgumentError("workdays_per_week must lie in (0,7]");
    if (!(max_mission_days > 0.0))
        throw ArgumentError("max_mission_days must be positive");
    if (!(comm_radius_km > 0.0) || !(km_per_gallon > 0.0))
        throw ArgumentError("comm_radius_km and km_per_gallon must be positive");
    if (!(coverage_per_flight_hour_km2_at_ref > 0.0) || !(ref_gsd_m > 0.0))
        throw ArgumentError("coverage calibration must be positive");
    if (!(storage_unit_bytes > 0.0) || channels < 0.0 || bytes_per_channel < 0.0)
        throw ArgumentError("storage parameters out of range");
}

void MissionSpec::validate() const {
    if (!(area_km2 > 0.0))
        throw ArgumentError("mission area must be positive");
    if (!(gsd_m > 0.0))
        throw ArgumentError("mission gsd must be positive");
}

double area_per_day(double gsd_m, const CostAssumptions& a) {
    if (!(gsd_m > 0.0))
        throw ArgumentError("gsd must be positive");
    return a.coverage_per_flight_hour_km2_at_ref * (gsd_m / a.ref_gsd_m) *
           a.flight_hours_per_day;
}

double mission_days(const MissionSpec& spec, const CostAssumptions& a) {
    spec.validate();
    const double per_day = area_per_day(spec.gsd_m, a);
    if (!(per_day > 0.0))
        throw ArgumentError("daily coverage is zero; cannot compute mission days");
    return spec.area_km2 / per_day * (7.0 / 5.0) / a.sunny_fraction;
}

long pilots_required(double day_tot, const CostAssumptions& a) {
    if (day_tot < 0.0)
        throw ArgumentError("day_tot must be nonnegative");
    if (day_tot == 0.0)
        return 0;
    return std::max<long>(1, long(std::ceil(day_tot / a.max_mission_days)));
}

double fixed_cost(long n_pilots, const CostAssumptions& a) {
    if (n_pilots < 0)
        throw ArgumentError("pilot count must be nonnegative");
    return (a.airfare + a.training + a.part107_fee + a.registration) * double(n_pilots);
}

namespace {
// Per pilot-day labor burden: wages and benefits over the paid workday plus
// lodging, prorated car costs, and translation.
double daily_rate(const CostAssumptions& a) {
    return (a.wage + a.benefits) * a.paid_hours_per_day + a.hotel +
           a.car_rental / 30.0 + a.car_insurance / 30.0 + a.translator;
}

// Calendar pilot-days -> hours actually flown: only workdays (5 of 7 by
// default) with flyable weather accrue airframe hours.
double flight_hours(double day_tot, const CostAssumptions& a) {
    return day_tot * (a.workdays_per_week / 7.0) * a.sunny_fraction *
           a.flight_hours_per_day;
}
} // namespace

double human_cost(double day_tot, const CostAssumptions& a) {
    if (day_tot < 0.0)
        throw ArgumentError("day_tot must be nonnegative");
    return daily_rate(a) * day_tot;
}

double drone_cost(double day_tot, const CostAssumptions& a) {
    if (day_tot < 0.0)
        throw ArgumentError("day_tot must be nonnegative");
    const double bundle = a.drone_price + a.camera_price + a.battery_bundle;
    return bundle / a.drone_lifetime_h * flight_hours(day_tot, a);
}

double fuel_cost(const MissionSpec& spec, const CostAssumptions& a) {
    if (spec.area_km2 < 0.0)
        throw ArgumentError("area must be nonnegative");
    return a.fuel_price * (spec.area_km2 / (2.0 * a.comm_radius_km)) / a.km_per_gallon;
}

double storage_cost(const MissionSpec& spec, const CostAssumptions& a) {
    if (spec.area_km2 < 0.0)
        throw ArgumentError("area must be nonnegative");
    if (spec.area_km2 == 0.0)
        return 0.0;
    const double bytes =
        a.channels * a.bytes_per_channel * spec.area_km2 * 1e6 / (spec.gsd_m * spec.gsd_m);
    // Storage ships in whole units (hard drives).
    return std::ceil(bytes / a.storage_unit_bytes) * a.storage_price;
}

CostBreakdown estimate(const MissionSpec& spec, const CostAssumptions& a) {
    spec.validate();
    a.validate();

    CostBreakdown b;
    b.day_tot = mission_days(spec, a);
    b.n_pilots = pilots_required(b.day_tot, a);
    b.fixed = fixed_cost(b.n_pilots, a);
    b.human = human_cost(b.day_tot, a) *
              (a.literal_human_formula ? double(b.n_pilots) : 1.0);
    b.drone = drone_cost(b.day_tot, a);
    b.fuel = fuel_cost(spec, a);
    b.storage = storage_cost(spec, a);
    b.total = b.fixed + b.human + b.drone + b.fuel + b.storage;
    b.unit_cost = b.total / spec.area_km2;
    b.hotel_share = b.total > 0.0 ? a.hotel * b.day_tot / b.total : 0.0;
    return b;
}

std::vector<CurvePoint> unit_cost_curve(double gsd_m, const std::vector<double>& areas,
                                        const CostAssumptions& a) {
    std::vector<CurvePoint> out;
    out.reserve(areas.size());
    for (double area : areas) {
        MissionSpec spec;
        spec.area_km2 = area;
        spec.gsd_m = gsd_m;
        const CostBreakdown b = estimate(spec, a);
        out.push_back({area, b.total, b.unit_cost});
    }
    return out;
}

PlatformComparison compare_platforms(const MissionSpec& spec, const CostAssumptions& a,
                                     const std::vector<PlatformQuote>& platforms) {
    if (platforms.empty())
        throw ArgumentError("platform list is empty");
    for (const PlatformQuote& q : platforms)
        if (!(q.unit_cost_usd_km2 > 0.0))
            throw ArgumentError("platform unit costs must be positive");

    PlatformComparison cmp;
    cmp.uav_unit_cost_usd_km2 = estimate(spec, a).unit_cost;

    const double lo_bound = 1e-2, hi_bound = 1e7;
    auto uav_unit = [&](double area) {
        MissionSpec s = spec;
        s.area_km2 = area;
        return estimate(s, a).unit_cost;
    };
    for (const PlatformQuote& q : platforms) {
        PlatformRow row;
        row.quote = q;
        if (uav_unit(lo_bound) <= q.unit_cost_usd_km2) {
            row.break_even_area_km2 = lo_bound;
        } else if (uav_unit(hi_bound) > q.unit_cost_usd_km2) {
            row.break_even_area_km2 = std::nullopt;   // never within bounds
        } else {
            double lo = lo_bound, hi = hi_bound;
            for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (uav_unit(mid) <= q.unit_cost_usd_km2)
                    hi = mid;
                else
                    lo = mid;
            }
            row.break_even_area_km2 = hi;
        }
        cmp.rows.push_back(std::move(row));
    }
    return cmp;
}

namespace {

std::map<std::string, std::function<void(CostAssumptions&, const nlohmann::json&)>>
assumption_fields() {
    using J = nlohmann::json;
    return {
        {"part107_fee", [](CostAssumptions& a, const J& v) { a.part107_fee = v.get<double>(); }},
        {"training", [](CostAssumptions& a, const J& v) { a.training = v.get<double>(); }},
        {"registration", [](CostAssumptions& a, const J& v) { a.registration = v.get<double>(); }},
        {"car_rental", [](CostAssumptions& a, const J& v) { a.car_rental = v.get<double>(); }},
        {"car_insurance", [](CostAssumptions& a, const J& v) { a.car_insurance = v.get<double>(); }},
        {"fuel_price", [](CostAssumptions& a, const J& v) { a.fuel_price = v.get<double>(); }},
        {"airfare", [](CostAssumptions& a, const J& v) { a.airfare = v.get<double>(); }},
        {"translator", [](CostAssumptions& a, const J& v) { a.translator = v.get<double>(); }},
        {"wage", [](CostAssumptions& a, const J& v) { a.wage = v.get<double>(); }},
        {"benefits", [](CostAssumptions& a, const J& v) { a.benefits = v.get<double>(); }},
        {"paid_hours_per_day", [](CostAssumptions& a, const J& v) { a.paid_hours_per_day = v.get<double>(); }},
        {"hotel", [](CostAssumptions& a, const J& v) { a.hotel = v.get<double>(); }},
        {"drone_price", [](CostAssumptions& a, const J& v) { a.drone_price = v.get<double>(); }},
        {"camera_price", [](CostAssumptions& a, const J& v) { a.camera_price = v.get<double>(); }},
        {"battery_bundle", [](CostAssumptions& a, const J& v) { a.battery_bundle = v.get<double>(); }},
        {"storage_price", [](CostAssumptions& a, const J& v) { a.storage_price = v.get<double>(); }},
        {"storage_unit_bytes", [](CostAssumptions& a, const J& v) { a.storage_unit_bytes = v.get<double>(); }},
        {"drone_lifetime_h", [](CostAssumptions& a, const J& v) { a.drone_lifetime_h = v.get<double>(); }},
        {"flight_hours_per_day", [](CostAssumptions& a, const J& v) { a.flight_hours_per_day = v.get<double>(); }},
        {"workdays_per_week", [](CostAssumptions& a, const J& v) { a.workdays_per_week = v.get<double>(); }},
        {"sunny_fraction", [](CostAssumptions& a, const J& v) { a.sunny_fraction = v.get<double>(); }},
        {"max_mission_days", [](CostAssumptions& a, const J& v) { a.max_mission_days = v.get<double>(); }},
        {"comm_radius_km", [](CostAssumptions& a, const J& v) { a.comm_radius_km = v.get<double>(); }},
        {"km_per_gallon", [](CostAssumptions& a, const J& v) { a.km_per_gallon = v.get<double>(); }},
        {"coverage_per_flight_hour_km2_at_ref", [](CostAssumptions& a, const J& v) { a.coverage_per_flight_hour_km2_at_ref = v.get<double>(); }},
        {"ref_gsd_m", [](CostAssumptions& a, const J& v) { a.ref_gsd_m = v.get<double>(); }},
        {"channels", [](CostAssumptions& a, const J& v) { a.channels = v.get<double>(); }},
        {"bytes_per_channel", [](CostAssumptions& a, const J& v) { a.bytes_per_channel = v.get<double>(); }},
        {"literal_human_formula", [](CostAssumptions& a, const J& v) { a.literal_human_formula = v.get<bool>(); }},
    };
}

} // namespace

CostAssumptions load_assumptions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed assumptions JSON (" + path.string() + "): " + e.what());
    }
    if (!j.is_object())
        throw FormatError("assumptions JSON must be an object: " + path.string());

    CostAssumptions a;
    const auto fields = assumption_fields();
    for (const auto& [key, value] : j.items()) {
        const auto it = fields.find(key);
        if (it == fields.end())
            throw FormatError("unknown assumption key \"" + key + "\" in " + path.string());
        try {
            it->second(a, value);
        } catch (const nlohmann::json::exception&) {
            throw FormatError("assumption key \"" + key + "\" has wrong type in " +
                              path.string());
        }
    }
    a.validate();
    return a;
}

std::string assumptions_to_json(const CostAssumptions& a) {
    nlohmann::json j;
    j["part107_fee"] = a.part107_fee;
    j["training"] = a.training;
    j["registration"] = a.registration;
    j["car_rental"] = a.car_rental;
    j["car_insurance"] = a.car_insurance;
    j["fuel_price"] = a.fuel_price;
    j["airfare"] = a.airfare;
    j["translator"] = a.translator;
    j["wage"] = a.wage;
    j["benefits"] = a.benefits;
    j["paid_hours_per_day"] = a.paid_hours_per_day;
    j["hotel"] = a.hotel;
    j["drone_price"] = a.drone_price;
    j["camera_price"] = a.camera_price;
    j["battery_bundle"] = a.battery_bundle;
    j["storage_price"] = a.storage_price;
    j["storage_unit_bytes"] = a.storage_unit_bytes;
    j["drone_lifetime_h"] = a.drone_lifetime_h;
    j["flight_hours_per_day"] = a.flight_hours_per_day;
    j["workdays_per_week"] = a.workdays_per_week;
    j["sunny_fraction"] = a.sunny_fraction;
    j["max_mission_days"] = a.max_mission_days;
    j["comm_radius_km"] = a.comm_radius_km;
    j["km_per_gallon"] = a.km_per_gallon;
    j["coverage_per_flight_hour_km2_at_ref"] = a.coverage_per_flight_hour_km2_at_ref;
    j["ref_gsd_m"] = a.ref_gsd_m;
    j["channels"] = a.channels;
    j["bytes_per_channel"] = a.bytes_per_channel;
    j["literal_human_formula"] = a.literal_human_formula;
    return j.dump(2) + "\n";
}

std::vector<PlatformQuote> load_platforms(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
        if (!j.is_array())
            throw FormatError("platform list must be a JSON array: " + path.string());
        std::vector<PlatformQuote> out;
        for (const auto& e : j) {
            PlatformQuote q;
            q.name = e.at("name").get<std::string>();
            q.gsd_m = e.at("gsd_m").get<double>();
            q.unit_cost_usd_km2 = e.at("unit_cost_usd_km2").get<double>();
            out.push_back(std::move(q));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed platform JSON (" + path.string() + "): " + e.what());
    }
}

} // namespace shs
