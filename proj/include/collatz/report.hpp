#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "collatz/affine_sets.hpp"
#include "collatz/model.hpp"
#include "collatz/sieve.hpp"
#include "collatz/stats.hpp"
#include "collatz/tag.hpp"
#include "collatz/trajectory.hpp"

namespace collatz::report {

inline constexpr std::string_view kSchema = "collatz-lab/1";

// RFC 4180 field quoting: quotes fields containing comma, quote, CR or LF.
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);

// 10x10 grid of sigma_inf(base + 10j + k), rows k, columns j, for length-100
// censuses; any other length falls back to a flat `offset sigma` listing.
std::string render_table(const BlockCensus& census);
// sigma_inf / frequency / 1-ratio rows.
std::string render_rows(const BlockCensus& census);
std::string census_csv(const BlockCensus& census);
nlohmann::json census_json(const BlockCensus& census);

std::string trajectory_csv(const Trajectory& t);
nlohmann::json trajectory_json(const Trajectory& t, const GeneralizedCollatzMap& map);

nlohmann::json stats_json(const StatRecord& r);
nlohmann::json prediction_json(const Natural& n, const model::Prediction& p);
std::string comparison_csv(const model::Comparison& c);
nlohmann::json comparison_json(const model::Comparison& c);
nlohmann::json records_json(const RecordTable& t);
nlohmann::json verification_json(const VerificationReport& r);
nlohmann::json census_cycles_json(const CycleCensus& c, const GeneralizedCollatzMap& map);
nlohmann::json tag_run_json(const tag::TagSystem& sys, const tag::TagRun& run);
std::string members_csv(const ClosureSet& set);
std::string density_csv(const std::vector<DensityPoint>& points);

enum class Scale { kLinear, kLog };
enum class Overlay { kNone, kSlope, kExtremal };

// Self-contained SVG polyline of the trajectory values (or their natural
// logarithms), with an optional dotted model overlay.
std::string render_svg(const Trajectory& t, Scale scale, Overlay overlay = Overlay::kNone);

}  // namespace collatz::report
