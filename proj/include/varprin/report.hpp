#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "varprin/elliptic.hpp"
#include "varprin/fixed_points.hpp"
#include "varprin/multiplicity.hpp"
#include "varprin/thresholds.hpp"

namespace varprin {

/// Insertion-ordered so that serialization is deterministic.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Finite values as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
Json to_json(double v);
Json to_json(const Vec& v);
Json to_json(const ThresholdEstimate& e);
Json to_json(const RatioCurve& c);
Json to_json(const CriticalPointRecord& r);
Json to_json(const MinimizeResult& r);
Json to_json(const PhiResult& r);
Json to_json(const BetaResult& r);
Json to_json(const RootResult& r);
Json to_json(const IdentityReport& r);
Json to_json(const DichotomyReport& r);
Json to_json(const MinimaSequence& s);
Json to_json(const GrowthProfile& p);
Json to_json(const HuntResult& h);
Json to_json(const EllipticThreshold& t);
Json to_json(const EllipticSolution& s);
Json to_json(const UnboundednessReport& r);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

/// One "path,value" row per leaf; numbers printed with %.17g.
std::string flatten_csv(const Json& doc);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// UTC time in ISO 8601.
std::string utc_timestamp();

}  // namespace varprin
