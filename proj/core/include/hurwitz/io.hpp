#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <hurwitz/detail/json.hpp>

#include "hurwitz/annulus.hpp"
#include "hurwitz/eval.hpp"
#include "hurwitz/ideals.hpp"
#include "hurwitz/kronecker.hpp"
#include "hurwitz/twist.hpp"
#include "hurwitz/zeros.hpp"

namespace hurwitz::io {

using json = nlohmann::json;

/// "rat:p,q" | "quad:a,b,d" | "dec:<literal>".
AlphaParam parse_alpha(const std::string& text);
/// Comma-separated reals.
std::vector<Real> parse_real_list(const std::string& text);
/// Comma-separated values f(1), ..., f(q).
PeriodicFunction parse_function(const std::string& text);
/// "re,im" or "re".
Complex parse_complex(const std::string& text);

/// Reals go out as JSON numbers (shortest round-trip double form); infinities
/// and NaN as the strings "inf", "-inf", "nan".
json real_to_json(Real x);
Real real_from_json(const json& j);
/// Exact integers: a JSON number when it fits in int64, a decimal string otherwise.
json big_to_json(const BigInt& x);
BigInt big_from_json(const json& j);

/// Overrides read from a --config document. Keys other than f, alpha,
/// precision, seed and threads are rejected with InvalidArgument.
struct RunConfig {
  std::optional<std::vector<Real>> f;
  std::optional<std::string> alpha;
  std::optional<std::string> precision;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);

/// CSV with header sigma,t,re,im and 17 significant digits.
std::string grid_csv(const std::vector<ComplexPoint>& points, const std::vector<Complex>& values);

/// Inverse of to_string(ErrorCode); InvalidArgument for unknown names.
ErrorCode error_code_from_string(const std::string& name);

/// Failure document {"error": code, "message": ..., ...}.
json error_json(ErrorCode code, const std::string& message);

}  // namespace hurwitz::io

namespace hurwitz {
void to_json(nlohmann::json& j, const ComplexPoint& p);
void from_json(const nlohmann::json& j, ComplexPoint& p);
}  // namespace hurwitz

namespace hurwitz::annulus {
void to_json(nlohmann::json& j, const Radii& r);
void from_json(const nlohmann::json& j, Radii& r);
}  // namespace hurwitz::annulus

namespace hurwitz::kronecker {
void to_json(nlohmann::json& j, const KroneckerSolution& s);
void from_json(const nlohmann::json& j, KroneckerSolution& s);
}  // namespace hurwitz::kronecker

namespace hurwitz::twist {
void to_json(nlohmann::json& j, const Sigma0Result& s);
void from_json(const nlohmann::json& j, Sigma0Result& s);
void to_json(nlohmann::json& j, const HighPrecisionCheck& h);
void from_json(const nlohmann::json& j, HighPrecisionCheck& h);
void to_json(nlohmann::json& j, const BlockRecord& b);
void from_json(const nlohmann::json& j, BlockRecord& b);
void to_json(nlohmann::json& j, const ScheduleFailure& f);
void from_json(const nlohmann::json& j, ScheduleFailure& f);
/// Summary line of a report: everything except the block records and angles.
nlohmann::json report_header(const InductionReport& r);
}  // namespace hurwitz::twist

namespace hurwitz::ideals {
void to_json(nlohmann::json& j, const PrimeIdeal& p);
void from_json(const nlohmann::json& j, PrimeIdeal& p);
void to_json(nlohmann::json& j, const IdealFactorization& f);
void from_json(const nlohmann::json& j, IdealFactorization& f);
void to_json(nlohmann::json& j, const CasselsBlock& b);
void from_json(const nlohmann::json& j, CasselsBlock& b);
}  // namespace hurwitz::ideals

namespace hurwitz::zeros {
void to_json(nlohmann::json& j, const CountResult& c);
void from_json(const nlohmann::json& j, CountResult& c);
void to_json(nlohmann::json& j, const RoucheCertificate& c);
void from_json(const nlohmann::json& j, RoucheCertificate& c);
void to_json(nlohmann::json& j, const ZeroRecord& r);
void from_json(const nlohmann::json& j, ZeroRecord& r);
void to_json(nlohmann::json& j, const StageFailure& f);
void from_json(const nlohmann::json& j, StageFailure& f);
void to_json(nlohmann::json& j, const StageReport& s);
void from_json(const nlohmann::json& j, StageReport& s);
void to_json(nlohmann::json& j, const PipelineResult& r);
void from_json(const nlohmann::json& j, PipelineResult& r);
}  // namespace hurwitz::zeros
