#include "hurwitz/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hurwitz::io {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

Real parse_real(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) fail(ErrorCode::InvalidArgument, "empty number");
  std::size_t used = 0;
  Real v = 0;
  try {
    v = std::stold(s, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) fail(ErrorCode::InvalidArgument, "not a finite number: '" + s + "'");
  return v;
}

BigInt parse_integer(const std::string& raw) {
  const std::string s = trim(raw);
  const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos) {
    fail(ErrorCode::InvalidArgument, "not an integer: '" + s + "'");
  }
  return BigInt(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

AlphaParam parse_alpha(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorCode::InvalidArgument, "alpha must be rat:p,q | quad:a,b,d | dec:<x>");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (kind == "rat") {
    const auto parts = split(body, ',');
    if (parts.size() != 2) fail(ErrorCode::InvalidArgument, "rat:p,q needs two integers");
    return AlphaParam::rational(parse_integer(parts[0]), parse_integer(parts[1]));
  }
  if (kind == "quad") {
    const auto parts = split(body, ',');
    if (parts.size() != 3) fail(ErrorCode::InvalidArgument, "quad:a,b,d needs three fields");
    const BigInt d = parse_integer(parts[2]);
    if (d > std::numeric_limits<std::int64_t>::max() || d < std::numeric_limits<std::int64_t>::min()) {
      fail(ErrorCode::InvalidArgument, "radicand out of range");
    }
    return AlphaParam::quadratic(parse_rational(trim(parts[0])), parse_rational(trim(parts[1])),
                                 static_cast<std::int64_t>(d));
  }
  if (kind == "dec") return AlphaParam::decimal(trim(body));
  fail(ErrorCode::InvalidArgument, "unknown alpha kind '" + kind + "'");
}

std::vector<Real> parse_real_list(const std::string& text) {
  std::vector<Real> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_real(part));
  if (out.empty()) fail(ErrorCode::InvalidArgument, "empty list");
  return out;
}

PeriodicFunction parse_function(const std::string& text) { return PeriodicFunction(parse_real_list(text)); }

Complex parse_complex(const std::string& text) {
  const auto v = parse_real_list(text);
  if (v.size() > 2) fail(ErrorCode::InvalidArgument, "complex number takes re or re,im");
  return {v[0], v.size() == 2 ? v[1] : 0};
}

json real_to_json(Real x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return static_cast<double>(x);
}

Real real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<Real>::infinity();
    if (s == "-inf") return -std::numeric_limits<Real>::infinity();
    if (s == "nan") return std::numeric_limits<Real>::quiet_NaN();
    return parse_real(s);
  }
  fail(ErrorCode::InvalidArgument, "expected a number");
}

json big_to_json(const BigInt& x) {
  if (x <= std::numeric_limits<std::int64_t>::max() && x >= std::numeric_limits<std::int64_t>::min()) {
    return static_cast<std::int64_t>(x);
  }
  return x.str();
}

BigInt big_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return parse_integer(j.get<std::string>());
  fail(ErrorCode::InvalidArgument, "expected an integer");
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "f") {
        if (value.is_string()) {
          c.f = parse_real_list(value.get<std::string>());
        } else {
          std::vector<Real> v;
          for (const auto& x : value) v.push_back(real_from_json(x));
          c.f = std::move(v);
        }
      } else if (key == "alpha") {
        c.alpha = value.get<std::string>();
        parse_alpha(*c.alpha);
      } else if (key == "precision") {
        c.precision = value.is_string() ? value.get<std::string>() : std::to_string(value.get<unsigned>());
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "threads") {
        c.threads = value.get<unsigned>();
      } else {
        fail(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::InvalidArgument, "config key '" + key + "': " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

std::string grid_csv(const std::vector<ComplexPoint>& points, const std::vector<Complex>& values) {
  if (points.size() != values.size()) fail(ErrorCode::InvalidArgument, "grid points and values differ in length");
  std::string out = "sigma,t,re,im\n";
  char buf[128];
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", static_cast<double>(points[i].sigma),
                  static_cast<double>(points[i].t), static_cast<double>(values[i].real()),
                  static_cast<double>(values[i].imag()));
    out += buf;
  }
  return out;
}

json error_json(ErrorCode code, const std::string& message) {
  return json{{"error", std::string(to_string(code))}, {"message", message}};
}

ErrorCode error_code_from_string(const std::string& s) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::ResidueZero); ++c) {
    if (to_string(static_cast<ErrorCode>(c)) == s) return static_cast<ErrorCode>(c);
  }
  fail(ErrorCode::InvalidArgument, "unknown error code '" + s + "'");
}

}  // namespace hurwitz::io

namespace {
using hurwitz::io::big_from_json;
using hurwitz::io::big_to_json;
using hurwitz::io::json;
using hurwitz::io::real_from_json;
using hurwitz::io::real_to_json;

json complex_json(hurwitz::Complex z) { return json{{"re", real_to_json(z.real())}, {"im", real_to_json(z.imag())}}; }
hurwitz::Complex complex_from(const json& j) { return {real_from_json(j.at("re")), real_from_json(j.at("im"))}; }

std::map<std::string, hurwitz::Real> numbers_from(const json& j) {
  std::map<std::string, hurwitz::Real> out;
  for (const auto& [k, v] : j.items()) out[k] = real_from_json(v);
  return out;
}
json numbers_json(const std::map<std::string, hurwitz::Real>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = real_to_json(v);
  return j;
}
}  // namespace

namespace hurwitz {
void to_json(nlohmann::json& j, const ComplexPoint& p) {
  j = json{{"sigma", real_to_json(p.sigma)}, {"t", real_to_json(p.t)}};
}
void from_json(const nlohmann::json& j, ComplexPoint& p) {
  p.sigma = real_from_json(j.at("sigma"));
  p.t = real_from_json(j.at("t"));
}
}  // namespace hurwitz

namespace hurwitz::annulus {
void to_json(nlohmann::json& j, const Radii& r) { j = json{{"R", real_to_json(r.outer)}, {"T", real_to_json(r.inner)}}; }
void from_json(const nlohmann::json& j, Radii& r) {
  r.outer = real_from_json(j.at("R"));
  r.inner = real_from_json(j.at("T"));
}
}  // namespace hurwitz::annulus

namespace hurwitz::kronecker {
void to_json(nlohmann::json& j, const KroneckerSolution& s) {
  j = json{{"t", real_to_json(s.t)},
           {"x", s.integer_parts},
           {"max_error", real_to_json(s.max_error)},
           {"iterations", s.iterations}};
}
void from_json(const nlohmann::json& j, KroneckerSolution& s) {
  s.t = real_from_json(j.at("t"));
  s.integer_parts = j.at("x").get<std::vector<std::int64_t>>();
  s.max_error = real_from_json(j.at("max_error"));
  s.iterations = j.value("iterations", std::uint64_t{0});
}
}  // namespace hurwitz::kronecker

namespace hurwitz::twist {
void to_json(nlohmann::json& j, const Sigma0Result& s) {
  j = json{{"sigma0", real_to_json(s.sigma0)},
           {"residual", real_to_json(s.residual)},
           {"iterations", s.iterations},
           {"sigma0_text", s.sigma0_text}};
}
void from_json(const nlohmann::json& j, Sigma0Result& s) {
  s.sigma0 = real_from_json(j.at("sigma0"));
  s.residual = real_from_json(j.at("residual"));
  s.iterations = j.at("iterations").get<int>();
  s.sigma0_text = j.value("sigma0_text", std::string{});
}

void to_json(nlohmann::json& j, const HighPrecisionCheck& h) {
  j = json{{"S1", real_to_json(h.S1)},         {"S2", real_to_json(h.S2)}, {"S3", real_to_json(h.S3)},
           {"S4", real_to_json(h.S4)},         {"next_abs", real_to_json(h.next_abs)},
           {"eqalg", h.eqalg},                 {"chain", h.chain},         {"ratio", h.ratio}};
}
void from_json(const nlohmann::json& j, HighPrecisionCheck& h) {
  h.S1 = real_from_json(j.at("S1"));
  h.S2 = real_from_json(j.at("S2"));
  h.S3 = real_from_json(j.at("S3"));
  h.S4 = real_from_json(j.at("S4"));
  h.next_abs = real_from_json(j.at("next_abs"));
  h.eqalg = j.at("eqalg").get<bool>();
  h.chain = j.at("chain").get<bool>();
  h.ratio = j.at("ratio").get<bool>();
}

void to_json(nlohmann::json& j, const BlockRecord& b) {
  j = json{{"j", b.j},
           {"N", b.N},
           {"M", b.M},
           {"N_next", b.N_next},
           {"a_count", b.a_count},
           {"b_count", b.b_count},
           {"S1", real_to_json(b.S1)},
           {"S2", real_to_json(b.S2)},
           {"S3", real_to_json(b.S3)},
           {"S4", real_to_json(b.S4)},
           {"lambda", complex_json(b.lambda)},
           {"z", complex_json(b.z)},
           {"next_abs", real_to_json(b.next_abs)},
           {"bound", real_to_json(b.bound)},
           {"ratio", real_to_json(b.ratio)},
           {"inner_radius", real_to_json(b.inner_radius)},
           {"weight_ratio", real_to_json(b.weight_ratio)},
           {"contraction", b.contraction},
           {"ratio_ok", b.ratio_ok},
           {"separation", b.separation},
           {"induction", b.induction},
           {"chain", b.chain},
           {"eqalg", b.eqalg},
           {"weights_ok", b.weights_ok},
           {"high", b.high}};
}
void from_json(const nlohmann::json& j, BlockRecord& b) {
  b.j = j.at("j").get<std::size_t>();
  b.N = j.at("N").get<std::int64_t>();
  b.M = j.at("M").get<std::int64_t>();
  b.N_next = j.at("N_next").get<std::int64_t>();
  b.a_count = j.at("a_count").get<std::size_t>();
  b.b_count = j.at("b_count").get<std::size_t>();
  b.S1 = real_from_json(j.at("S1"));
  b.S2 = real_from_json(j.at("S2"));
  b.S3 = real_from_json(j.at("S3"));
  b.S4 = real_from_json(j.at("S4"));
  b.lambda = complex_from(j.at("lambda"));
  b.z = complex_from(j.at("z"));
  b.next_abs = real_from_json(j.at("next_abs"));
  b.bound = real_from_json(j.at("bound"));
  b.ratio = real_from_json(j.at("ratio"));
  b.inner_radius = real_from_json(j.at("inner_radius"));
  b.weight_ratio = real_from_json(j.at("weight_ratio"));
  b.contraction = j.at("contraction").get<bool>();
  b.ratio_ok = j.at("ratio_ok").get<bool>();
  b.separation = j.at("separation").get<bool>();
  b.induction = j.at("induction").get<bool>();
  b.chain = j.at("chain").get<bool>();
  b.eqalg = j.at("eqalg").get<bool>();
  b.weights_ok = j.at("weights_ok").get<bool>();
  b.high = j.at("high").get<HighPrecisionCheck>();
}

void to_json(nlohmann::json& j, const ScheduleFailure& f) {
  j = json{{"error", std::string(to_string(f.code))}, {"block", f.block}, {"message", f.message}};
}
void from_json(const nlohmann::json& j, ScheduleFailure& f) {
  f.code = io::error_code_from_string(j.at("error").get<std::string>());
  f.block = j.at("block").get<std::size_t>();
  f.message = j.at("message").get<std::string>();
}

nlohmann::json report_header(const InductionReport& r) {
  json j{{"sigma", real_to_json(r.sigma)},
         {"head", real_to_json(r.head)},
         {"tail", real_to_json(r.tail)},
         {"case_holds", r.case_holds},
         {"blocks", r.blocks.size()},
         {"completed", r.completed()}};
  if (r.failure) j["failure"] = *r.failure;
  return j;
}
}  // namespace hurwitz::twist

namespace hurwitz::ideals {
namespace {
std::string kind_name(Splitting s) {
  switch (s) {
    case Splitting::Split: return "split";
    case Splitting::Inert: return "inert";
    case Splitting::Ramified: return "ramified";
  }
  return "inert";
}
Splitting kind_from(const std::string& s) {
  if (s == "split") return Splitting::Split;
  if (s == "inert") return Splitting::Inert;
  if (s == "ramified") return Splitting::Ramified;
  fail(ErrorCode::InvalidArgument, "unknown splitting '" + s + "'");
}
}  // namespace

void to_json(nlohmann::json& j, const PrimeIdeal& p) {
  j = json{{"p", p.p}, {"r", p.r}, {"kind", kind_name(p.kind)}, {"label", p.label()}};
}
void from_json(const nlohmann::json& j, PrimeIdeal& p) {
  p.p = j.at("p").get<std::int64_t>();
  p.r = j.at("r").get<std::int64_t>();
  p.kind = kind_from(j.at("kind").get<std::string>());
}

void to_json(nlohmann::json& j, const IdealFactorization& f) {
  json factors = json::array();
  for (const auto& [prime, e] : f.factors) factors.push_back(json{{"prime", prime}, {"e", e}});
  j = json{{"n", f.n}, {"factors", factors}, {"norm", big_to_json(f.norm)}};
}
void from_json(const nlohmann::json& j, IdealFactorization& f) {
  f.n = j.at("n").get<std::int64_t>();
  f.factors.clear();
  for (const auto& x : j.at("factors")) f.factors.emplace_back(x.at("prime").get<PrimeIdeal>(), x.at("e").get<int>());
  f.norm = big_from_json(j.at("norm"));
}

void to_json(nlohmann::json& j, const CasselsBlock& b) {
  json witness = json::object();
  for (const auto& [n, p] : b.witness) witness[std::to_string(n)] = p;
  j = json{{"N", b.N},
           {"M", b.M},
           {"private", b.private_n},
           {"witness", witness},
           {"density", real_to_json(b.density)}};
}
void from_json(const nlohmann::json& j, CasselsBlock& b) {
  b.N = j.at("N").get<std::int64_t>();
  b.M = j.at("M").get<std::int64_t>();
  b.private_n = j.at("private").get<std::vector<std::int64_t>>();
  b.witness.clear();
  for (const auto& [k, v] : j.at("witness").items()) b.witness[std::stoll(k)] = v.get<PrimeIdeal>();
  b.density = real_from_json(j.at("density"));
}
}  // namespace hurwitz::ideals

namespace hurwitz::zeros {
void to_json(nlohmann::json& j, const CountResult& c) {
  j = json{{"count", c.count},
           {"winding", real_to_json(c.winding)},
           {"min_modulus", real_to_json(c.min_modulus)},
           {"evaluations", c.evaluations}};
}
void from_json(const nlohmann::json& j, CountResult& c) {
  c.count = j.at("count").get<int>();
  c.winding = real_from_json(j.at("winding"));
  c.min_modulus = real_from_json(j.at("min_modulus"));
  c.evaluations = j.at("evaluations").get<std::size_t>();
}

void to_json(nlohmann::json& j, const RoucheCertificate& c) {
  j = json{{"sigma0", real_to_json(c.sigma0)},
           {"delta1", real_to_json(c.delta1)},
           {"t", real_to_json(c.t)},
           {"eps_min", real_to_json(c.eps_min)},
           {"sup_diff", real_to_json(c.sup_diff)},
           {"samples", c.samples},
           {"margin", real_to_json(c.margin)},
           {"sampled_min", real_to_json(c.sampled_min)},
           {"sampled_sup", real_to_json(c.sampled_sup)},
           {"lipschitz_f", real_to_json(c.lipschitz_f)},
           {"lipschitz_diff", real_to_json(c.lipschitz_diff)},
           {"spacing", real_to_json(c.spacing)},
           {"eval_tol", real_to_json(c.eval_tol)},
           {"region_tail", real_to_json(c.region_tail)},
           {"count_f", c.count_f},
           {"count_g", c.count_g},
           {"valid", c.valid()}};
}
void from_json(const nlohmann::json& j, RoucheCertificate& c) {
  c.sigma0 = real_from_json(j.at("sigma0"));
  c.delta1 = real_from_json(j.at("delta1"));
  c.t = real_from_json(j.at("t"));
  c.eps_min = real_from_json(j.at("eps_min"));
  c.sup_diff = real_from_json(j.at("sup_diff"));
  c.samples = j.at("samples").get<std::size_t>();
  c.margin = real_from_json(j.at("margin"));
  c.sampled_min = real_from_json(j.at("sampled_min"));
  c.sampled_sup = real_from_json(j.at("sampled_sup"));
  c.lipschitz_f = real_from_json(j.at("lipschitz_f"));
  c.lipschitz_diff = real_from_json(j.at("lipschitz_diff"));
  c.spacing = real_from_json(j.at("spacing"));
  c.eval_tol = real_from_json(j.at("eval_tol"));
  c.region_tail = real_from_json(j.at("region_tail"));
  c.count_f = j.at("count_f").get<int>();
  c.count_g = j.at("count_g").get<int>();
}

void to_json(nlohmann::json& j, const ZeroRecord& r) {
  j = json{{"s", r.s},
           {"residual", real_to_json(r.residual)},
           {"method", r.method == Method::RouchePipeline ? "rouche-pipeline" : "argument-principle+newton"}};
  if (r.certificate) j["certificate"] = *r.certificate;
}
void from_json(const nlohmann::json& j, ZeroRecord& r) {
  r.s = j.at("s").get<ComplexPoint>();
  r.residual = real_from_json(j.at("residual"));
  const auto m = j.at("method").get<std::string>();
  if (m == "rouche-pipeline") r.method = Method::RouchePipeline;
  else if (m == "argument-principle+newton") r.method = Method::ArgumentPrincipleNewton;
  else fail(ErrorCode::InvalidArgument, "unknown method '" + m + "'");
  r.certificate.reset();
  if (j.contains("certificate")) r.certificate = j.at("certificate").get<RoucheCertificate>();
}

void to_json(nlohmann::json& j, const StageFailure& f) {
  j = json{{"stage", f.stage},
           {"error", std::string(to_string(f.code))},
           {"message", f.message},
           {"numbers", numbers_json(f.numbers)}};
}
void from_json(const nlohmann::json& j, StageFailure& f) {
  f.stage = j.at("stage").get<std::string>();
  f.code = io::error_code_from_string(j.at("error").get<std::string>());
  f.message = j.at("message").get<std::string>();
  f.numbers = numbers_from(j.at("numbers"));
}

void to_json(nlohmann::json& j, const StageReport& s) { j = json{{"stage", s.stage}, {"numbers", numbers_json(s.numbers)}}; }
void from_json(const nlohmann::json& j, StageReport& s) {
  s.stage = j.at("stage").get<std::string>();
  s.numbers = numbers_from(j.at("numbers"));
}

void to_json(nlohmann::json& j, const PipelineResult& r) {
  j = json{{"stages", r.stages}};
  if (r.record) j["record"] = *r.record;
  if (r.failure) j["failure"] = *r.failure;
}
void from_json(const nlohmann::json& j, PipelineResult& r) {
  r.stages = j.at("stages").get<std::vector<StageReport>>();
  r.record.reset();
  r.failure.reset();
  if (j.contains("record")) r.record = j.at("record").get<ZeroRecord>();
  if (j.contains("failure")) r.failure = j.at("failure").get<StageFailure>();
}
}  // namespace hurwitz::zeros
