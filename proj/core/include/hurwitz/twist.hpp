#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hurwitz/errors.hpp"
#include "hurwitz/eval.hpp"
#include "hurwitz/precision.hpp"

namespace hurwitz::twist {

/// Weight +1 for n <= m and -1 for n > m.
struct SignFlip {
  BigIndex m = 0;
};

/// Weight e^{i angles[n]} for n < angles.size() and 1 beyond.
struct CharacterWeights {
  std::vector<Real> angles;
};

/// F(s) = sum_{n>=0} f(n) w(n) (n+alpha)^{-s} with unimodular weights w.
class TwistedSeries {
 public:
  TwistedSeries(PeriodicFunction f, AlphaParam alpha, SignFlip rule);
  TwistedSeries(PeriodicFunction f, AlphaParam alpha, CharacterWeights rule);

  const PeriodicFunction& f() const { return f_; }
  const AlphaParam& alpha() const { return alpha_; }
  bool is_sign_flip() const { return std::holds_alternative<SignFlip>(rule_); }
  /// The flip index m; InvalidArgument for character weights.
  BigIndex flip_index() const;

  Complex weight(BigIndex n) const;
  Complex evaluate(ComplexPoint s, Real tol = kDefaultTol) const;
  Real evaluate_real(Real sigma, Real tol = kDefaultTol) const;
  HighReal evaluate_real(const HighReal& sigma, const HighReal& tol) const;

 private:
  PeriodicFunction f_;
  AlphaParam alpha_;
  std::variant<SignFlip, CharacterWeights> rule_;
};

struct TruncationResult {
  BigIndex m = 0;
  Real head = 0;        // sum_{n<=m} f(n) (n+alpha)^{-1-delta}
  Real tail = 0;        // sum_{n>m} f(n) (n+alpha)^{-1-delta}
  Real tail_bound = 0;  // max|f| (m+alpha)^{-delta} / delta
  bool negated = false; // f was replaced by -f to make the residue positive
  PeriodicFunction f;   // the normalized f
};

/// Smallest m with head > tail at s = 1 + delta, after normalizing f to a
/// positive residue. NoSuchIndex if the residue is zero or L(1+delta) <= 0.
TruncationResult truncation_index(const PeriodicFunction& f, const AlphaParam& alpha, Real delta);

/// The sign-flip series built from truncation_index.
TwistedSeries sign_flip_series(const PeriodicFunction& f, const AlphaParam& alpha, Real delta);

struct Sigma0Result {
  Real sigma0 = 0;
  Real residual = 0;  // |F(sigma0)|
  int iterations = 0;
  std::string sigma0_text;  // full-precision decimal when high precision ran
};

/// Root of the sign-flip F in (1, 1 + delta) by bisection. high_digits = 0
/// runs in working precision with the search floor sigma - 1 >= 1e-8;
/// otherwise mpfr at that many digits with floor 1e-20.
/// SignChangeNotBracketed if F(1+delta) <= 0 or no negative value is found
/// above the floor; PrecisionUnreachable if tol is below the attainable level.
Sigma0Result find_sigma0(const TwistedSeries& F, Real delta, Real tol = 1e-12L, unsigned high_digits = 0);

/// -Lambda if 0 < |Lambda| <= S3, -S3 Lambda/|Lambda| if |Lambda| > S3, 0 if Lambda = 0.
Complex choose_correction(Complex lambda, Real s3);

struct GreedyState {
  std::size_t j = 0;
  Complex partial_sum;  // sum_{n <= N_j} f(n) chi(n+alpha) (n+alpha)^{-sigma}
  Real S1 = 0;
  Real S2 = 0;
  Real S3 = 0;
  Real S4 = 0;
  Complex lambda;
  Complex z;
};

struct StepResult {
  GreedyState state;             // S1..S4, Lambda, z of this step
  std::vector<Real> phases;      // arguments of chi(n+alpha) on the A-set, in input order
  Complex next_partial_sum;      // sum through N_{j+1}
  Real inner_radius = 0;         // of the A-weights
};

/// One induction step: given the running sum, the positive A-weights and the
/// already-fixed B-terms f(n) chi(n+alpha) (n+alpha)^{-sigma}, choose z and
/// phases on A realizing it. AnnulusGap when the A-weights do not fill the disk.
StepResult greedy_step(const GreedyState& state, std::span<const Real> a_weights,
                       std::span<const Complex> b_terms, Real s4, Real tol = 1e-12L);

struct ScheduleScale {
  std::int64_t numerator = 1;
  std::int64_t denominator = 100;
};

struct BlockSchedule {
  std::int64_t N1 = 1000;
  std::size_t blocks = 50;
  ScheduleScale scale;           // M_j = max(1, floor(N_j * numerator / denominator))
  std::optional<Real> sigma;     // fixed exponent; searched when absent
};

enum class SetMode { Authentic, Synthetic };

struct ScheduleOptions {
  SetMode mode = SetMode::Authentic;
  Real delta = 1;                  // sigma < min(1 + delta, 2)
  std::uint64_t seed = 0;          // synthetic sets and phases
  Real synthetic_density = 0.6;    // probability of joining A in synthetic mode
  unsigned high_digits = kDefaultHighDigits;
  unsigned threads = 1;
  Real tol = 1e-12L;
};

struct HighPrecisionCheck {
  Real S1 = 0;
  Real S2 = 0;
  Real S3 = 0;
  Real S4 = 0;
  Real next_abs = 0;
  bool eqalg = false;
  bool chain = false;
  bool ratio = false;
};

struct BlockRecord {
  std::size_t j = 0;
  std::int64_t N = 0;
  std::int64_t M = 0;
  std::int64_t N_next = 0;
  std::size_t a_count = 0;
  std::size_t b_count = 0;
  Real S1 = 0;
  Real S2 = 0;
  Real S3 = 0;
  Real S4 = 0;
  Complex lambda;
  Complex z;
  Real next_abs = 0;        // |sum through N_{j+1}|
  Real bound = 0;           // max(0, S1 + S2 - S3)
  Real ratio = 0;           // S3 / S2 (infinite when B is empty)
  Real inner_radius = 0;
  Real weight_ratio = 0;    // max/min of the A-weights
  bool contraction = false; // next_abs <= bound + tol
  bool ratio_ok = false;    // S3/S2 > 101/99
  bool separation = false;  // 100 (S3 - S2) > S3 + S2
  bool induction = false;   // S1 < 0.01 (S2 + S3 + S4)
  bool chain = false;       // S1 + S2 - S3 < 0.01 S4
  bool eqalg = false;       // next_abs < 0.01 S4
  bool weights_ok = false;  // max A-weight < 3 min A-weight
  HighPrecisionCheck high;
};

struct ScheduleFailure {
  ErrorCode code;
  std::size_t block;
  std::string message;
};

struct InductionReport {
  Real sigma = 0;
  Real head = 0;   // sum_{n<=N_1} f(n) (n+alpha)^{-sigma}
  Real tail = 0;   // sum_{n>N_1} f(n) (n+alpha)^{-sigma}
  bool case_holds = false;
  std::vector<BlockRecord> blocks;
  std::optional<ScheduleFailure> failure;
  std::vector<Real> angles;  // arg chi(n+alpha) for n <= N_final
  bool completed() const { return !failure.has_value(); }
};

/// sigma in (1, min(1+delta, 2)) with head(N_1) < 10^-2 tail(N_1), aiming
/// at half that threshold. CaseUnreachable when none exists above 1 + 1e-8.
Real choose_sigma(const PeriodicFunction& f, const AlphaParam& alpha, std::int64_t N1, Real delta);

/// Runs the block induction. Authentic mode takes A from the private
/// primes of (n + alpha) a; synthetic mode draws A and the B-phases from the
/// seed. Every block is rechecked at high_digits from the character values
/// alone. CaseUnreachable is thrown; later failures halt the run and are
/// returned in the report with the offending block's ledger.
InductionReport run_schedule(const PeriodicFunction& f, const AlphaParam& alpha, const BlockSchedule& schedule,
                             const ScheduleOptions& options);

}  // namespace hurwitz::twist
