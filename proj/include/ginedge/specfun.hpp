#pragma once

namespace ginedge::specfun {

/// Order of a supported polylogarithm. Only 1/2 and 3/2 can be constructed.
class PolylogOrder {
 public:
  static constexpr PolylogOrder half() { return PolylogOrder(1); }
  static constexpr PolylogOrder three_halves() { return PolylogOrder(3); }

  /// The order s as a real number.
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool operator==(const PolylogOrder&) const = default;

 private:
  constexpr explicit PolylogOrder(int twice) : twice_(twice) {}
  int twice_;
};

/// Complementary error function. Throws DomainError for non-finite x.
double erfc(double x);

/// Li_s(x) = sum_{n>=1} x^n / n^s for x in [0,1].
///
/// Plain series for x <= 0.8, the expansion about x = 1
/// Li_s(e^u) = Gamma(1-s) (-u)^(s-1) + sum_k zeta(s-k) u^k / k! above.
/// Li_{1/2}(1) diverges and raises DomainError, as does x outside [0,1].
double polylog(PolylogOrder s, double x);

/// zeta(3/2), computed once by partial sum plus Euler-Maclaurin tail.
double zeta_three_halves();

namespace detail {
// The two branches of polylog, exposed for cross-checking on their overlap.
double polylog_series(double s, double x);
double polylog_near_one(double s, double x);
// sum_k zeta(s-k) (-u)^k / k!, the part of Li_s(e^{-u}) left after removing Gamma(1-s) u^{s-1}.
double polylog_regular_part(double s, double u);
}  // namespace detail

}  // namespace ginedge::specfun
