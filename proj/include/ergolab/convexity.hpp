#pragma once

#include <functional>
#include <string>

namespace ergolab {

// Moduli u(eps) of uniform convexity in the "midpoint drops below the longer
// vector" convention: ||x|| <= ||y|| <= 1, ||x - y|| >= eps implies
// ||(x + y)/2|| <= ||y|| - u(eps). A Clarkson-style modulus delta(eps)
// converts via u = (eps/2) delta.

// (eps/2) * delta(eps), eps in (0, 2].
double u_from_delta(const std::function<double(double)>& delta, double eps);

// Hanner's sharp delta for L^p, p >= 2: 1 - (1 - (eps/2)^p)^(1/p).
double hanner_delta(double p, double eps);
double hanner_u(double p, double eps);

// K eps^(p+1).
double p_uniform_u(double K, double p, double eps);

// Non-sharp modulus for L^p, 1 < p < 2, from delta(eps) = (p - 1) eps^2 / 8.
double lp_small_p_delta(double p, double eps);
double lp_small_p_u(double p, double eps);

enum class ModulusType { kHanner, kPUniform, kFromDelta, kSmallP };

class ConvexityModulus {
 public:
  static ConvexityModulus hanner(double p);
  static ConvexityModulus p_uniform(double K, double p);
  static ConvexityModulus small_p(double p);
  static ConvexityModulus from_delta(std::function<double(double)> delta, std::string label = "from-delta");
  // Hanner for p >= 2, the small-p modulus for 1 < p < 2.
  static ConvexityModulus for_lp(double p);

  ModulusType type() const noexcept { return type_; }
  double p() const noexcept { return p_; }
  double K() const noexcept { return K_; }
  std::string name() const;
  // False for the small-p modulus, which is valid but not sharp.
  bool sharp() const noexcept { return type_ != ModulusType::kSmallP; }

  double operator()(double eps) const;

 private:
  ConvexityModulus(ModulusType type, double p, double K) : type_(type), p_(p), K_(K) {}

  ModulusType type_;
  double p_ = 2;
  double K_ = 0;
  std::function<double(double)> delta_;
  std::string label_;
};

}  // namespace ergolab
