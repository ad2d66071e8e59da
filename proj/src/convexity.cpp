#include "ergolab/convexity.hpp"

#include "ergolab/errors.hpp"

#include <cmath>
#include <sstream>

namespace ergolab {

namespace {

void require_eps(double eps, const char* who) {
  if (!(eps > 0.0 && eps <= 2.0))
    throw DomainError(std::string(who) + ": eps must lie in (0, 2], got " + std::to_string(eps));
}

}  // namespace

double u_from_delta(const std::function<double(double)>& delta, double eps) {
  require_eps(eps, "u_from_delta");
  return eps / 2.0 * delta(eps);
}

double hanner_delta(double p, double eps) {
  if (!(p >= 2.0)) throw DomainError("hanner modulus needs p >= 2; use the small-p modulus for 1 < p < 2");
  require_eps(eps, "hanner_delta");
  return 1.0 - std::pow(1.0 - std::pow(eps / 2.0, p), 1.0 / p);
}

double hanner_u(double p, double eps) {
  if (!(p >= 2.0)) throw DomainError("hanner modulus needs p >= 2; use the small-p modulus for 1 < p < 2");
  return u_from_delta([p](double e) { return hanner_delta(p, e); }, eps);
}

double p_uniform_u(double K, double p, double eps) {
  if (!(K > 0.0)) throw DomainError("p-uniform modulus needs K > 0");
  require_eps(eps, "p_uniform_u");
  return K * std::pow(eps, p + 1.0);
}

double lp_small_p_delta(double p, double eps) {
  if (!(p > 1.0 && p < 2.0)) throw DomainError("small-p modulus needs 1 < p < 2");
  require_eps(eps, "lp_small_p_delta");
  return (p - 1.0) * eps * eps / 8.0;
}

double lp_small_p_u(double p, double eps) {
  if (!(p > 1.0 && p < 2.0)) throw DomainError("small-p modulus needs 1 < p < 2");
  return u_from_delta([p](double e) { return lp_small_p_delta(p, e); }, eps);
}

ConvexityModulus ConvexityModulus::hanner(double p) {
  if (!(p >= 2.0)) throw DomainError("hanner modulus needs p >= 2; use the small-p modulus for 1 < p < 2");
  return ConvexityModulus(ModulusType::kHanner, p, 0.0);
}

ConvexityModulus ConvexityModulus::p_uniform(double K, double p) {
  if (!(K > 0.0)) throw DomainError("p-uniform modulus needs K > 0");
  return ConvexityModulus(ModulusType::kPUniform, p, K);
}

ConvexityModulus ConvexityModulus::small_p(double p) {
  if (!(p > 1.0 && p < 2.0)) throw DomainError("small-p modulus needs 1 < p < 2");
  return ConvexityModulus(ModulusType::kSmallP, p, 0.0);
}

ConvexityModulus ConvexityModulus::from_delta(std::function<double(double)> delta, std::string label) {
  ConvexityModulus m(ModulusType::kFromDelta, 0.0, 0.0);
  m.delta_ = std::move(delta);
  m.label_ = std::move(label);
  return m;
}

ConvexityModulus ConvexityModulus::for_lp(double p) {
  if (p >= 2.0) return hanner(p);
  return small_p(p);
}

std::string ConvexityModulus::name() const {
  std::ostringstream out;
  switch (type_) {
    case ModulusType::kHanner: out << "hanner(p=" << p_ << ")"; break;
    case ModulusType::kPUniform: out << "p-uniform(K=" << K_ << ",p=" << p_ << ")"; break;
    case ModulusType::kSmallP: out << "small-p(p=" << p_ << ")"; break;
    case ModulusType::kFromDelta: out << label_; break;
  }
  return out.str();
}

double ConvexityModulus::operator()(double eps) const {
  switch (type_) {
    case ModulusType::kHanner: return hanner_u(p_, eps);
    case ModulusType::kPUniform: return p_uniform_u(K_, p_, eps);
    case ModulusType::kSmallP: return lp_small_p_u(p_, eps);
    case ModulusType::kFromDelta: return u_from_delta(delta_, eps);
  }
  return 0.0;
}

}  // namespace ergolab
