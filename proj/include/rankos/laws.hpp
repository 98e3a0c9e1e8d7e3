#pragma once

#include <string>

#include "rankos/rng.hpp"

namespace rankos {

// Error distributions supported by the power/efficiency laboratory:
// centered, with density f, distribution F, and the distribution H of the
// difference of two independent draws. h(0) = integral of f^2 (the
// convolution identity), which is the noncentrality scale of the rank test.
class ErrorLaw {
 public:
  enum class Kind { normal, uniform, logistic, laplace, student_t };

  static ErrorLaw normal(double sigma = 1.0);
  static ErrorLaw uniform(double a = 0.0, double b = 1.0);
  static ErrorLaw logistic(double s = 1.0);
  static ErrorLaw laplace(double b = 1.0);
  static ErrorLaw student_t(unsigned k);

  // Parses "normal[:sigma]", "uniform[:a:b]", "logistic[:s]", "laplace[:b]",
  // "t:k".
  static ErrorLaw parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::string name() const;

  double pdf(double x) const;
  double cdf(double x) const;

  // Var of one draw; throws UnsupportedLawError when infinite (t with k<=2).
  double variance() const;
  bool has_four_moments() const;

  // Integral of f^2 in closed form (up to gamma-function evaluation).
  double f_sq_integral() const;

  // Density of the difference of two independent draws, at zero.
  double h0() const { return f_sq_integral(); }

  // H(d) = P(eps1 - eps2 <= d): closed form where one exists, otherwise
  // adaptive quadrature of the convolution.
  double difference_cdf(double d) const;

  double sample(Rng& rng) const;

  unsigned t_dof() const { return t_dof_; }

 private:
  ErrorLaw(Kind kind, double p1, double p2, unsigned dof)
      : kind_(kind), p1_(p1), p2_(p2), t_dof_(dof) {}

  Kind kind_;
  double p1_ = 0.0;  // sigma | a | s | b
  double p2_ = 0.0;  // b (uniform)
  unsigned t_dof_ = 0;
};

}  // namespace rankos
