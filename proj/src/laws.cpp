#include "rankos/laws.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rankos/errors.hpp"
#include "rankos/special.hpp"

namespace rankos {

using special::pi;

ErrorLaw ErrorLaw::normal(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal: sigma > 0 required");
  return ErrorLaw(Kind::normal, sigma, 0.0, 0);
}

ErrorLaw ErrorLaw::uniform(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("uniform: need b > a");
  return ErrorLaw(Kind::uniform, a, b, 0);
}

ErrorLaw ErrorLaw::logistic(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("logistic: s > 0 required");
  return ErrorLaw(Kind::logistic, s, 0.0, 0);
}

ErrorLaw ErrorLaw::laplace(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("laplace: b > 0 required");
  return ErrorLaw(Kind::laplace, b, 0.0, 0);
}

ErrorLaw ErrorLaw::student_t(unsigned k) {
  if (k < 1) throw std::invalid_argument("student_t: k >= 1 required");
  return ErrorLaw(Kind::student_t, 0.0, 0.0, k);
}

ErrorLaw ErrorLaw::parse(const std::string& text) {
  std::stringstream ss(text);
  std::string head;
  std::getline(ss, head, ':');
  std::vector<double> args;
  std::string tok;
  while (std::getline(ss, tok, ':')) args.push_back(std::stod(tok));

  if (head == "normal")
    return normal(args.empty() ? 1.0 : args[0]);
  if (head == "uniform") {
    if (args.empty()) return uniform(0.0, 1.0);
    if (args.size() == 2) return uniform(args[0], args[1]);
    throw std::invalid_argument("uniform takes zero or two parameters");
  }
  if (head == "logistic") return logistic(args.empty() ? 1.0 : args[0]);
  if (head == "laplace") return laplace(args.empty() ? 1.0 : args[0]);
  if (head == "t") {
    if (args.size() != 1)
      throw std::invalid_argument("t law needs degrees of freedom, e.g. t:5");
    return student_t(static_cast<unsigned>(args[0]));
  }
  throw UnsupportedLawError("unknown error law: " + text);
}

std::string ErrorLaw::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::normal: os << "normal:" << p1_; break;
    case Kind::uniform: os << "uniform:" << p1_ << ":" << p2_; break;
    case Kind::logistic: os << "logistic:" << p1_; break;
    case Kind::laplace: os << "laplace:" << p1_; break;
    case Kind::student_t: os << "t:" << t_dof_; break;
  }
  return os.str();
}

double ErrorLaw::pdf(double x) const {
  switch (kind_) {
    case Kind::normal:
      return std::exp(-0.5 * x * x / (p1_ * p1_)) / (p1_ * std::sqrt(2.0 * pi));
    case Kind::uniform:
      return (x >= p1_ && x <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
    case Kind::logistic: {
      double e = std::exp(-std::fabs(x) / p1_);
      double d = 1.0 + e;
      return e / (p1_ * d * d);
    }
    case Kind::laplace:
      return std::exp(-std::fabs(x) / p1_) / (2.0 * p1_);
    case Kind::student_t: {
      double k = t_dof_;
      double lc = std::lgamma(0.5 * (k + 1.0)) - std::lgamma(0.5 * k) -
                  0.5 * std::log(k * pi);
      return std::exp(lc - 0.5 * (k + 1.0) * std::log1p(x * x / k));
    }
  }
  return 0.0;
}

double ErrorLaw::cdf(double x) const {
  switch (kind_) {
    case Kind::normal:
      return special::normal_cdf(x / p1_);
    case Kind::uniform:
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) / (p2_ - p1_);
    case Kind::logistic:
      return 1.0 / (1.0 + std::exp(-x / p1_));
    case Kind::laplace:
      return (x < 0.0) ? 0.5 * std::exp(x / p1_)
                       : 1.0 - 0.5 * std::exp(-x / p1_);
    case Kind::student_t:
      return special::student_t_cdf(x, static_cast<double>(t_dof_));
  }
  return 0.0;
}

double ErrorLaw::variance() const {
  switch (kind_) {
    case Kind::normal: return p1_ * p1_;
    case Kind::uniform: {
      double w = p2_ - p1_;
      return w * w / 12.0;
    }
    case Kind::logistic: return pi * pi * p1_ * p1_ / 3.0;
    case Kind::laplace: return 2.0 * p1_ * p1_;
    case Kind::student_t:
      if (t_dof_ <= 2)
        throw UnsupportedLawError("t with k <= 2 has no finite variance");
      return static_cast<double>(t_dof_) / (t_dof_ - 2.0);
  }
  return 0.0;
}

bool ErrorLaw::has_four_moments() const {
  if (kind_ == Kind::student_t) return t_dof_ >= 5;
  return true;
}

double ErrorLaw::f_sq_integral() const {
  switch (kind_) {
    case Kind::normal: return 1.0 / (2.0 * p1_ * std::sqrt(pi));
    case Kind::uniform: return 1.0 / (p2_ - p1_);
    case Kind::logistic: return 1.0 / (6.0 * p1_);
    case Kind::laplace: return 1.0 / (4.0 * p1_);
    case Kind::student_t: {
      double k = t_dof_;
      double lg = 2.0 * std::lgamma(0.5 * (k + 1.0)) + std::lgamma(k + 0.5) -
                  0.5 * std::log(k * pi) - 2.0 * std::lgamma(0.5 * k) -
                  std::lgamma(k + 1.0);
      return std::exp(lg);
    }
  }
  return 0.0;
}

double ErrorLaw::difference_cdf(double d) const {
  switch (kind_) {
    case Kind::normal:
      return special::normal_cdf(d / (p1_ * std::sqrt(2.0)));
    case Kind::uniform: {
      // triangular on [-w, w]
      double w = p2_ - p1_;
      if (d <= -w) return 0.0;
      if (d >= w) return 1.0;
      if (d <= 0.0) {
        double t = d + w;
        return t * t / (2.0 * w * w);
      }
      double t = w - d;
      return 1.0 - t * t / (2.0 * w * w);
    }
    case Kind::laplace: {
      // difference density (1 + |x|/b) e^{-|x|/b} / (4b)
      double b = p1_;
      double ad = std::fabs(d);
      double upper = std::exp(-ad / b) * (2.0 * b + ad) / (4.0 * b);
      return (d >= 0.0) ? 1.0 - upper : upper;
    }
    case Kind::logistic:
    case Kind::student_t: {
      // H(d) = E F(d + eps); integrate the convolution numerically
      double v = special::integrate_real_line(
          [this, d](double y) { return cdf(d + y) * pdf(y); }, 1e-11);
      if (v < 0.0) v = 0.0;
      if (v > 1.0) v = 1.0;
      return v;
    }
  }
  return 0.0;
}

double ErrorLaw::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::normal:
      return p1_ * rng.normal();
    case Kind::uniform:
      return p1_ + (p2_ - p1_) * rng.uniform01();
    case Kind::logistic: {
      double u = rng.uniform01_open();
      return p1_ * std::log(u / (1.0 - u));
    }
    case Kind::laplace: {
      double u = rng.uniform01_open();
      return (u < 0.5) ? p1_ * std::log(2.0 * u)
                       : -p1_ * std::log(2.0 * (1.0 - u));
    }
    case Kind::student_t: {
      double z = rng.normal();
      double v = 0.0;
      for (unsigned i = 0; i < t_dof_; ++i) {
        double w = rng.normal();
        v += w * w;
      }
      return z / std::sqrt(v / static_cast<double>(t_dof_));
    }
  }
  return 0.0;
}

}  // namespace rankos
