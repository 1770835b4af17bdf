#include "detwidth/weight.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace detwidth {

WeightSymbol WeightSymbol::constant(Support support, double c) {
  if (!(c > 0.0)) throw ParameterError("constant weight must be positive");
  WeightSymbol w(support, WeightForm::constant, c);
  return w;
}

WeightSymbol WeightSymbol::exp_cosh(double t) {
  if (!(t >= 0.0)) throw ParameterError("exp_cosh weight needs T >= 0");
  return WeightSymbol(Support::circle, WeightForm::exp_cosh, t);
}

WeightSymbol WeightSymbol::binom(int t) {
  if (t < 0) throw ParameterError("binom weight needs T >= 0");
  return WeightSymbol(Support::circle, WeightForm::binom, static_cast<double>(t));
}

WeightSymbol WeightSymbol::gaussian(double a) {
  if (!(a > 0.0)) throw ParameterError("gaussian weight needs a > 0");
  return WeightSymbol(Support::line, WeightForm::gaussian, a);
}

WeightSymbol WeightSymbol::laurent(std::vector<cplx> coeffs, int min_power) {
  if (coeffs.empty()) throw ParameterError("laurent weight needs coefficients");
  WeightSymbol w(Support::circle, WeightForm::laurent, 0.0);
  w.coeffs_ = std::move(coeffs);
  w.min_power_ = min_power;
  return w;
}

WeightSymbol WeightSymbol::scaled(double c) const {
  if (!(c > 0.0)) throw ParameterError("weight scale must be positive");
  WeightSymbol w = *this;
  w.scale_ *= c;
  return w;
}

WeightSymbol WeightSymbol::with_factor(const WeightSymbol& b) const {
  if (b.support() != support_) throw ParameterError("factor support differs from weight");
  WeightSymbol w = *this;
  w.factor_ = std::make_shared<const WeightSymbol>(b.base());
  return w;
}

WeightSymbol WeightSymbol::base() const {
  WeightSymbol w = *this;
  w.factor_.reset();
  return w;
}

cplx WeightSymbol::base_value(cplx z) const {
  cplx v;
  switch (form_) {
    case WeightForm::constant:
      v = param_;
      break;
    case WeightForm::exp_cosh:
      v = std::exp(0.5 * param_ * (z + 1.0 / z));
      break;
    case WeightForm::binom: {
      const int t = static_cast<int>(param_);
      // On the circle this is (2 cos(theta/2))^{2T}; keep it real there.
      if (std::abs(std::abs(z) - 1.0) < 1e-15) {
        const double c = 2.0 * std::cos(0.5 * std::arg(z));
        v = std::pow(c * c, t);
      } else {
        v = std::pow(1.0 + z, 2 * t) * std::pow(z, -t);
      }
      break;
    }
    case WeightForm::gaussian:
      v = std::exp(-param_ * z * z);
      break;
    case WeightForm::laurent: {
      cplx acc{0.0, 0.0};
      for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
      v = acc * std::pow(z, min_power_);
      break;
    }
  }
  return scale_ * v;
}

cplx WeightSymbol::factor_value(cplx z) const {
  return factor_ ? factor_->base_value(z) : cplx{1.0, 0.0};
}

int WeightSymbol::laurent_bandwidth() const {
  auto own = [this]() -> int {
    switch (form_) {
      case WeightForm::constant:
        return 0;
      case WeightForm::binom:
        return static_cast<int>(param_);
      case WeightForm::laurent: {
        const int hi = min_power_ + static_cast<int>(coeffs_.size()) - 1;
        return std::max(std::abs(min_power_), std::abs(hi));
      }
      default:
        return -1;
    }
  }();
  if (own < 0 || !factor_) return own;
  const int other = factor_->laurent_bandwidth();
  return other < 0 ? -1 : own + other;
}

namespace {

// I_k(t) by its power series; all terms positive.
double bessel_i(int k, double t) {
  k = std::abs(k);
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;
  const double h = 0.5 * t;
  double term = std::exp(k * std::log(h) - std::lgamma(k + 1.0));
  double sum = 0.0;
  for (int j = 0; j < 1000; ++j) {
    sum += term;
    term *= h * h / ((j + 1.0) * (j + 1.0 + k));
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

cplx WeightSymbol::fourier_coefficient(int k) const {
  if (support_ != Support::circle) throw ParameterError("fourier_coefficient: weight not on circle");
  if (factor_) {
    const int band = factor_->laurent_bandwidth();
    if (band < 0) throw ParameterError("fourier_coefficient: factor must be a Laurent polynomial");
    cplx acc{0.0, 0.0};
    const WeightSymbol own = base();
    for (int j = -band; j <= band; ++j) acc += factor_->fourier_coefficient(j) * own.fourier_coefficient(k - j);
    return acc;
  }
  cplx v{0.0, 0.0};
  switch (form_) {
    case WeightForm::constant:
      v = k == 0 ? param_ : 0.0;
      break;
    case WeightForm::exp_cosh:
      v = bessel_i(k, param_);
      break;
    case WeightForm::binom: {
      const int t = static_cast<int>(param_);
      if (std::abs(k) <= t) {
        double c = 1.0;
        for (int i = 1; i <= t - std::abs(k); ++i) c = c * (t + std::abs(k) + i) / i;
        v = c;
      }
      break;
    }
    case WeightForm::gaussian:
      throw ParameterError("fourier_coefficient: weight not on circle");
    case WeightForm::laurent: {
      const int idx = k - min_power_;
      if (idx >= 0 && idx < static_cast<int>(coeffs_.size())) v = coeffs_[idx];
      break;
    }
  }
  return scale_ * v;
}

std::string WeightSymbol::describe() const {
  std::ostringstream os;
  if (scale_ != 1.0) os << scale_ << "*";
  switch (form_) {
    case WeightForm::constant:
      os << "const(" << param_ << ")";
      break;
    case WeightForm::exp_cosh:
      os << "exp_cosh(" << param_ << ")";
      break;
    case WeightForm::binom:
      os << "binom(" << param_ << ")";
      break;
    case WeightForm::gaussian:
      os << "gaussian(" << param_ << ")";
      break;
    case WeightForm::laurent:
      os << "laurent[" << coeffs_.size() << " terms from z^" << min_power_ << "]";
      break;
  }
  if (factor_) os << "*" << factor_->describe();
  return os.str();
}

}  // namespace detwidth
