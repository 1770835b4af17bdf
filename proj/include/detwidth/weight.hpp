#pragma once

#include <memory>
#include <string>
#include <vector>

#include "detwidth/numerics.hpp"

namespace detwidth {

enum class Support { circle, line };

enum class WeightForm {
  constant,   // c
  exp_cosh,   // exp((T/2)(z + 1/z))
  binom,      // z^{-T} (1 + z)^{2T}, T a nonnegative integer
  gaussian,   // exp(-a z^2)
  laurent,    // sum_k c_k z^{k + min_power}
};

// A nonnegative weight on the unit circle or the real line, analytic in a
// neighborhood of its support. An optional second factor b multiplies it; the
// full weight is scale * form(z) * b(z).
class WeightSymbol {
 public:
  static WeightSymbol constant(Support support, double c);
  static WeightSymbol exp_cosh(double t);
  static WeightSymbol binom(int t);
  static WeightSymbol gaussian(double a);
  static WeightSymbol laurent(std::vector<cplx> coeffs, int min_power);

  Support support() const noexcept { return support_; }
  WeightForm form() const noexcept { return form_; }
  double parameter() const noexcept { return param_; }
  double scale() const noexcept { return scale_; }
  const std::vector<cplx>& laurent_coeffs() const noexcept { return coeffs_; }
  int laurent_min_power() const noexcept { return min_power_; }

  bool has_factor() const noexcept { return static_cast<bool>(factor_); }
  const WeightSymbol* factor() const noexcept { return factor_.get(); }

  // Copy with the overall constant multiplied by c.
  WeightSymbol scaled(double c) const;
  // Copy carrying `b` as its second factor (replacing any existing one).
  WeightSymbol with_factor(const WeightSymbol& b) const;
  // Copy without the second factor.
  WeightSymbol base() const;

  // scale * form(z), excluding the b factor.
  cplx base_value(cplx z) const;
  // b(z), or 1 when there is no factor.
  cplx factor_value(cplx z) const;
  // The full weight scale * form(z) * b(z).
  cplx operator()(cplx z) const { return base_value(z) * factor_value(z); }

  // Largest exponent magnitude for Laurent-polynomial symbols (binom,
  // laurent, constant); -1 when the symbol is not a Laurent polynomial.
  int laurent_bandwidth() const;

  // Coefficient of z^k in the Laurent expansion on the circle (the full
  // weight, factor included). Exact series for every circle form.
  cplx fourier_coefficient(int k) const;

  std::string describe() const;

 private:
  WeightSymbol(Support s, WeightForm f, double p) : support_(s), form_(f), param_(p) {}

  Support support_;
  WeightForm form_;
  double param_;
  double scale_ = 1.0;
  std::vector<cplx> coeffs_;
  int min_power_ = 0;
  std::shared_ptr<const WeightSymbol> factor_;
};

}  // namespace detwidth
