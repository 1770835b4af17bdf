#include "detwidth/airy.hpp"

#include <cmath>

#include "detwidth/error.hpp"

namespace detwidth {

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
constexpr double kSqrt3 = 1.7320508075688772935274463415058723;
constexpr double kPiD = 3.14159265358979323846264338327950288;

AiryValues maclaurin(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;
  // f = sum a_k x^{3k}, g = sum b_k x^{3k+1}
  long double f = 0, fp = 0, g = 0, gp = 0;
  long double a = 1, b = 1;  // a_k, b_k
  long double pw = 1;        // x^{3k}
  for (int k = 0; k < 40; ++k) {
    f += a * pw;
    g += b * pw * x;
    gp += (3 * k + 1) * b * pw;
    if (k > 0) fp += 3 * k * a * pw / x;
    a /= (3.0L * k + 2) * (3.0L * k + 3);
    b /= (3.0L * k + 3) * (3.0L * k + 4);
    pw *= x3;
  }
  if (x == 0) fp = 0;
  AiryValues v;
  v.ai = static_cast<double>(kAi0 * f - kAip0 * g);
  v.aip = static_cast<double>(kAi0 * fp - kAip0 * gp);
  v.bi = static_cast<double>(kSqrt3 * (kAi0 * f + kAip0 * g));
  v.bip = static_cast<double>(kSqrt3 * (kAi0 * fp + kAip0 * gp));
  return v;
}

}  // namespace

AiryValues airy(double x) {
  if (!std::isfinite(x)) throw EvaluationError("airy: non-finite argument");
  if (std::abs(x) <= 1.0) return maclaurin(x);
  AiryValues v;
  if (x > 0.0) {
    const double z = 2.0 / 3.0 * x * std::sqrt(x);
    const double k13 = std::cyl_bessel_k(1.0 / 3.0, z);
    const double k23 = std::cyl_bessel_k(2.0 / 3.0, z);
    v.ai = std::sqrt(x / 3.0) / kPiD * k13;
    v.aip = -x / (kPiD * kSqrt3) * k23;
    // I_{-nu} = I_nu + (2/pi) sin(nu pi) K_nu overflows nothing for the
    // arguments used here; Bi grows like e^z.
    if (z < 700.0) {
      const double i13 = std::cyl_bessel_i(1.0 / 3.0, z);
      const double i23 = std::cyl_bessel_i(2.0 / 3.0, z);
      v.bi = std::sqrt(x / 3.0) * (2.0 * i13 + kSqrt3 / kPiD * k13);
      v.bip = x / kSqrt3 * (2.0 * i23 + kSqrt3 / kPiD * k23);
    } else {
      v.bi = v.bip = HUGE_VAL;
    }
    return v;
  }
  const double y = -x;
  const double z = 2.0 / 3.0 * y * std::sqrt(y);
  const double j13 = std::cyl_bessel_j(1.0 / 3.0, z);
  const double j23 = std::cyl_bessel_j(2.0 / 3.0, z);
  const double y13 = std::cyl_neumann(1.0 / 3.0, z);
  const double y23 = std::cyl_neumann(2.0 / 3.0, z);
  const double jm13 = 0.5 * j13 - 0.5 * kSqrt3 * y13;
  const double jm23 = -0.5 * j23 - 0.5 * kSqrt3 * y23;
  v.ai = std::sqrt(y) / 3.0 * (j13 + jm13);
  v.aip = y / 3.0 * (j23 - jm23);
  v.bi = std::sqrt(y / 3.0) * (jm13 - j13);
  v.bip = y / kSqrt3 * (jm23 + j23);
  return v;
}

double airy_ai(double x) { return airy(x).ai; }
double airy_aip(double x) { return airy(x).aip; }

}  // namespace detwidth
