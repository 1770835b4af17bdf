#pragma once

namespace detwidth {

struct AiryValues {
  double ai;
  double aip;
  double bi;
  double bip;
};

// Ai, Ai', Bi, Bi' at real x. Maclaurin series for |x| <= 1, Bessel-function
// representations (std::cyl_bessel_*) beyond.
AiryValues airy(double x);
double airy_ai(double x);
double airy_aip(double x);

}  // namespace detwidth
