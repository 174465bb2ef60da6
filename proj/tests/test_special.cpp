// Modified Bessel function I_nu: pinned reference values, the log-scale
// variant, and order conventions.

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "bmc/special.hpp"

TEST_SUITE("special") {

TEST_CASE("values at zero argument") {
  CHECK(bmc::modified_bessel_i(0.0, 0.0) == 1.0);
  CHECK(bmc::modified_bessel_i(1.0, 0.0) == 0.0);
  CHECK(bmc::modified_bessel_i(2.5, 0.0) == 0.0);
}

TEST_CASE("I_1(1) against a truncated power-series value") {
  CHECK(bmc::modified_bessel_i(1.0, 1.0) == doctest::Approx(0.5651591039924850).epsilon(1e-12));
}

TEST_CASE("reference values, series regime (z <= 30)") {
  // Independently computed to full double precision before the build.
  CHECK(bmc::modified_bessel_i(0.0, 0.5) ==
        doctest::Approx(1.0634833707413235).epsilon(1e-12));
  CHECK(bmc::modified_bessel_i(1.0, 2.0) ==
        doctest::Approx(1.5906368546373290).epsilon(1e-12));
  CHECK(bmc::modified_bessel_i(2.0, 5.0) ==
        doctest::Approx(17.505614966624236).epsilon(1e-12));
  CHECK(bmc::modified_bessel_i(0.5, 1.0) ==
        doctest::Approx(0.93767488824548765).epsilon(1e-12));
}

TEST_CASE("reference values, large-argument regime (z > 30)") {
  CHECK(bmc::modified_bessel_i(0.0, 35.0) ==
        doctest::Approx(1.0733881849451406e14).epsilon(1e-10));
  CHECK(bmc::modified_bessel_i(1.0, 35.0) ==
        doctest::Approx(1.0579412605189627e14).epsilon(1e-10));
  CHECK(bmc::modified_bessel_i(3.0, 50.0) ==
        doctest::Approx(2.6777641388839413e20).epsilon(1e-10));
}

TEST_CASE("negative integer orders mirror positive ones") {
  CHECK(bmc::modified_bessel_i(-1.0, 2.0) == bmc::modified_bessel_i(1.0, 2.0));
  CHECK(bmc::modified_bessel_i(-2.0, 0.7) == bmc::modified_bessel_i(2.0, 0.7));
}

TEST_CASE("negative non-integer order is rejected") {
  CHECK_THROWS_AS(bmc::modified_bessel_i(-0.5, 1.0), std::domain_error);
}

TEST_CASE("log variant is consistent and finite where I overflows") {
  for (double z : {0.5, 5.0, 29.0, 40.0, 100.0}) {
    double direct = std::log(bmc::modified_bessel_i(0.0, z));
    CHECK(bmc::log_modified_bessel_i(0.0, z) == doctest::Approx(direct).epsilon(1e-12));
  }
  // I_0(800) overflows a double; log I_0(z) ~ z - log sqrt(2 pi z).
  double lv = bmc::log_modified_bessel_i(0.0, 800.0);
  CHECK(std::isfinite(lv));
  CHECK(lv == doctest::Approx(800.0 - 0.5 * std::log(2.0 * M_PI * 800.0)).epsilon(1e-3));
}

TEST_CASE("monotone increasing in z for fixed order") {
  double prev = 0.0;
  for (double z = 0.25; z < 60.0; z += 0.25) {
    double v = bmc::modified_bessel_i(2.0, z);
    CHECK(v > prev);
    prev = v;
  }
}

}  // TEST_SUITE
