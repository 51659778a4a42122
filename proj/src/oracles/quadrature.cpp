#include <boost/math/quadrature/exp_sinh.hpp>

#include "aoi/oracles.hpp"

namespace aoi::oracle {

double integrate_half_line(const std::function<double(double)>& g) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(g, 0.0, std::numeric_limits<double>::infinity());
}

double overlap_by_quadrature(const std::function<double(double)>& density, double lambda1) {
  boost::math::quadrature::exp_sinh<double> outer;
  const auto inner = [&density](double x) {
    boost::math::quadrature::exp_sinh<double> integrator;
    // t = x + u, u in [0, inf)
    return integrator.integrate([&](double u) { return u * density(x + u); }, 0.0,
                                std::numeric_limits<double>::infinity());
  };
  return outer.integrate(
      [&](double x) { return x * lambda1 * std::exp(-lambda1 * x) * inner(x); }, 0.0,
      std::numeric_limits<double>::infinity());
}

}  // namespace aoi::oracle
