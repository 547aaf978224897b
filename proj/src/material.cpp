#include "straintomo/material.hpp"

#include <cmath>

namespace straintomo {

void ElasticConstants::validate() const {
  if (!(E > 0.0) || !std::isfinite(E)) throw ValidationError("E must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw ValidationError("nu must lie in (-1, 0.5)");
}

PlaneMode parse_plane_mode(const std::string& s) {
  if (s == "plane_stress" || s == "stress") return PlaneMode::plane_stress;
  if (s == "plane_strain" || s == "strain") return PlaneMode::plane_strain;
  throw ValidationError("unknown plane mode: " + s);
}

std::string to_string(PlaneMode m) {
  return m == PlaneMode::plane_stress ? "plane_stress" : "plane_strain";
}

std::array<double, 3> stress_from_strain(const ElasticConstants& c, double e11, double e22,
                                         double e12) {
  const double E = c.E;
  const double nu = c.nu;
  if (c.mode == PlaneMode::plane_stress) {
    const double f = E / (1.0 - nu * nu);
    return {f * (e11 + nu * e22), f * (e22 + nu * e11), f * (1.0 - nu) * e12};
  }
  const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return {f * ((1.0 - nu) * e11 + nu * e22), f * ((1.0 - nu) * e22 + nu * e11),
          E / (1.0 + nu) * e12};
}

std::array<double, 3> strain_from_stress(const ElasticConstants& c, double s11, double s22,
                                         double s12) {
  const double E = c.E;
  const double nu = c.nu;
  if (c.mode == PlaneMode::plane_stress) {
    return {(s11 - nu * s22) / E, (s22 - nu * s11) / E, (1.0 + nu) * s12 / E};
  }
  const double f = (1.0 + nu) / E;
  return {f * ((1.0 - nu) * s11 - nu * s22), f * ((1.0 - nu) * s22 - nu * s11), f * s12};
}

namespace {

template <typename Fn>
TensorField2 map_pointwise(const TensorField2& in, Fn&& fn) {
  TensorField2 out(in.grid);
  for (std::size_t k = 0; k < in.c11.size(); ++k) {
    const auto v = fn(in.c11[k], in.c22[k], in.c12[k]);
    out.c11[k] = v[0];
    out.c22[k] = v[1];
    out.c12[k] = v[2];
  }
  return out;
}

}  // namespace

TensorField2 stress_from_strain(const ElasticConstants& c, const TensorField2& strain) {
  return map_pointwise(strain, [&](double a, double b, double s) {
    return stress_from_strain(c, a, b, s);
  });
}

TensorField2 strain_from_stress(const ElasticConstants& c, const TensorField2& stress) {
  return map_pointwise(stress, [&](double a, double b, double s) {
    return strain_from_stress(c, a, b, s);
  });
}

}  // namespace straintomo
