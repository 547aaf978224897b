// Isotropic linear elasticity on the plane.
#pragma once

#include <array>
#include <string>

#include "straintomo/fields.hpp"

namespace straintomo {

enum class PlaneMode { plane_stress, plane_strain };

struct ElasticConstants {
  double E = 1.0;
  double nu = 0.0;
  PlaneMode mode = PlaneMode::plane_stress;

  /// Throws ValidationError unless E > 0 and -1 < nu < 0.5.
  void validate() const;
};

PlaneMode parse_plane_mode(const std::string& s);
std::string to_string(PlaneMode m);

/// In-plane stiffness applied pointwise: returns (s11, s22, s12) for strain
/// (e11, e22, e12) with tensor (not engineering) shear strain.
std::array<double, 3> stress_from_strain(const ElasticConstants& c, double e11, double e22,
                                         double e12);
std::array<double, 3> strain_from_stress(const ElasticConstants& c, double s11, double s22,
                                         double s12);

TensorField2 stress_from_strain(const ElasticConstants& c, const TensorField2& strain);
TensorField2 strain_from_stress(const ElasticConstants& c, const TensorField2& stress);

}  // namespace straintomo
