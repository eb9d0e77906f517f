#pragma once

#include <optional>
#include <string_view>

#include "bcvhelix/bcv_space.hpp"
#include "bcvhelix/bour.hpp"
#include "bcvhelix/numerics.hpp"

namespace bcv {

/// Constants of the CMC first integrals for given (a, H, c).
struct CmcConstants {
  double b = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;  // meaningful only when has_b2
  bool has_b2 = false;
  double b3 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c = 0.0;
  double H = 0.0;
};

CmcConstants cmc_constants(const BcvSpace& space, double a, double H, double c);

enum class CmcCase {
  EuclideanMinimal,
  SpaceFormGeneric,
  CriticalKappa,
  Oscillatory,
  HyperbolicSinh,
  HyperbolicCosh,
};

std::string_view to_string(CmcCase c);

/// Which closed form applies. (a, c) only matter for the hyperbolic
/// sub-branch; a vanishing sub-branch discriminant throws DegenerateFamily.
CmcCase select_case(const BcvSpace& space, double a, double H, double c, double eps = Tolerances{}.case_eps);

/// A closed-form family member: U with analytic U' and U'', the interval
/// where it generates a CMC chart, and its parameters.
struct CmcFamily {
  BourSeed seed;  // seed.u_domain is the family domain
  CmcCase which = CmcCase::EuclideanMinimal;
  CmcConstants constants;
};

/// U for mean curvature H with integration constant c, zero phase.
/// The domain is the interval around u = 0 (else the longest one) inside
/// `window` where U > 0, m^2 U^2 >= a^2, Delta > 0 and the first integral
/// has the sign the equation needs. The default window is two periods for
/// the trigonometric cases, |u| <= 6 / sqrt(-(H^2 + kappa)) for the
/// hyperbolic ones and [-10, 10] otherwise.
CmcFamily cmc_U(const BcvSpace& space, double m, double a, double H, double c, const Tolerances& tol = {},
                std::optional<Interval> window = std::nullopt);

/// The closed form of `which` for arbitrary constants, with no consistency
/// check between the constants and (a, H, c) and no domain search.
MetricProfile cmc_profile(const BcvSpace& space, double m, double a, CmcCase which, const CmcConstants& constants,
                          const Tolerances& tol = {});

struct MinimalFamily {
  BourSeed seed;
  SpaceClass space_class = SpaceClass::Euclidean;
  double c = 0.0;
};

/// The minimal (H = 0) family of the given space written in its own
/// reduced form. ParameterOutOfRange when |c| violates the space's bound.
MinimalFamily minimal_U(const BcvSpace& space, double m, double a, double c, const Tolerances& tol = {},
                        std::optional<Interval> window = std::nullopt);

/// LHS - RHS of the mean curvature equation for the seed at u.
double cmc_residual(const BcvSpace& space, const BourSeed& seed, double H, double u, const Tolerances& tol = {});

/// y from the change of variables minus y from the first integral. At H = 0
/// the family only depends on c^2, so |y| is compared there.
double first_integral_check(const BcvSpace& space, const BourSeed& seed, double H, double c, double u,
                            const Tolerances& tol = {});

/// z'^2 - (-(H^2 + 4 tau^2) z^2 + 2 c1 z + c2) with z = m^2 U^2; kappa = 4 tau^2 only.
double z_equation_residual(const BcvSpace& space, const BourSeed& seed, double H, double c, double u,
                           const Tolerances& tol = {});

/// (sqrt Delta)'^2 - (-(H^2 + kappa) Delta + 2 b1 sqrt Delta + b); kappa != 4 tau^2 only.
double sqrt_delta_residual(const BcvSpace& space, const BourSeed& seed, double H, double c, double u,
                           const Tolerances& tol = {});
double sqrt_delta_residual(const BcvSpace& space, const BourSeed& seed, const CmcConstants& constants, double u,
                           const Tolerances& tol = {});

}  // namespace bcv
