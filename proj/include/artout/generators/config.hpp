#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "artout/core/error.hpp"

namespace artout {

enum class Approach {
  unif_box,
  lhs,
  unif_sphere,
  mani_samp,
  dens_aprox,
  gauss_tail,
  inv_hist,
  margin_sample,
  dist_based,
  bound_val,
  skew_based,
  sur_reg,
  infeas_exam,
  neg_shift,
  neg_select,
};

inline constexpr std::array<std::pair<Approach, std::string_view>, 15> kApproachNames{{
    {Approach::unif_box, "unifBox"},
    {Approach::lhs, "lhs"},
    {Approach::unif_sphere, "unifSphere"},
    {Approach::mani_samp, "maniSamp"},
    {Approach::dens_aprox, "densAprox"},
    {Approach::gauss_tail, "gaussTail"},
    {Approach::inv_hist, "invHist"},
    {Approach::margin_sample, "marginSample"},
    {Approach::dist_based, "distBased"},
    {Approach::bound_val, "boundVal"},
    {Approach::skew_based, "skewBased"},
    {Approach::sur_reg, "surReg"},
    {Approach::infeas_exam, "infeasExam"},
    {Approach::neg_shift, "negShift"},
    {Approach::neg_select, "negSelect"},
}};

inline std::string_view to_string(Approach a) {
  for (const auto& [k, name] : kApproachNames)
    if (k == a) return name;
  return "?";
}

inline Approach parse_approach(std::string_view name) {
  for (const auto& [k, n] : kApproachNames)
    if (n == name) return k;
  throw Error("unknown generation approach '" + std::string(name) + "'");
}

// Approaches whose output size is n_art; the rest derive it from the data.
inline bool takes_n_art(Approach a) {
  return a != Approach::neg_shift && a != Approach::dist_based;
}

struct NegSelectParams {
  double radius = 0.1;       // r
  double eta0 = 2.0;
  double tau = 25.0;
  std::size_t max_age = 5;   // t
  std::size_t k = 10;
  std::size_t max_iter = 100;
};

/**
 * Parameters of every approach. Each generator reads only its own fields.
 * n_art = 0 means "as many as there are genuine instances".
 */
struct GeneratorConfig {
  Approach approach = Approach::unif_box;
  std::size_t n_art = 0;
  double bounds_expansion = 0.1;       // unifBox, lhs, negSelect initialization
  std::size_t k = 10;                  // maniSamp
  double epsilon = 0.1;                // surReg
  double alpha = 2.0;                  // skewBased
  std::size_t hist_bins = 10;          // invHist
  double hist_expansion = 0.2;         // invHist
  std::size_t dist_based_runs = 1;
  double enclosing_ball_tol = 1e-3;    // unifSphere

  // infeasExam; epsilon defaults to the median 1-NN distance of the data.
  double infeas_mu = 0.0;
  double infeas_sigma = 1.0;
  double infeas_alpha = 0.05;
  std::optional<double> infeas_epsilon;
  std::size_t infeas_max_proposals = 1'000'000;

  NegSelectParams neg_select;

  std::size_t resolved_n_art(std::size_t n) const { return n_art == 0 ? n : n_art; }
};

}  // namespace artout
