#pragma once

#include "artout/generators/config.hpp"
#include "artout/generators/instance_values.hpp"
#include "artout/generators/negative_selection.hpp"
#include "artout/generators/sampling.hpp"
#include "artout/generators/shifting.hpp"

namespace artout {

// Runs the approach named in `cfg` on `data` (treated as genuine normals).
inline Dataset generate(const Dataset& data, const GeneratorConfig& cfg, RngStream rng,
                        GenerationLog* log = nullptr) {
  switch (cfg.approach) {
    case Approach::unif_box: return gen_unif_box(data, cfg, rng);
    case Approach::lhs: return gen_lhs(data, cfg, rng);
    case Approach::unif_sphere: return gen_unif_sphere(data, cfg, rng);
    case Approach::mani_samp: return gen_mani_samp(data, cfg, rng);
    case Approach::dens_aprox: return gen_dens_aprox(data, cfg, rng);
    case Approach::gauss_tail: return gen_gauss_tail(data, cfg, rng);
    case Approach::inv_hist: return gen_inv_hist(data, cfg, rng);
    case Approach::margin_sample: return gen_margin_sample(data, cfg, rng);
    case Approach::dist_based: return gen_dist_based(data, cfg, rng, log);
    case Approach::bound_val: return gen_bound_val(data, cfg, rng);
    case Approach::skew_based: return gen_skew_based(data, cfg, rng);
    case Approach::sur_reg: return gen_sur_reg(data, cfg, rng);
    case Approach::infeas_exam: return gen_infeas_exam(data, cfg, rng);
    case Approach::neg_shift: return gen_neg_shift(data, cfg, rng);
    case Approach::neg_select: return gen_neg_select(data, cfg, rng);
  }
  throw Error("unhandled approach");
}

inline GeneratorConfig default_config(Approach a) {
  GeneratorConfig cfg;
  cfg.approach = a;
  return cfg;
}

}  // namespace artout
