#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "socnav/rng.hpp"
#include "socnav/state.hpp"
#include "socnav/tensor.hpp"

namespace socnav {

/// Largest relative error, over `params`, between the backward-pass gradient
/// of `loss` and central finite differences. Per tensor the error is
/// ||g - g_fd|| / (||g|| + ||g_fd||), or 0 when both vanish.
double gradcheck(const std::function<nn::Tensor()>& loss, const std::vector<nn::Tensor>& params,
                 double eps = 1e-5);

struct GradcheckResult {
  std::string name;
  double max_rel_error = 0.0;
  bool passed = false;
};

/// Checks every layer and op, each loss, and the end-to-end policy loss for
/// all three heads.
std::vector<GradcheckResult> run_gradchecks(double tolerance = 1e-4, std::uint64_t seed = 0);

/// A plausible model input with `n_humans` tracks of random lengths.
ModelState random_model_state(Rng& rng, int n_humans);

}  // namespace socnav
