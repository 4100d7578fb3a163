#pragma once

#include <optional>
#include <string>

#include "varprin/functional.hpp"

namespace varprin {

/// Direction in which a heuristic estimate may err.
enum class EstimateDirection { exact, upper, lower };

std::string to_string(EstimateDirection d);

struct CriticalPointRecord {
  enum class Kind { sublevel_global, local_min, global_min, fixed_point };

  Vec x;
  double phi_val = 0.0;
  double psi_val = 0.0;
  double lambda = 0.0;
  /// Norm of the (box-projected) gradient of Phi + lambda*Psi; empty when the
  /// oracles expose no gradient.
  std::optional<double> grad_norm;
  Kind kind = Kind::sublevel_global;

  double value() const { return phi_val + lambda * psi_val; }
};

std::string to_string(CriticalPointRecord::Kind k);

}  // namespace varprin
