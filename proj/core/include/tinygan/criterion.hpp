#pragma once

#include <optional>
#include <string_view>

namespace tinygan {

enum class CriterionKind {
  Linear,    // f(y) = y, the Wasserstein-style objective
  Logistic,  // f(y) = -log(1 + e^-y), the standard saturating objective
};

/// Scalar criterion f defining a concrete adversarial objective.
/// Immutable; all evaluations are pure and thread-safe.
struct Criterion {
  CriterionKind kind = CriterionKind::Linear;

  static Criterion linear() { return {CriterionKind::Linear}; }
  static Criterion logistic() { return {CriterionKind::Logistic}; }

  /// Parses the config-file names "linear" / "logistic".
  static std::optional<Criterion> from_name(std::string_view name);
  std::string_view name() const;

  bool operator==(const Criterion&) const = default;
};

/// f(y). Logistic is evaluated in softplus form, safe for large |y|.
double f_value(Criterion c, double y);

/// f'(y). Linear -> 1; Logistic -> 1/(1 + e^y), overflow-safe.
/// Nonzero for every finite y.
double f_slope(Criterion c, double y);

/// Two-point adversarial loss f(psi*theta) + f(-psi*alpha).
double tiny_gan_loss(Criterion c, double theta, double psi, double alpha);

}  // namespace tinygan
