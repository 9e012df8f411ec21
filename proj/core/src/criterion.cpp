#include "tinygan/criterion.hpp"

#include <cmath>

#include "tinygan/errors.hpp"

namespace tinygan {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string("non-finite ") + what + " passed to criterion");
  }
}

}  // namespace

std::optional<Criterion> Criterion::from_name(std::string_view name) {
  if (name == "linear") return linear();
  if (name == "logistic") return logistic();
  return std::nullopt;
}

std::string_view Criterion::name() const {
  return kind == CriterionKind::Linear ? "linear" : "logistic";
}

double f_value(Criterion c, double y) {
  require_finite(y, "argument");
  switch (c.kind) {
    case CriterionKind::Linear:
      return y;
    case CriterionKind::Logistic:
      // -softplus(-y), split on the sign of y so exp never overflows
      return y < 0.0 ? y - std::log1p(std::exp(y)) : -std::log1p(std::exp(-y));
  }
  throw DomainError("unknown criterion kind");
}

double f_slope(Criterion c, double y) {
  require_finite(y, "argument");
  switch (c.kind) {
    case CriterionKind::Linear:
      return 1.0;
    case CriterionKind::Logistic: {
      // 1/(1 + e^y) in (0, 1), strictly decreasing
      if (y >= 0.0) {
        const double e = std::exp(-y);
        return e / (1.0 + e);
      }
      return 1.0 / (1.0 + std::exp(y));
    }
  }
  throw DomainError("unknown criterion kind");
}

double tiny_gan_loss(Criterion c, double theta, double psi, double alpha) {
  require_finite(theta, "theta");
  require_finite(psi, "psi");
  require_finite(alpha, "alpha");
  return f_value(c, psi * theta) + f_value(c, -psi * alpha);
}

}  // namespace tinygan
