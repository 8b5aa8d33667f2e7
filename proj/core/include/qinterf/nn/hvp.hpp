#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>

namespace qinterf::nn {

/// Any map theta -> gradient of some scalar loss at theta.
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Central-difference Hessian-vector product
///   (grad(theta + eps v) - grad(theta - eps v)) / (2 eps).
/// Returns nullopt when the result is not finite.
std::optional<Eigen::VectorXd> hvp_fd(const GradientFn& grad, const Eigen::VectorXd& theta, const Eigen::VectorXd& v,
                                      double eps);

/// hvp_fd, retried once with eps / 10 on a non-finite result. Throws
/// DivergenceError if the retry also fails.
Eigen::VectorXd hvp_fd_or_throw(const GradientFn& grad, const Eigen::VectorXd& theta, const Eigen::VectorXd& v,
                                double eps);

}  // namespace qinterf::nn
