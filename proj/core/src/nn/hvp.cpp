#include "qinterf/nn/hvp.hpp"

#include <stdexcept>

#include "qinterf/errors.hpp"

namespace qinterf::nn {

std::optional<Eigen::VectorXd> hvp_fd(const GradientFn& grad, const Eigen::VectorXd& theta, const Eigen::VectorXd& v,
                                      double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("hvp_fd: eps must be > 0");
  if (v.size() != theta.size()) throw std::invalid_argument("hvp_fd: v and theta differ in length");
  if (!v.allFinite()) throw std::invalid_argument("hvp_fd: v must be finite");
  const Eigen::VectorXd plus = grad(theta + eps * v);
  const Eigen::VectorXd minus = grad(theta - eps * v);
  Eigen::VectorXd out = (plus - minus) / (2.0 * eps);
  if (!out.allFinite()) return std::nullopt;
  return out;
}

Eigen::VectorXd hvp_fd_or_throw(const GradientFn& grad, const Eigen::VectorXd& theta, const Eigen::VectorXd& v,
                                double eps) {
  if (auto hv = hvp_fd(grad, theta, v, eps)) return *std::move(hv);
  if (auto hv = hvp_fd(grad, theta, v, eps / 10.0)) return *std::move(hv);
  throw DivergenceError("hvp_fd: non-finite Hessian-vector product");
}

}  // namespace qinterf::nn
