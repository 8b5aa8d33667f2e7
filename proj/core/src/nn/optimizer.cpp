#include "qinterf/nn/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qinterf/errors.hpp"

namespace qinterf::nn {

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "adam") return OptimizerKind::adam;
  if (name == "rmsprop") return OptimizerKind::rmsprop;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "' (expected sgd|adam|rmsprop)");
}

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::adam: return "adam";
    case OptimizerKind::rmsprop: return "rmsprop";
  }
  return "?";
}

OptimizerState OptimizerState::make(OptimizerKind kind, double step_size, Eigen::Index param_count) {
  if (!(step_size >= 0.0) || !std::isfinite(step_size)) {
    throw std::invalid_argument("optimizer step size must be finite and >= 0");
  }
  OptimizerState s;
  s.kind = kind;
  s.step_size = step_size;
  if (kind == OptimizerKind::adam) s.first_moment = Eigen::VectorXd::Zero(param_count);
  if (kind != OptimizerKind::sgd) s.second_moment = Eigen::VectorXd::Zero(param_count);
  return s;
}

void optimizer_step(OptimizerState& opt, NetworkParams& params, const Eigen::VectorXd& direction) {
  if (direction.size() != params.size()) {
    throw std::invalid_argument("optimizer_step: direction length " + std::to_string(direction.size()) +
                                " != parameter count " + std::to_string(params.size()));
  }
  if (!direction.allFinite()) {
    throw DivergenceError("optimizer_step: non-finite update direction at step " + std::to_string(opt.steps));
  }
  const double alpha = opt.step_size;
  Eigen::VectorXd next;
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  switch (opt.kind) {
    case OptimizerKind::sgd:
      next = params.flat() + alpha * direction;
      break;
    case OptimizerKind::adam: {
      m = kAdamBeta1 * opt.first_moment + (1.0 - kAdamBeta1) * direction;
      v = kAdamBeta2 * opt.second_moment + (1.0 - kAdamBeta2) * direction.cwiseAbs2();
      const double t = static_cast<double>(opt.steps + 1);
      const double c1 = 1.0 - std::pow(kAdamBeta1, t);
      const double c2 = 1.0 - std::pow(kAdamBeta2, t);
      next = params.flat().array() + alpha * (m.array() / c1) / ((v.array() / c2).sqrt() + kAdamEps);
      break;
    }
    case OptimizerKind::rmsprop:
      v = kRmspropDecay * opt.second_moment + (1.0 - kRmspropDecay) * direction.cwiseAbs2();
      next = params.flat().array() + alpha * direction.array() / (v.array().sqrt() + kRmspropEps);
      break;
  }
  if (!next.allFinite()) {
    throw DivergenceError("optimizer_step: parameters became non-finite at step " + std::to_string(opt.steps));
  }
  params.flat() = std::move(next);
  if (m.size() > 0) opt.first_moment = std::move(m);
  if (v.size() > 0) opt.second_moment = std::move(v);
  ++opt.steps;
}

}  // namespace qinterf::nn
