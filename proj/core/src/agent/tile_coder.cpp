#include "qinterf/agent/tile_coder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qinterf::agent {

TileCoder::TileCoder(int tilings, int tiles_per_dim)
    : tilings_(tilings), tiles_per_dim_(tiles_per_dim), grid_(tiles_per_dim + 1), block_size_(tilings * grid_ * grid_) {
  if (tilings < 1 || tiles_per_dim < 1) throw std::invalid_argument("TileCoder: tilings and tiles_per_dim must be >= 1");
}

std::vector<int> TileCoder::active(const Eigen::VectorXd& observation) const {
  if (observation.size() != 3) throw std::invalid_argument("TileCoder: expected a 3-d Two-Room observation");
  const double x = observation[0];
  const double y = observation[1];
  const double room = observation[2];
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0) || (room != 0.0 && room != 1.0)) {
    throw std::invalid_argument("TileCoder: observation outside the Two-Room domain");
  }
  const double width = 1.0 / tiles_per_dim_;
  const int base = block_offset(static_cast<int>(room));
  std::vector<int> out(static_cast<std::size_t>(tilings_));
  for (int t = 0; t < tilings_; ++t) {
    const double offset = width * t / tilings_;
    const int ix = std::min(static_cast<int>(std::floor((x + offset) / width)), grid_ - 1);
    const int iy = std::min(static_cast<int>(std::floor((y + offset) / width)), grid_ - 1);
    out[static_cast<std::size_t>(t)] = base + t * grid_ * grid_ + iy * grid_ + ix;
  }
  return out;
}

}  // namespace qinterf::agent
