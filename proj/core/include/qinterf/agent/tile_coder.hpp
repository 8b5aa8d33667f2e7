#pragma once

#include <Eigen/Core>

#include <vector>

namespace qinterf::agent {

/// Tile coding for Two-Room observations (x/19, y/19, room). Each room owns a
/// disjoint block of features, so the two rooms never share a weight. Within
/// a room, `tilings` grids of width 1/tiles_per_dim are offset by
/// width/tilings from each other along both axes.
class TileCoder {
 public:
  TileCoder(int tilings, int tiles_per_dim);

  /// Exactly `tilings` active indices, one per tiling, all inside the block of
  /// the observation's room. Throws std::invalid_argument for observations
  /// that are not Two-Room observations.
  [[nodiscard]] std::vector<int> active(const Eigen::VectorXd& observation) const;

  [[nodiscard]] int tilings() const { return tilings_; }
  [[nodiscard]] int tiles_per_dim() const { return tiles_per_dim_; }
  [[nodiscard]] int block_size() const { return block_size_; }
  [[nodiscard]] int feature_count() const { return 2 * block_size_; }
  /// First feature index of `room`'s block.
  [[nodiscard]] int block_offset(int room) const { return room * block_size_; }

 private:
  int tilings_;
  int tiles_per_dim_;
  int grid_;  // tiles per axis including the spill-over tile
  int block_size_;
};

}  // namespace qinterf::agent
