#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "raildelay/core/rng.hpp"

namespace raildelay::ml {

enum class Growth : std::uint8_t {
  LevelWise,  // expand every node of a depth before the next depth
  LeafWise,   // always expand the open leaf with the largest gain
};

struct TreeConfig {
  int max_depth = 0;                 // 0 = unbounded
  std::size_t min_samples_leaf = 1;  // >= 1
  std::size_t max_leaves = 0;        // 0 = unbounded
  Growth growth = Growth::LevelWise;

  void validate() const;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // row[feature] <= threshold goes left
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;         // mean target of the node's samples

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

/// Binary regression tree stored as a flat node array, root at index 0.
class RegressionTree {
public:
  RegressionTree() : nodes_(1) {}
  /// Throws std::invalid_argument on dangling children or non-finite leaves.
  explicit RegressionTree(std::vector<TreeNode> nodes);

  template <typename Derived>
  double predict(const Eigen::DenseBase<Derived>& row) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
      const TreeNode& n = nodes_[i];
      i = row(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes_[i].value;
  }
  Eigen::VectorXd predict(const Eigen::MatrixXd& rows) const;

  std::span<const TreeNode> nodes() const { return nodes_; }
  std::size_t leaf_count() const;
  /// Edges on the longest root-to-leaf path.
  int depth() const;
  int max_feature() const;

  bool operator==(const RegressionTree&) const = default;

private:
  std::vector<TreeNode> nodes_;
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;  // decrease in sum of squared errors
  std::size_t left_count = 0;
};

/// Gains closer than this fraction of the node's SSE count as ties; ties go to
/// the lowest feature index, then the smallest threshold.
inline constexpr double kGainTieTolerance = 1e-12;

/// Best variance-reduction split of all rows of (X, y), or nullopt when no
/// split has positive gain.
std::optional<SplitCandidate> best_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         std::size_t min_samples_leaf = 1);

/// Greedy CART regression tree on all rows of X. Candidate thresholds are the
/// midpoints of consecutive distinct sorted values; leaves hold the mean.
/// `feature_fraction` < 1 samples that share of features at every split.
RegressionTree fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const TreeConfig& config, Rng& rng, double feature_fraction = 1.0);

/// Same, on the multiset of rows listed in `sample_rows` (e.g. a bootstrap draw).
RegressionTree fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        std::span<const std::size_t> sample_rows, const TreeConfig& config,
                        Rng& rng, double feature_fraction = 1.0);

} // namespace raildelay::ml
