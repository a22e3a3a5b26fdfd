#include "raildelay/ml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "raildelay/core/error.hpp"

namespace raildelay::ml {

void TreeConfig::validate() const {
  if (min_samples_leaf < 1) throw InputError("min_samples_leaf must be >= 1");
  if (max_depth < 0) throw InputError("max_depth must be >= 0");
}

RegressionTree::RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("tree has no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    if (n.is_leaf()) {
      if (!std::isfinite(n.value)) throw std::invalid_argument("non-finite leaf value");
      continue;
    }
    // Children are always created after their parent.
    if (n.left <= i || n.right <= i || n.left >= nodes_.size() || n.right >= nodes_.size())
      throw std::invalid_argument("tree node has invalid children");
    if (!std::isfinite(n.threshold)) throw std::invalid_argument("non-finite threshold");
  }
}

Eigen::VectorXd RegressionTree::predict(const Eigen::MatrixXd& rows) const {
  Eigen::VectorXd out(rows.rows());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) out(r) = predict(rows.row(r));
  return out;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(std::ranges::count_if(nodes_, &TreeNode::is_leaf));
}

int RegressionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) d[nodes_[i].left] = d[nodes_[i].right] = d[i] + 1;
  }
  return deepest;
}

int RegressionTree::max_feature() const {
  int f = -1;
  for (const auto& n : nodes_) f = std::max(f, n.feature);
  return f;
}

namespace {

struct Entry {
  double x;
  std::uint32_t pos;  // index into the builder's sample arrays
};

struct OpenNode {
  std::uint32_t id = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  int depth = 0;
  std::optional<SplitCandidate> split;
};

/// Presorted exact split search. Every node owns the same contiguous range in
/// each feature's sorted array; splitting stably partitions that range.
class TreeBuilder {
public:
  TreeBuilder(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              std::span<const std::size_t> rows, const TreeConfig& config, Rng& rng,
              double feature_fraction)
      : config_(config), rng_(rng), n_features_(static_cast<std::size_t>(X.cols())),
        feature_fraction_(feature_fraction) {
    const std::size_t n = rows.size();
    y_.resize(n);
    for (std::size_t p = 0; p < n; ++p) y_[p] = y(static_cast<Eigen::Index>(rows[p]));
    sorted_.resize(n_features_);
    for (std::size_t f = 0; f < n_features_; ++f) {
      auto& col = sorted_[f];
      col.resize(n);
      for (std::size_t p = 0; p < n; ++p)
        col[p] = {X(static_cast<Eigen::Index>(rows[p]), static_cast<Eigen::Index>(f)),
                  static_cast<std::uint32_t>(p)};
      std::ranges::stable_sort(col, {}, &Entry::x);
    }
    goes_left_.resize(n);
    scratch_.resize(n);
    all_features_.resize(n_features_);
    std::iota(all_features_.begin(), all_features_.end(), 0);
  }

  RegressionTree build() {
    OpenNode root = make_node(0, y_.size(), 0);
    std::size_t leaves = 1;
    const auto can_grow = [&] { return config_.max_leaves == 0 || leaves < config_.max_leaves; };

    if (config_.growth == Growth::LevelWise) {
      std::deque<OpenNode> queue{root};
      while (!queue.empty() && can_grow()) {
        OpenNode node = queue.front();
        queue.pop_front();
        if (!node.split) continue;
        auto [l, r] = split(node);
        ++leaves;
        queue.push_back(std::move(l));
        queue.push_back(std::move(r));
      }
    } else {
      const auto worse = [](const OpenNode& a, const OpenNode& b) {
        if (a.split->gain != b.split->gain) return a.split->gain < b.split->gain;
        return a.id > b.id;
      };
      std::priority_queue<OpenNode, std::vector<OpenNode>, decltype(worse)> heap(worse);
      if (root.split) heap.push(root);
      while (!heap.empty() && can_grow()) {
        OpenNode node = heap.top();
        heap.pop();
        auto [l, r] = split(node);
        ++leaves;
        if (l.split) heap.push(std::move(l));
        if (r.split) heap.push(std::move(r));
      }
    }
    return RegressionTree(std::move(nodes_));
  }

  std::optional<SplitCandidate> root_split() {
    double sum = 0.0;
    for (const Entry& e : sorted_[0]) sum += y_[e.pos];
    return find_split(0, y_.size(), sum / static_cast<double>(y_.size()));
  }

private:
  OpenNode make_node(std::size_t begin, std::size_t end, int depth) {
    OpenNode node;
    node.id = static_cast<std::uint32_t>(nodes_.size());
    node.begin = begin;
    node.end = end;
    node.depth = depth;
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += y_[sorted_[0][i].pos];
    TreeNode leaf;
    leaf.value = sum / static_cast<double>(end - begin);
    nodes_.push_back(leaf);
    if (config_.max_depth == 0 || depth < config_.max_depth)
      node.split = find_split(begin, end, leaf.value);
    return node;
  }

  std::span<const std::size_t> candidate_features() {
    if (feature_fraction_ >= 1.0) return all_features_;
    const auto k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(feature_fraction_ * static_cast<double>(n_features_))));
    subset_ = all_features_;
    std::shuffle(subset_.begin(), subset_.end(), rng_);
    subset_.resize(std::min(k, n_features_));
    std::ranges::sort(subset_);
    return subset_;
  }

  std::optional<SplitCandidate> find_split(std::size_t begin, std::size_t end, double mean) {
    const std::size_t n = end - begin;
    const std::size_t min_leaf = config_.min_samples_leaf;
    if (n < 2 * min_leaf) return std::nullopt;

    // Centre targets on the node mean to keep the gain arithmetic well conditioned.
    double total = 0.0;
    double sse = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double c = y_[sorted_[0][i].pos] - mean;
      total += c;
      sse += c * c;
    }
    if (!(sse > 0.0)) return std::nullopt;
    const double tolerance = kGainTieTolerance * sse;
    const double dn = static_cast<double>(n);
    const double parent = total * total / dn;

    std::optional<SplitCandidate> best;
    double best_gain = 0.0;
    for (std::size_t f : candidate_features()) {
      const auto& col = sorted_[f];
      double left_sum = 0.0;
      for (std::size_t i = begin; i + 1 < end; ++i) {
        left_sum += y_[col[i].pos] - mean;
        const std::size_t n_left = i - begin + 1;
        if (n_left < min_leaf) continue;
        if (n - n_left < min_leaf) break;
        if (!(col[i].x < col[i + 1].x)) continue;
        const double right_sum = total - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(n_left) +
                            right_sum * right_sum / static_cast<double>(n - n_left) - parent;
        if (gain > best_gain + tolerance) {
          best_gain = gain;
          double threshold = 0.5 * (col[i].x + col[i + 1].x);
          if (!(threshold < col[i + 1].x)) threshold = col[i].x;
          best = SplitCandidate{static_cast<int>(f), threshold, gain, n_left};
        }
      }
    }
    return best;
  }

  std::pair<OpenNode, OpenNode> split(const OpenNode& node) {
    const SplitCandidate& s = *node.split;
    const auto& key = sorted_[static_cast<std::size_t>(s.feature)];
    const std::size_t mid = node.begin + s.left_count;
    for (std::size_t i = node.begin; i < node.end; ++i) goes_left_[key[i].pos] = i < mid;
    for (std::size_t f = 0; f < n_features_; ++f) {
      auto& col = sorted_[f];
      std::size_t l = node.begin;
      std::size_t r = 0;
      for (std::size_t i = node.begin; i < node.end; ++i) {
        if (goes_left_[col[i].pos]) col[l++] = col[i];
        else scratch_[r++] = col[i];
      }
      std::copy_n(scratch_.begin(), r, col.begin() + static_cast<std::ptrdiff_t>(l));
    }
    TreeNode& parent = nodes_[node.id];
    parent.feature = s.feature;
    parent.threshold = s.threshold;
    OpenNode left = make_node(node.begin, mid, node.depth + 1);
    OpenNode right = make_node(mid, node.end, node.depth + 1);
    nodes_[node.id].left = left.id;
    nodes_[node.id].right = right.id;
    return {std::move(left), std::move(right)};
  }

  const TreeConfig& config_;
  Rng& rng_;
  std::size_t n_features_;
  double feature_fraction_;
  std::vector<double> y_;
  std::vector<std::vector<Entry>> sorted_;
  std::vector<char> goes_left_;
  std::vector<Entry> scratch_;
  std::vector<std::size_t> all_features_;
  std::vector<std::size_t> subset_;
  std::vector<TreeNode> nodes_;
};

void check_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t n_rows,
                  double feature_fraction) {
  if (X.rows() != y.size()) throw InputError("feature rows and targets differ in length");
  if (n_rows == 0 || X.cols() == 0) throw InputError("cannot fit a tree to empty input");
  if (!(feature_fraction > 0.0 && feature_fraction <= 1.0))
    throw InputError("feature_fraction must lie in (0, 1]");
}

std::vector<std::size_t> all_rows(const Eigen::MatrixXd& X) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(X.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

} // namespace

std::optional<SplitCandidate> best_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         std::size_t min_samples_leaf) {
  const auto rows = all_rows(X);
  check_inputs(X, y, rows.size(), 1.0);
  TreeConfig config;
  config.min_samples_leaf = min_samples_leaf;
  config.validate();
  Rng rng(0);
  TreeBuilder builder(X, y, rows, config, rng, 1.0);
  return builder.root_split();
}

RegressionTree fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const TreeConfig& config, Rng& rng, double feature_fraction) {
  const auto rows = all_rows(X);
  return fit_tree(X, y, rows, config, rng, feature_fraction);
}

RegressionTree fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        std::span<const std::size_t> sample_rows, const TreeConfig& config,
                        Rng& rng, double feature_fraction) {
  check_inputs(X, y, sample_rows.size(), feature_fraction);
  config.validate();
  TreeBuilder builder(X, y, sample_rows, config, rng, feature_fraction);
  return builder.build();
}

} // namespace raildelay::ml
