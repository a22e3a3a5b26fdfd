#include "raildelay/ml/importance.hpp"

#include <algorithm>
#include <numeric>

#include "raildelay/core/error.hpp"
#include "raildelay/metrics/metrics.hpp"

namespace raildelay::ml {

Eigen::VectorXd permutation_importance(const TrainedModel& model, const FeatureMatrix& X,
                                       const Eigen::VectorXd& y, std::size_t n_repeats,
                                       std::uint64_t seed) {
  if (X.rows() < 2) throw InputError("permutation importance needs at least two rows");
  if (n_repeats < 1) throw InputError("permutation importance needs at least one repeat");
  const double baseline = metrics::rmse(y, model.predict(X));

  Eigen::VectorXd importance = Eigen::VectorXd::Zero(X.cols());
  Eigen::MatrixXd shuffled = X.values;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index f = 0; f < X.cols(); ++f) {
    double total = 0.0;
    for (std::size_t rep = 0; rep < n_repeats; ++rep) {
      Rng rng = make_stream(seed, static_cast<std::uint64_t>(f) * n_repeats + rep);
      std::iota(perm.begin(), perm.end(), Eigen::Index{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      for (Eigen::Index r = 0; r < X.rows(); ++r)
        shuffled(r, f) = X.values(perm[static_cast<std::size_t>(r)], f);
      total += metrics::rmse(y, model.predict_values(shuffled)) - baseline;
    }
    shuffled.col(f) = X.values.col(f);
    importance(f) = total / static_cast<double>(n_repeats);
  }
  return importance;
}

std::vector<std::size_t> importance_ranking(const Eigen::VectorXd& importance) {
  std::vector<std::size_t> order(static_cast<std::size_t>(importance.size()));
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
    return importance(static_cast<Eigen::Index>(a)) > importance(static_cast<Eigen::Index>(b));
  });
  return order;
}

} // namespace raildelay::ml
