// Copyright 2026 The Arena Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <utility>

#include "Eigen/Dense"
#include "arena/format.h"
#include "fmt/ranges.h"
#include "arena/bradley_terry.h"
#include "bt_internal.h"

namespace arena {
namespace {

constexpr double kLn10 = std::numbers::ln10;

// log(1 / (1 + exp(-z))) without overflow.
double LogSigmoid(double z) {
  return z > 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

int FindRoot(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

absl::Status ValidateBTConfig(const BTConfig& config) {
  if (!(config.alpha > 0)) {
    return absl::InvalidArgumentError("alpha must be positive");
  }
  if (!(config.scale > 0)) {
    return absl::InvalidArgumentError("scale must be positive");
  }
  if (!(config.tolerance > 0)) {
    return absl::InvalidArgumentError("tolerance must be positive");
  }
  if (config.max_iterations <= 0) {
    return absl::InvalidArgumentError("max_iterations must be positive");
  }
  if (!(config.tie_weight >= 0)) {
    return absl::InvalidArgumentError("tie_weight must be non-negative");
  }
  if (!(config.l2_penalty >= 0)) {
    return absl::InvalidArgumentError("l2_penalty must be non-negative");
  }
  return absl::OkStatus();
}

BtObjective::BtObjective(int num_models, std::vector<ComparisonRow> rows,
                         int num_features, double l2_penalty)
    : num_models_(num_models),
      rows_(std::move(rows)),
      num_features_(num_features),
      l2_penalty_(l2_penalty) {}

double BtObjective::Margin(const ComparisonRow& row,
                           std::span<const double> params) const {
  double z = params[row.first] - params[row.second];
  for (int k = 0; k < num_features_; ++k) {
    z += params[num_models_ + k] * row.features[k];
  }
  return z;
}

double BtObjective::LogLikelihood(std::span<const double> params) const {
  double ll = 0.0;
  for (const ComparisonRow& row : rows_) {
    const double z = Margin(row, params);
    if (row.forward > 0) ll += row.forward * LogSigmoid(z);
    if (row.backward > 0) ll += row.backward * LogSigmoid(-z);
  }
  if (l2_penalty_ > 0) {
    double sq = 0.0;
    for (int i = 0; i < num_models_; ++i) sq += params[i] * params[i];
    ll -= 0.5 * l2_penalty_ * sq;
  }
  return ll;
}

std::vector<double> BtObjective::Gradient(
    std::span<const double> params) const {
  std::vector<double> grad(num_params(), 0.0);
  for (const ComparisonRow& row : rows_) {
    const double z = Margin(row, params);
    // d/dz [f log s(z) + b log s(-z)] = f - (f + b) s(z)
    const double dz = row.forward - (row.forward + row.backward) * Sigmoid(z);
    grad[row.first] += dz;
    grad[row.second] -= dz;
    for (int k = 0; k < num_features_; ++k) {
      grad[num_models_ + k] += dz * row.features[k];
    }
  }
  for (int i = 0; i < num_models_; ++i) grad[i] -= l2_penalty_ * params[i];
  return grad;
}

std::vector<double> BtObjective::Hessian(std::span<const double> params) const {
  const int p = num_params();
  std::vector<double> h(static_cast<std::size_t>(p) * p, 0.0);
  std::vector<std::pair<int, double>> dir;
  dir.reserve(2 + num_features_);
  for (const ComparisonRow& row : rows_) {
    const double z = Margin(row, params);
    const double s = Sigmoid(z);
    const double curvature = (row.forward + row.backward) * s * (1.0 - s);
    if (curvature == 0.0) continue;
    dir.clear();
    dir.emplace_back(row.first, 1.0);
    dir.emplace_back(row.second, -1.0);
    for (int k = 0; k < num_features_; ++k) {
      if (row.features[k] != 0.0) dir.emplace_back(num_models_ + k, row.features[k]);
    }
    for (const auto& [i, gi] : dir) {
      for (const auto& [j, gj] : dir) {
        h[static_cast<std::size_t>(i) * p + j] -= curvature * gi * gj;
      }
    }
  }
  for (int i = 0; i < num_models_; ++i) {
    h[static_cast<std::size_t>(i) * p + i] -= l2_penalty_;
  }
  return h;
}

namespace internal {

IndexedBattles IndexBattles(std::span<const BattleRecord> battles) {
  IndexedBattles out;
  for (const BattleRecord& b : battles) {
    out.models.push_back(b.model_a);
    out.models.push_back(b.model_b);
  }
  std::sort(out.models.begin(), out.models.end());
  out.models.erase(std::unique(out.models.begin(), out.models.end()),
                   out.models.end());
  const auto index_of = [&](const ModelId& id) {
    return static_cast<int>(
        std::lower_bound(out.models.begin(), out.models.end(), id) -
        out.models.begin());
  };
  out.first.reserve(battles.size());
  out.second.reserve(battles.size());
  out.outcomes.reserve(battles.size());
  for (const BattleRecord& b : battles) {
    out.first.push_back(index_of(b.model_a));
    out.second.push_back(index_of(b.model_b));
    out.outcomes.push_back(b.outcome);
  }
  return out;
}

namespace {

struct NewtonResult {
  std::vector<double> params;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  double log_likelihood = 0.0;
};

double NormOver(const std::vector<double>& v, const std::vector<int>& idx) {
  double sq = 0.0;
  for (int i : idx) sq += v[i] * v[i];
  return std::sqrt(sq);
}

// Damped Newton ascent over the `free` parameters; the others stay at zero.
// `measured` lists the parameters whose gradient enters the stopping rule.
NewtonResult MaximizeNewton(const BtObjective& objective,
                            const std::vector<int>& free,
                            const std::vector<int>& measured,
                            const BTConfig& config) {
  NewtonResult r;
  r.params.assign(objective.num_params(), 0.0);
  r.log_likelihood = objective.LogLikelihood(r.params);
  const int m = static_cast<int>(free.size());
  std::vector<double> trial(r.params.size());

  for (int iter = 0;; ++iter) {
    const std::vector<double> grad = objective.Gradient(r.params);
    r.gradient_norm = NormOver(grad, measured);
    r.iterations = iter;
    if (r.gradient_norm <= config.tolerance) {
      r.converged = true;
      break;
    }
    if (iter >= config.max_iterations || m == 0) break;

    const std::vector<double> hess = objective.Hessian(r.params);
    const int p = objective.num_params();
    Eigen::MatrixXd neg_h(m, m);
    Eigen::VectorXd g(m);
    for (int a = 0; a < m; ++a) {
      g(a) = grad[free[a]];
      for (int b = 0; b < m; ++b) {
        neg_h(a, b) = -hess[static_cast<std::size_t>(free[a]) * p + free[b]];
      }
    }
    Eigen::VectorXd step;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(neg_h);
    if (ldlt.info() == Eigen::Success) step = ldlt.solve(g);
    if (step.size() != m || !step.allFinite() || step.dot(g) <= 0) {
      step = g;  // steepest ascent fallback
    }

    // Backtracking line search, tolerant of rounding in the objective.
    const double slack = 1e-12 * (1.0 + std::abs(r.log_likelihood));
    double t = 1.0;
    bool accepted = false;
    double trial_ll = r.log_likelihood;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      trial = r.params;
      for (int a = 0; a < m; ++a) trial[free[a]] += t * step(a);
      trial_ll = objective.LogLikelihood(trial);
      if (std::isfinite(trial_ll) && trial_ll >= r.log_likelihood - slack) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    r.params.swap(trial);
    r.log_likelihood = trial_ll;
  }
  return r;
}

// True when every model in `members` can reach every other through "beat"
// edges, the condition for a finite maximum-likelihood estimate.
bool StronglyConnected(const std::vector<int>& members,
                       const std::vector<ComparisonRow>& rows) {
  if (members.size() < 2) return true;
  std::map<int, std::vector<int>> fwd, rev;
  for (const ComparisonRow& row : rows) {
    if (row.forward > 0) {
      fwd[row.first].push_back(row.second);
      rev[row.second].push_back(row.first);
    }
    if (row.backward > 0) {
      fwd[row.second].push_back(row.first);
      rev[row.first].push_back(row.second);
    }
  }
  const auto reaches_all = [&](std::map<int, std::vector<int>>& adj) {
    std::vector<int> stack = {members.front()};
    std::map<int, bool> seen = {{members.front(), true}};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    return std::all_of(members.begin(), members.end(),
                       [&](int v) { return seen[v]; });
  };
  return reaches_all(fwd) && reaches_all(rev);
}

}  // namespace

BTFitResult FitIndexed(const IndexedBattles& battles,
                       std::span<const int> multiplicity,
                       std::span<const StyleVector> features,
                       const BTConfig& config) {
  const int n = static_cast<int>(battles.models.size());
  const bool style = !features.empty();
  const int nf = style ? static_cast<int>(kNumStyleFeatures) : 0;
  const auto count_of = [&](std::size_t k) {
    return multiplicity.empty() ? 1 : multiplicity[k];
  };
  const auto weights = [&](Outcome o, double c) -> std::pair<double, double> {
    switch (o) {
      case Outcome::kWinA:
        return {c, 0.0};
      case Outcome::kWinB:
        return {0.0, c};
      case Outcome::kTie:
        return {c * config.tie_weight, c * config.tie_weight};
    }
    return {0.0, 0.0};
  };

  std::vector<bool> present(n, false);
  std::vector<ComparisonRow> rows;
  if (style) {
    for (std::size_t k = 0; k < battles.size(); ++k) {
      const int c = count_of(k);
      if (c == 0) continue;
      present[battles.first[k]] = present[battles.second[k]] = true;
      auto [f, b] = weights(battles.outcomes[k], c);
      if (f + b == 0) continue;
      rows.push_back({battles.first[k], battles.second[k], f, b, features[k]});
    }
  } else {
    std::map<std::pair<int, int>, ComparisonRow> pairs;
    for (std::size_t k = 0; k < battles.size(); ++k) {
      const int c = count_of(k);
      if (c == 0) continue;
      int i = battles.first[k], j = battles.second[k];
      present[i] = present[j] = true;
      auto [f, b] = weights(battles.outcomes[k], c);
      if (f + b == 0) continue;
      if (i > j) {
        std::swap(i, j);
        std::swap(f, b);
      }
      ComparisonRow& row = pairs[{i, j}];
      row.first = i;
      row.second = j;
      row.forward += f;
      row.backward += b;
    }
    rows.reserve(pairs.size());
    for (auto& [key, row] : pairs) rows.push_back(row);
  }

  BTFitResult result;
  std::vector<bool> participating(n, false);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const ComparisonRow& row : rows) {
    participating[row.first] = participating[row.second] = true;
    parent[FindRoot(parent, row.first)] = FindRoot(parent, row.second);
  }
  for (int i = 0; i < n; ++i) {
    if (present[i] && !participating[i]) {
      result.excluded_models.push_back(battles.models[i]);
    }
  }
  if (!result.excluded_models.empty()) {
    std::vector<std::string> names;
    for (const ModelId& m : result.excluded_models) names.push_back(m.canonical());
    result.warnings.push_back(fmt::format("excluded models with no comparison weight: {}", fmt::join(names, ", ")));
  }

  // Components, each listed in index order.
  std::map<int, std::vector<int>> components;
  for (int i = 0; i < n; ++i) {
    if (participating[i]) components[FindRoot(parent, i)].push_back(i);
  }
  result.num_components = static_cast<int>(components.size());
  if (components.size() > 1) {
    result.warnings.push_back(fmt::format("comparison graph has {} disconnected components; differences across components are not identified", components.size()));
  }

  std::vector<int> free, measured;
  for (const auto& [root, members] : components) {
    for (std::size_t m = 0; m < members.size(); ++m) {
      measured.push_back(members[m]);
      // Without a penalty one strength per component is pinned at zero.
      if (m > 0 || config.l2_penalty > 0) free.push_back(members[m]);
    }
    if (!style && config.l2_penalty == 0 && !StronglyConnected(members, rows)) {
      result.warnings.push_back(fmt::format("component containing {} has models that never lose or never win against the rest; the maximum-likelihood ratings diverge (consider l2_penalty > 0)", battles.models[members.front()].canonical()));
    }
  }
  if (style) {
    for (int k = 0; k < nf; ++k) {
      double lo = 0.0, hi = 0.0;
      bool first = true;
      for (const ComparisonRow& row : rows) {
        if (first) {
          lo = hi = row.features[k];
          first = false;
        }
        lo = std::min(lo, row.features[k]);
        hi = std::max(hi, row.features[k]);
      }
      if (lo == hi) {
        result.warnings.push_back(fmt::format("style feature {} has zero variance; its coefficient is fixed at 0", kStyleFeatureNames[k]));
        continue;
      }
      free.push_back(n + k);
      measured.push_back(n + k);
    }
  }

  const BtObjective objective(n, std::move(rows), nf, config.l2_penalty);
  const NewtonResult fit = MaximizeNewton(objective, free, measured, config);
  result.converged = fit.converged;
  result.iterations = fit.iterations;
  result.final_gradient_norm = fit.gradient_norm;
  result.log_likelihood = fit.log_likelihood;
  if (!fit.converged) {
    result.warnings.push_back(fmt::format("fit stopped after {} iterations with gradient norm {}", fit.iterations, fit.gradient_norm));
  }

  int anchor_index = -1;
  if (config.anchor_model) {
    auto it = std::lower_bound(battles.models.begin(), battles.models.end(),
                               *config.anchor_model);
    if (it != battles.models.end() && *it == *config.anchor_model &&
        participating[it - battles.models.begin()]) {
      anchor_index = static_cast<int>(it - battles.models.begin());
    } else {
      result.warnings.push_back(fmt::format("anchor model {} has no battles; ratings are mean-centred instead", config.anchor_model->canonical()));
    }
  }

  for (const auto& [root, members] : components) {
    const bool anchored =
        anchor_index >= 0 &&
        std::find(members.begin(), members.end(), anchor_index) != members.end();
    double offset = 0.0;
    if (anchored) {
      offset = fit.params[anchor_index];
    } else {
      for (int i : members) offset += fit.params[i];
      offset /= static_cast<double>(members.size());
    }
    for (int i : members) {
      const double strength10 = (fit.params[i] - offset) / kLn10;
      result.ratings.emplace(
          battles.models[i],
          Rating{battles.models[i], config.scale * strength10 + config.init_rating,
                 std::nullopt, std::nullopt});
    }
  }
  if (style) {
    StyleVector beta{};
    for (int k = 0; k < nf; ++k) beta[k] = fit.params[n + k];
    result.style_coefficients = beta;
  }
  return result;
}

}  // namespace internal

absl::StatusOr<BTFitResult> FitBradleyTerry(
    std::span<const BattleRecord> battles, const BTConfig& config) {
  if (absl::Status s = ValidateBTConfig(config); !s.ok()) return s;
  if (battles.empty()) {
    return absl::InvalidArgumentError("Bradley-Terry fit needs at least one battle");
  }
  return internal::FitIndexed(internal::IndexBattles(battles), {}, {}, config);
}

absl::StatusOr<BTFitResult> FitBradleyTerryStyle(
    std::span<const BattleRecord> battles, std::span<const StyleVector> features,
    const BTConfig& config) {
  if (absl::Status s = ValidateBTConfig(config); !s.ok()) return s;
  if (battles.empty()) {
    return absl::InvalidArgumentError("Bradley-Terry fit needs at least one battle");
  }
  if (features.size() != battles.size()) {
    return absl::InvalidArgumentError(fmt::format("got {} feature vectors for {} battles", features.size(), battles.size()));
  }
  return internal::FitIndexed(internal::IndexBattles(battles), {}, features,
                              config);
}

}  // namespace arena
