#pragma once

// Additive/interaction MARS: greedy forward addition of mirrored hinge pairs,
// GCV backward pruning, and one-vs-rest importance ranking.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slicebench/error.hpp"
#include "slicebench/features.hpp"

namespace slicebench {

struct Hinge {
  std::size_t var;
  double knot;
  int sign;  // +1: max(0, x - knot); -1: max(0, knot - x)

  double operator()(const std::vector<double>& x) const {
    return std::max(0.0, sign * (x[var] - knot));
  }
};

// Product of hinges; the empty product is the intercept.
struct Term {
  std::vector<Hinge> factors;

  double operator()(const std::vector<double>& x) const {
    double v = 1.0;
    for (const auto& h : factors) v *= h(x);
    return v;
  }
  bool uses(std::size_t var) const {
    return std::any_of(factors.begin(), factors.end(), [&](const Hinge& h) { return h.var == var; });
  }
};

struct HingeBasis {
  std::vector<Term> terms;
  std::vector<double> coefficients;
  double rss = 0.0;
  double gcv = 0.0;
  double forward_gcv = 0.0;  // GCV of the unpruned forward model

  double predict(const std::vector<double>& x) const {
    double y = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t) y += coefficients[t] * terms[t](x);
    return y;
  }
};

struct MarsOptions {
  int max_terms = 11;
  int max_degree = 1;
  double penalty = 3.0;
  int knot_candidates = 20;  // coarse grid per variable, refined around the winner
  double min_gain = 1e-3;    // forward pass stops when a pair adds less R² than this
};

inline double gcv_score(double rss, std::size_t n, std::size_t terms, double penalty) {
  const double c = static_cast<double>(terms) + penalty * (static_cast<double>(terms) - 1.0);
  const double nn = static_cast<double>(n);
  const double denom = 1.0 - c / nn;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return rss / (nn * denom * denom);
}

namespace detail {

inline Eigen::VectorXd column_of(const Term& t, const std::vector<std::vector<double>>& x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Eigen::Index>(i)) = t(x[i]);
  return v;
}

inline std::pair<Eigen::VectorXd, double> least_squares(const Eigen::MatrixXd& b, const Eigen::VectorXd& y) {
  Eigen::VectorXd beta = b.colPivHouseholderQr().solve(y);
  return {beta, (y - b * beta).squaredNorm()};
}

// Residual RSS reduction from adding the columns to an orthonormal basis.
inline double gain(const std::vector<Eigen::VectorXd>& q, const Eigen::VectorXd& r,
                   std::initializer_list<const Eigen::VectorXd*> cols) {
  std::vector<Eigen::VectorXd> extra;
  double g = 0.0;
  for (const auto* c : cols) {
    Eigen::VectorXd v = *c;
    const double norm0 = v.squaredNorm();
    if (norm0 <= 0.0) continue;
    for (const auto& e : q) v -= e.dot(v) * e;
    for (const auto& e : extra) v -= e.dot(v) * e;
    const double nv = v.squaredNorm();
    if (nv <= 1e-10 * norm0) continue;
    v /= std::sqrt(nv);
    const double p = v.dot(r);
    g += p * p;
    extra.push_back(std::move(v));
  }
  return g;
}

}  // namespace detail

// x: rows of predictors; y: response.
inline HingeBasis mars_fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                           const MarsOptions& opt = {}) {
  const std::size_t n = x.size();
  if (y.size() != n) throw ConfigError("mars_fit: response length mismatch");
  if (opt.max_terms < 1 || opt.max_degree < 1) throw ConfigError("mars_fit: max_terms and degree must be >= 1");
  if (n <= static_cast<std::size_t>(opt.max_terms)) throw ConfigError("mars_fit: needs more rows than max_terms");
  const std::size_t p = x.empty() ? 0 : x.front().size();
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::VectorXd yy(ni);
  for (std::size_t i = 0; i < n; ++i) yy(static_cast<Eigen::Index>(i)) = y[i];
  const double ymean = yy.mean();
  const double tss = (yy.array() - ymean).square().sum();

  HingeBasis model;
  model.terms.push_back(Term{});
  std::vector<Eigen::VectorXd> q{Eigen::VectorXd::Constant(ni, 1.0 / std::sqrt(static_cast<double>(n)))};
  Eigen::VectorXd resid = yy.array() - ymean;

  // Sorted distinct values per variable for knot candidates.
  std::vector<std::vector<double>> values(p);
  for (std::size_t j = 0; j < p; ++j) {
    for (const auto& row : x) values[j].push_back(row[j]);
    std::sort(values[j].begin(), values[j].end());
    values[j].erase(std::unique(values[j].begin(), values[j].end()), values[j].end());
  }

  auto hinge_col = [&](const Eigen::VectorXd& parent, std::size_t var, double knot, int sign) {
    Eigen::VectorXd v(ni);
    for (std::size_t i = 0; i < n; ++i) {
      v(static_cast<Eigen::Index>(i)) = parent(static_cast<Eigen::Index>(i)) * std::max(0.0, sign * (x[i][var] - knot));
    }
    return v;
  };

  std::vector<Eigen::VectorXd> cols{Eigen::VectorXd::Constant(ni, 1.0)};
  while (tss > 0.0 && static_cast<int>(model.terms.size()) + 2 <= opt.max_terms && resid.squaredNorm() > 1e-12 * tss) {
    double best = 0.0;
    std::size_t best_parent = 0, best_var = 0;
    double best_knot = 0.0;
    for (std::size_t t = 0; t < model.terms.size(); ++t) {
      const auto& parent = model.terms[t];
      if (static_cast<int>(parent.factors.size()) >= opt.max_degree) continue;
      for (std::size_t j = 0; j < p; ++j) {
        if (parent.uses(j) || values[j].size() < 2) continue;
        const auto& vals = values[j];
        auto score = [&](double knot) {
          auto a = hinge_col(cols[t], j, knot, +1);
          auto b = hinge_col(cols[t], j, knot, -1);
          return detail::gain(q, resid, {&a, &b});
        };
        // Coarse pass over quantiles, then every observed value between the
        // winner's neighbours.
        const std::size_t m = vals.size() - 1;  // the maximum yields a zero right hinge
        const std::size_t steps = std::min<std::size_t>(m, static_cast<std::size_t>(std::max(1, opt.knot_candidates)));
        std::size_t coarse_best = 0;
        double coarse_score = -1.0;
        std::vector<std::size_t> grid;
        for (std::size_t s = 0; s < steps; ++s) grid.push_back(s * m / steps);
        for (std::size_t g = 0; g < grid.size(); ++g) {
          double sc = score(vals[grid[g]]);
          if (sc > coarse_score) {
            coarse_score = sc;
            coarse_best = g;
          }
        }
        const std::size_t lo = coarse_best == 0 ? 0 : grid[coarse_best - 1];
        const std::size_t hi = coarse_best + 1 < grid.size() ? grid[coarse_best + 1] : m;
        for (std::size_t k = lo; k < hi; ++k) {
          const double sc = k == grid[coarse_best] ? coarse_score : score(vals[k]);
          if (sc > best + 1e-12 * tss) {
            best = sc;
            best_parent = t;
            best_var = j;
            best_knot = vals[k];
          }
        }
      }
    }
    if (best <= opt.min_gain * tss) break;
    const auto parent = model.terms[best_parent];
    const auto parent_col = cols[best_parent];
    const auto before = model.terms.size();
    for (int sign : {+1, -1}) {
      Term t = parent;
      t.factors.push_back({best_var, best_knot, sign});
      auto c = hinge_col(parent_col, best_var, best_knot, sign);
      Eigen::VectorXd v = c;
      const double n0 = v.squaredNorm();
      for (const auto& e : q) v -= e.dot(v) * e;
      const double nv = v.squaredNorm();
      if (n0 <= 0.0 || nv <= 1e-10 * n0) continue;  // degenerate half of the pair
      v /= std::sqrt(nv);
      resid -= v.dot(resid) * v;
      q.push_back(std::move(v));
      model.terms.push_back(std::move(t));
      cols.push_back(std::move(c));
    }
    if (model.terms.size() == before) break;
  }

  auto design = [&](const std::vector<std::size_t>& keep) {
    Eigen::MatrixXd b(ni, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = cols[keep[c]];
    return b;
  };
  auto fit_rss = [&](const std::vector<std::size_t>& keep) { return detail::least_squares(design(keep), yy).second; };

  // Backward pass: drop the term whose removal hurts RSS least, remember the
  // subset with the lowest GCV seen (the full model included).
  std::vector<std::size_t> current(model.terms.size());
  std::iota(current.begin(), current.end(), 0);
  double current_rss = fit_rss(current);
  model.forward_gcv = gcv_score(current_rss, n, current.size(), opt.penalty);
  auto best_set = current;
  double best_gcv = model.forward_gcv;
  while (current.size() > 1) {
    double drop_rss = std::numeric_limits<double>::infinity();
    std::size_t drop = 1;
    for (std::size_t c = 1; c < current.size(); ++c) {
      auto trial = current;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(c));
      const double r = fit_rss(trial);
      if (r < drop_rss) {
        drop_rss = r;
        drop = c;
      }
    }
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
    const double g = gcv_score(drop_rss, n, current.size(), opt.penalty);
    if (g < best_gcv) {
      best_gcv = g;
      best_set = current;
    }
  }

  HingeBasis pruned;
  for (auto idx : best_set) pruned.terms.push_back(model.terms[idx]);
  auto [beta, rss] = detail::least_squares(design(best_set), yy);
  pruned.coefficients.assign(beta.data(), beta.data() + beta.size());
  pruned.rss = rss;
  pruned.gcv = gcv_score(rss, n, best_set.size(), opt.penalty);
  pruned.forward_gcv = model.forward_gcv;
  return pruned;
}

// GCV reduction attributed to each variable: the pruned model is shrunk
// again term by term down to the intercept (least RSS damage first) and every
// step's GCV increase is credited to the variables of the term it removed.
// Redundant terms therefore do not mask each other.
inline std::vector<double> mars_importance(const HingeBasis& model, const std::vector<std::vector<double>>& x,
                                           const std::vector<double>& y, std::size_t p, double penalty = 3.0) {
  std::vector<double> imp(p, 0.0);
  if (model.terms.size() <= 1) return imp;
  const auto ni = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd yy(ni);
  for (Eigen::Index i = 0; i < ni; ++i) yy(i) = y[static_cast<std::size_t>(i)];
  std::vector<Eigen::VectorXd> cols;
  for (const auto& t : model.terms) cols.push_back(detail::column_of(t, x));
  auto fit_rss = [&](const std::vector<std::size_t>& keep) {
    Eigen::MatrixXd b(ni, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = cols[keep[c]];
    return detail::least_squares(b, yy).second;
  };
  std::vector<std::size_t> current(model.terms.size());  // term 0 is the intercept and stays
  std::iota(current.begin(), current.end(), 0);
  double gcv = gcv_score(fit_rss(current), x.size(), current.size(), penalty);
  while (current.size() > 1) {
    double drop_rss = std::numeric_limits<double>::infinity();
    std::size_t drop = 1;
    for (std::size_t c = 1; c < current.size(); ++c) {
      auto trial = current;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(c));
      const double r = fit_rss(trial);
      if (r < drop_rss) {
        drop_rss = r;
        drop = c;
      }
    }
    const std::size_t term = current[drop];
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
    const double next = gcv_score(drop_rss, x.size(), current.size(), penalty);
    std::set<std::size_t> vars;
    for (const auto& h : model.terms[term].factors) vars.insert(h.var);
    for (auto v : vars) imp[v] += std::max(0.0, next - gcv);
    gcv = next;
  }
  return imp;
}

struct RankedColumn {
  std::size_t column;  // index into feature_columns()
  double score;
};

using FeatureRanking = std::vector<RankedColumn>;

// One-vs-rest MARS per label over the active columns; importance summed over
// the class fits. Returns the top n.
template <typename Label>
FeatureRanking rank_features(const FeatureMatrix& fm, const std::vector<Label>& labels, int n,
                             const MarsOptions& opt = {}) {
  if (n <= 0) throw ConfigError("rank_features: n must be positive");
  const auto active = fm.active_columns();
  if (static_cast<std::size_t>(n) > active.size()) throw ConfigError("rank_features: n exceeds active columns");
  if (labels.size() != fm.rows.size()) throw ConfigError("rank_features: label count mismatch");
  const auto x = fm.dense();
  std::vector<double> total(active.size(), 0.0);
  std::set<Label> classes(labels.begin(), labels.end());
  for (const auto& cls : classes) {
    std::vector<double> y;
    for (const auto& l : labels) y.push_back(l == cls ? 1.0 : 0.0);
    auto model = mars_fit(x, y, opt);
    auto imp = mars_importance(model, x, y, active.size(), opt.penalty);
    for (std::size_t j = 0; j < imp.size(); ++j) total[j] += imp[j];
  }
  // Greedy: highest score first; equal scores prefer a measurement that is
  // already selected (no extra collection cost), then column order.
  const auto& all = feature_columns();
  std::vector<bool> taken(active.size(), false);
  std::set<Measurement> chosen;
  FeatureRanking out;
  for (int r = 0; r < n; ++r) {
    std::size_t best = active.size();
    for (std::size_t j = 0; j < active.size(); ++j) {
      if (taken[j]) continue;
      if (best == active.size() || total[j] > total[best]) {
        best = j;
      } else if (total[j] == total[best] && !chosen.count(all[active[best]].measurement) &&
                 chosen.count(all[active[j]].measurement)) {
        best = j;
      }
    }
    taken[best] = true;
    chosen.insert(all[active[best]].measurement);
    out.push_back({active[best], total[best]});
  }
  return out;
}

inline std::vector<std::size_t> ranked_columns(const FeatureRanking& r) {
  std::vector<std::size_t> out;
  for (const auto& c : r) out.push_back(c.column);
  return out;
}

inline std::string ranking_to_csv(const FeatureRanking& r) {
  std::string out = "rank,column,score\n";
  const auto& cols = feature_columns();
  for (std::size_t i = 0; i < r.size(); ++i) {
    out += std::to_string(i + 1) + "," + column_name(cols[r[i].column]) + "," + format_number(r[i].score) + "\n";
  }
  return out;
}

}  // namespace slicebench
