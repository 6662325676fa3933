#include "orey/report_json.hpp"

#include <cmath>

namespace orey {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json nums(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

template <std::size_t N>
json nums(const std::array<double, N>& v) {
  json out = json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

template <typename Rows>
json table(const Rows& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(nums(r));
  return out;
}

json matrix(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

json track(const BegynTrack& t) {
  json j{{"h", nums(t.h)}, {"ratio", nums(t.ratio)}, {"residual", nums(t.residual)}};
  if (t.m > 0) {
    j["m"] = t.m;
  } else {
    j["t"] = t.t;
    j["rate"] = num(t.rate);
  }
  if (t.expected_residual) j["expected_residual"] = num(*t.expected_residual);
  if (t.published_residual) j["published_residual"] = num(*t.published_residual);
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

}  // namespace

json to_json(const AsymptoticCovariance& s) {
  return {{"gamma", s.gamma},       {"Sigma11", s.sigma11}, {"Sigma12", s.sigma12},
          {"Sigma22", s.sigma22},   {"sigma_sq", s.sigma_gamma_sq},
          {"J", s.truncation_j},    {"tail_bound", s.tail_bound}};
}

json to_json(const EstimateResult& r) {
  json j{{"gamma_hat", num(r.gamma_hat)}, {"n", r.n}, {"v_n", r.v_n}, {"v_2n", r.v_2n}};
  if (r.ci) {
    j["ci_level"] = r.ci->level;
    j["ci_low"] = r.ci->low;
    j["ci_high"] = r.ci->high;
    j["sigma_used"] = r.ci->sigma;
  }
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

json to_json(const CoefficientAggregates& a) {
  return {{"n", a.n},
          {"mode", to_string(a.mode)},
          {"row_sum_max", nums(a.row_sum_max)},
          {"expected_v", nums(a.expected_v)},
          {"var_v", nums(a.var_v)},
          {"cov_v", num(a.cov_v)},
          {"scaled_cov", {{"11", num(scaled_cov(a, 1, 1))},
                          {"12", num(scaled_cov(a, 1, 2))},
                          {"22", num(scaled_cov(a, 2, 2))}}}};
}

json to_json(const CoefficientSet& c) {
  return {{"n", c.n}, {"mode", to_string(c.mode)}, {"d_n", matrix(c.d_n)}, {"d_2n", matrix(c.d_2n)},
          {"c", matrix(c.c)}};
}

json to_json(const ConditionReport& r) {
  json j{{"model", r.model}, {"n_grid", r.n_grid}, {"overall", to_string(r.overall())}};
  json checks = json::object();
  if (r.row_sums) {
    checks["rowsum"] = {{"row_sum_max", table(r.row_sums->row_sum_max)},
                        {"growth_tolerance", r.row_sums->growth_tolerance},
                        {"verdict", to_string(r.row_sums->verdict)}};
  }
  if (r.scaled_cov) {
    checks["scov"] = {{"values", table(r.scaled_cov->values)},
                      {"gaps", table(r.scaled_cov->gaps)},
                      {"target", to_json(r.scaled_cov->target)},
                      {"verdict", to_string(r.scaled_cov->verdict)}};
  }
  if (r.fbm_gap) {
    const auto& g = *r.fbm_gap;
    checks["gap"] = {{"d_sum", table(g.d_sum)},
                     {"d_diag_sum", table(g.d_diag_sum)},
                     {"c_sum", nums(g.c_sum)},
                     {"d_slope", nums(g.d_slope)},
                     {"c_slope", num(g.c_slope)},
                     {"d_slope_threshold", g.d_slope_threshold},
                     {"c_slope_threshold", g.c_slope_threshold},
                     {"verdict", to_string(g.verdict)}};
  }
  if (r.bias) {
    checks["bias"] = {{"bias", table(r.bias->bias)},
                      {"slope", nums(r.bias->slope)},
                      {"slope_threshold", r.bias->slope_threshold},
                      {"verdict", to_string(r.bias->verdict)}};
  }
  if (r.begyn) {
    json fixed = json::array(), aligned = json::array();
    for (const auto& t : r.begyn->fixed_tracks) fixed.push_back(track(t));
    for (const auto& t : r.begyn->aligned_tracks) aligned.push_back(track(t));
    checks["begyn"] = {{"gamma", r.begyn->gamma},
                       {"candidate_limit", r.begyn->candidate_limit},
                       {"fixed_tracks", fixed},
                       {"aligned_tracks", aligned}};
  }
  j["checks"] = checks;
  return j;
}

json to_json(const McReport& r) {
  json ks = json::array();
  for (const auto& k : r.ks) {
    ks.push_back({{"distance", k.distance}, {"p_value", k.p_value}, {"verdict", to_string(k.verdict)}});
  }
  json j{{"model", r.model},
         {"statistic", to_string(r.statistic)},
         {"n", r.n},
         {"reps", r.reps},
         {"seed", r.seed},
         {"gamma", r.gamma},
         {"mean", nums(r.mean)},
         {"mean_se", nums(r.mean_se)},
         {"cov", table(r.cov)},
         {"target", table(r.target)},
         {"relative_error", table(r.relative_error)},
         {"cov_tolerance", r.cov_tolerance},
         {"ks", ks},
         {"verdicts",
          {{"cov", to_string(r.cov_verdict)},
           {"mean", to_string(r.mean_verdict)},
           {"normality", to_string(r.normality_verdict)},
           {"overall", to_string(r.overall())}}}};
  if (r.statistic == McStatistic::GammaHat) {
    j["gamma_hat_mean"] = r.gamma_hat_mean;
    j["gamma_hat_se"] = r.gamma_hat_se;
    j["ci_coverage"] = r.ci_coverage ? json(*r.ci_coverage) : json(nullptr);
    j["ci_suppressed"] = r.ci_suppressed;
  }
  return j;
}

}  // namespace orey
