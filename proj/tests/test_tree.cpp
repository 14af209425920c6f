#include <gtest/gtest.h>

#include <cmath>

#include "mlap/distance.hpp"
#include "mlap/tree/construct.hpp"
#include "mlap/verify/residual.hpp"

using namespace mlap;

namespace {

struct instance {
  tree_case c;
  param_triple pr;
  std::optional<double> epsilon;
  std::optional<double> lambda;
};

const std::vector<instance>& corpus() {
  static const std::vector<instance> v{
      {tree_case::I, {2, 1, 1}, 1.0, {}},      {tree_case::I, {2, 1, 1}, 0.5, {}},
      {tree_case::I, {3, 2, 0.5}, 1.0, {}},    {tree_case::II, {2, 0, 3}, 1.0, {}},
      {tree_case::III, {2, -1, 1.5}, 1.0, {}}, {tree_case::IV, {2, -1, 1}, {}, 1.0},
      {tree_case::IV, {3, -0.5, 2}, {}, 2.0},  {tree_case::V1, {2, 0.5, 0.5}, {}, {}},
      {tree_case::V1, {3, 1, 1}, {}, {}},      {tree_case::V2, {2, 2, -1}, {}, {}},
      {tree_case::V2, {2.5, 2, -0.5}, {}, {}}};
  return v;
}

tree_request request(const instance& in, std::int64_t depth) {
  tree_request r{in.c, in.pr, 3, depth};
  r.epsilon = in.epsilon;
  r.lambda = in.lambda;
  return r;
}

}  // namespace

TEST(check_case, region_and_constants) {
  tree_constants k{2, 1.0, 1.0, std::nullopt, std::nullopt};
  EXPECT_THROW(check_case(tree_case::I, {2, 0, 3}, 3, k), parameter_error);
  EXPECT_THROW(check_case(tree_case::I, {2, 1, 1}, 2, k), parameter_error);
  tree_constants v2{std::nullopt, std::nullopt, std::nullopt, 5.0, 0.4};
  EXPECT_THROW(check_case(tree_case::V2, {3.5, 3, -0.5}, 3, v2), unsupported_error);
}

TEST(case_formulas, case_one_exponents_and_values) {
  auto e = case_exponents(tree_case::I, {2, 1, 1});
  EXPECT_DOUBLE_EQ(e.weight_power, 2.0);
  EXPECT_DOUBLE_EQ(e.beta, 1.0);
  EXPECT_DOUBLE_EQ(e.sigma, 1.0);
  tree_constants k{2, 0.3, 1.0, std::nullopt, std::nullopt};
  case_formulas f{tree_case::I, {2, 1, 1}, 3, k};
  for (int n : {0, 1, 5, 100})
    EXPECT_NEAR(f.log_u(n), std::log(0.3) - std::log(n + 2.0) - std::log(std::log(n + 2.0)), 1e-13);
  EXPECT_DOUBLE_EQ(default_a(tree_case::V1, {2, 0.5, 0.5}), 0.25);
  EXPECT_DOUBLE_EQ(default_a(tree_case::V1, {5, 2, 2}), 0.2);
  EXPECT_DOUBLE_EQ(default_a(tree_case::V2, {2.5, 2, -0.5}), (0.5 + 1 / 1.5) / 2);
}

TEST(case_formulas, case_four_weights) {
  tree_constants k{4, 2.0, std::nullopt, 1.0, std::nullopt};
  case_formulas f{tree_case::IV, {2, -1, 1}, 3, k};
  for (int n : {0, 3, 50}) EXPECT_NEAR(f.log_mu(n), 1.0 * (n + 4) - n * std::log(2.0), 1e-12);
}

TEST(select_constants, case_one_delta_one) {
  tree_request r{tree_case::I, {2, 1, 1}, 3, 200, 1.0};
  auto s = select_constants(r);
  ASSERT_TRUE(s.k.delta);
  EXPECT_NEAR(s.limit, std::pow(2.0, -0.5), 1e-15);
  EXPECT_LE(*s.k.delta, std::pow(2.0, -1.5) * (1 + 1e-14));
  EXPECT_NEAR(detail::choose_delta(tree_case::I, {2, 1, 1}, 1000000, s.limit), std::pow(2.0, -1.5), 1e-12);
}

TEST(select_constants, case_four_root_delta) {
  const int n0 = 5;
  const double d0 = 1.0 / (1.0 / n0 + 1.0) * std::pow(0.5, (1.0 - 2.0) / (2.0 * -1.0));
  const double L = lambda_limit(4, {2, -1, 1}, 1.0);
  EXPECT_NEAR(detail::choose_delta(tree_case::IV, {2, -1, 1}, n0, L), std::max(d0, std::pow(L / 2, -1.0)), 1e-14);
}

TEST(select_constants, every_case_verifies) {
  for (const auto& in : corpus()) {
    auto s = select_constants(request(in, 2000));
    auto prof = profile_from_constants(in.c, in.pr, 3, s.k, 2000);
    auto rep = verify_profile(prof);
    EXPECT_TRUE(rep.ok()) << to_string(in.c) << " worst level " << rep.worst_vertex;
    EXPECT_FALSE(s.trace.empty());
    for (std::int64_t n = prof.lo; n < prof.hi; ++n) EXPECT_GT(prof.log_u(n), prof.log_u(n + 1)) << to_string(in.c);
    if (in.c == tree_case::II) {
      for (std::int64_t n = 0; n <= prof.hi; ++n) EXPECT_GT(prof.log_u(n), 0.0);
    }
  }
}

TEST(select_constants, case_two_fails_for_large_m) {
  tree_request r{tree_case::II, {4, 0, 5}, 3, 200, 1.0};
  selection_options opt;
  opt.n0_max = 300;
  try {
    select_constants(r, opt);
    FAIL() << "expected constants_not_found";
  } catch (const constants_not_found& e) {
    EXPECT_FALSE(e.trace().empty());
  }
}

TEST(select_constants, user_overrides_are_kept) {
  tree_request r{tree_case::I, {2, 1, 1}, 3, 100, 1.0};
  r.n0 = 7;
  r.delta = 0.05;
  auto s = select_constants(r);
  EXPECT_EQ(*s.k.n0, 7);
  EXPECT_DOUBLE_EQ(*s.k.delta, 0.05);
  r.delta = 50.0;
  EXPECT_THROW(select_constants(r), constants_not_found);
}

TEST(select_constants, v1_root_threshold) {
  EXPECT_LT(v1_root_rhs({2, 0.5, 0.5}, 4.9, 0.25), 1.0);
  EXPECT_GE(v1_root_rhs({2, 0.5, 0.5}, 5.0, 0.25), 1.0);
  tree_request r{tree_case::V1, {2, 0.5, 0.5}, 3, 300};
  auto s = select_constants(r);
  EXPECT_GE(*s.k.lambda, 5.0);
  EXPECT_DOUBLE_EQ(std::fmod(*s.k.lambda * 2.0, 1.0), 0.0);
  tree_request lower = r;
  lower.lambda = *s.k.lambda - 0.5;
  EXPECT_THROW(select_constants(lower), constants_not_found);
}

TEST(select_constants, v2_rhs_grows) {
  tree_request r{tree_case::V2, {2, 2, -1}, 3, 300};
  auto s = select_constants(r);
  EXPECT_GT(v2_rhs({2, 2, -1}, *s.k.lambda, *s.k.a), 1.0);
  double prev = 0;
  for (double lam = 2; lam < 200; lam += 2) {
    const double v = v2_rhs({2, 2, -1}, lam, 0.75);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(radial_vs_graph, residuals_agree_at_depth_eight) {
  for (const auto& in : corpus()) {
    auto s = select_constants(request(in, 50));
    auto prof = profile_from_constants(in.c, in.pr, 3, s.k, 50);
    auto tg = build_tree_graph(prof, 8);
    auto rep = verify_supersolution(tg.graph, tg.u, in.pr, tg.interior);
    EXPECT_TRUE(rep.ok()) << to_string(in.c);
    for (const auto& e : rep.entries) {
      const auto rr = radial_residual(prof, tg.level[static_cast<std::size_t>(e.vertex)]);
      EXPECT_LE(std::fabs(e.r.value() - rr.value()), 1e-10 * std::exp(rr.log_scale)) << to_string(in.c);
    }
  }
}

TEST(radial_vs_graph, unit_tree_with_case_one_values) {
  tree_constants k{3, 0.2, 1.0, std::nullopt, std::nullopt};
  auto prof = profile_from_constants(tree_case::I, {2, 1, 1}, 3, k, 10);
  std::fill(prof.mu_log.begin(), prof.mu_log.end(), 0.0);
  auto tg = build_tree_graph(prof, 6);
  for (vertex_id x : tg.interior) {
    const auto g = residual(tg.graph, tg.u, prof.pr, x);
    const auto r = radial_residual(prof, tg.level[x]);
    EXPECT_LE(std::fabs(g.value() - r.value()), 1e-10 * std::fabs(r.value()));
  }
}

TEST(build_tree_graph, shape) {
  tree_constants k{3, 0.2, 1.0, std::nullopt, std::nullopt};
  auto prof = profile_from_constants(tree_case::I, {2, 1, 1}, 3, k, 10);
  auto tg = build_tree_graph(prof, 2);
  EXPECT_EQ(tg.graph.vertex_count(), 10u);
  EXPECT_EQ(tg.graph.edge_count(), 9u);
  EXPECT_FALSE(tg.distinguished);
  EXPECT_THROW(build_tree_graph(prof, 10, 1000), size_guard_error);

  tree_constants v{std::nullopt, std::nullopt, std::nullopt, 6.0, 0.75};
  auto p2 = profile_from_constants(tree_case::V2, {2, 2, -1}, 3, v, 5);
  auto t2 = build_tree_graph(p2, 3);
  EXPECT_EQ(t2.graph.neighbors(0).size(), 3u);
  ASSERT_TRUE(t2.distinguished);
  EXPECT_EQ(*t2.distinguished, 1u);
  EXPECT_EQ(t2.level[1], -1);
  EXPECT_EQ(t2.graph.vertex_count(), 1u + (2 + 4 + 8) + (1 + 2 + 4));
}

TEST(build_tree_graph, unit_weights_volume) {
  auto t = uniform_radial_tree(3, 12);
  auto rows = volume_profile(t, t.root(), 10);
  for (const auto& r : rows) EXPECT_NEAR(r.W, 3.0 * (std::pow(2.0, r.n + 1) - 1.0), 1e-9);
  tree_constants k{3, 0.2, 1.0, std::nullopt, std::nullopt};
  auto prof = profile_from_constants(tree_case::I, {2, 1, 1}, 3, k, 10);
  std::fill(prof.mu_log.begin(), prof.mu_log.end(), 0.0);
  auto tg = build_tree_graph(prof, 4);
  auto radial = volume_profile(radial_tree(prof), 0, 4);
  auto full = volume_profile(tg.graph, 0, 4);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_NEAR(full[n].W, radial[n].W, 1e-9);
    EXPECT_NEAR(full[n].V, radial[n].V, 1e-9);
  }
  EXPECT_DOUBLE_EQ(full[2].W, 21.0);
}

TEST(volume_growth_check, case_one_ratio_bounded) {
  tree_request r{tree_case::I, {2, 1, 1}, 3, 10000, 1.0};
  auto prof = make_profile(r);
  auto rows = volume_growth_check(prof, 10000);
  double lo = 1e300, hi = 0;
  for (const auto& row : rows)
    if (row.n >= 100) lo = std::min(lo, row.ratio), hi = std::max(hi, row.ratio);
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 3.0);
}

TEST(volume_growth_check, case_four_rate) {
  tree_request r{tree_case::IV, {2, -1, 1}, 3, 1000, {}, 1.0};
  auto prof = make_profile(r);
  auto rows = volume_growth_check(prof, 1000);
  EXPECT_NEAR(rows.back().log_W / 1000.0, 1.0, 0.01);
}

TEST(volume_growth_check, two_sided_includes_negative_branch) {
  tree_constants v{std::nullopt, std::nullopt, std::nullopt, 6.0, 0.75};
  auto prof = profile_from_constants(tree_case::V2, {2, 2, -1}, 3, v, 6);
  auto tg = build_tree_graph(prof, 6);
  auto full = volume_profile(tg.graph, 0, 5);
  auto rad = volume_growth_check(prof, 5);
  for (const auto& row : rad) EXPECT_NEAR(row.log_W, full[static_cast<std::size_t>(row.n)].log_W, 1e-12);
}
