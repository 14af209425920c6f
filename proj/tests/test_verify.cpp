#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mlap/generators.hpp"
#include "mlap/tree/construct.hpp"
#include "mlap/verify/caccioppoli.hpp"
#include "mlap/verify/cutoff.hpp"
#include "mlap/verify/descent.hpp"
#include "mlap/verify/harnack.hpp"
#include "mlap/verify/parabolic.hpp"
#include "mlap/verify/residual.hpp"

using namespace mlap;

namespace {

radial_profile case_one(std::int64_t depth, double eps = 1.0) {
  tree_request r{tree_case::I, {2, 1, 1}, 3, depth, eps};
  return make_profile(r);
}

std::vector<vertex_id> all_vertices(std::size_t n) {
  std::vector<vertex_id> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::vector<double> distance_plus_one(const weighted_graph& g) {
  auto d = hop_distances(g, 0);
  std::vector<double> u;
  for (auto x : d) u.push_back(static_cast<double>(x) + 1.0);
  return u;
}

}  // namespace

TEST(verify_supersolution, case_one_tree_depth_eight) {
  auto prof = case_one(20);
  auto tg = build_tree_graph(prof, 8);
  std::vector<vertex_id> inner;
  for (vertex_id x = 0; x < tg.graph.vertex_count(); ++x)
    if (tg.level[x] <= 6) inner.push_back(x);
  auto rep = verify_supersolution(tg.graph, tg.u, prof.pr, inner);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.checked_vertices, inner.size());
  EXPECT_EQ(rep.boundary_excluded.size(), tg.graph.vertex_count() - inner.size());
  EXPECT_LT(rep.max_normalized, 0.0);
}

TEST(verify_supersolution, constant_function_is_boundary_case) {
  auto t = unit_tree(3, 4);
  auto one = vertex_function::constant(t.vertex_count(), 1.0);
  auto rep = verify_supersolution(t, one, {2, 1, 1}, all_vertices(t.vertex_count()));
  EXPECT_TRUE(rep.ok());
  for (const auto& e : rep.entries) EXPECT_EQ(e.r.value(), 0.0);
}

TEST(verify_supersolution, growing_function_fails_at_root) {
  auto t = unit_tree(3, 4);
  auto u = vertex_function::linear(distance_plus_one(t));
  std::vector<vertex_id> inner;
  auto d = hop_distances(t, 0);
  for (vertex_id x = 0; x < t.vertex_count(); ++x)
    if (d[x] < 4) inner.push_back(x);
  auto rep = verify_supersolution(t, u, {2, 1, 1}, inner);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.violations.front().vertex, 0);
  EXPECT_NEAR(rep.violations.front().r.value(), 1.0 + std::sqrt(0.5), 1e-14);
}

TEST(verify_supersolution, nonpositive_values_are_listed) {
  auto t = unit_tree(3, 2);
  std::vector<double> v(t.vertex_count(), 1.0);
  v[2] = 0.0;
  v[5] = -1.0;
  try {
    verify_supersolution(t, vertex_function::linear(v), {2, 1, 1}, {0, 1});
    FAIL();
  } catch (const domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("5"), std::string::npos);
  }
}

TEST(harnack_check, formula_and_failure) {
  EXPECT_DOUBLE_EQ(harnack_p1(2.0, 2.0), 3.0);
  weighted_graph path(3, 0, {edge::linear(0, 1, 1.0), edge::linear(1, 2, 1.0)});
  auto rep = harnack_check(path, vertex_function::linear({1.0, 3.5, 3.5}), 2.0, 2.0);
  ASSERT_FALSE(rep.ok);
  EXPECT_EQ(rep.worst_pair, (std::pair<vertex_id, vertex_id>{0, 1}));
  EXPECT_DOUBLE_EQ(rep.worst_ratio, 3.5);
  EXPECT_TRUE(harnack_check(path, vertex_function::constant(3, 4.0), 2.0, 2.0).ok);
  EXPECT_DOUBLE_EQ(harnack_check(path, vertex_function::constant(3, 4.0), 2.0, 2.0).worst_ratio, 1.0);
}

TEST(harnack_check, every_constructed_profile_passes) {
  struct item {
    tree_case c;
    param_triple pr;
    std::optional<double> eps, lam;
  };
  for (const auto& it : std::vector<item>{{tree_case::I, {2, 1, 1}, 1.0, {}},
                                          {tree_case::II, {2, 0, 3}, 1.0, {}},
                                          {tree_case::III, {2, -1, 1.5}, 1.0, {}},
                                          {tree_case::IV, {2, -1, 1}, {}, 1.0},
                                          {tree_case::V1, {2, 0.5, 0.5}, {}, {}},
                                          {tree_case::V2, {2, 2, -1}, {}, {}}}) {
    tree_request r{it.c, it.pr, 3, 500, it.eps, it.lam};
    auto prof = make_profile(r);
    radial_tree t(prof);
    auto rep = harnack_check(t, radial_solution(prof), it.pr.m, p0_constant(t));
    EXPECT_TRUE(rep.ok) << to_string(it.c) << " worst " << rep.worst_ratio << " p1 " << rep.p1;
  }
}

TEST(harnack_check, supersolutions_on_random_graphs_pass) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> w(0.5, 2.0), val(0.5, 1.5);
  int found = 0;
  for (int trial = 0; trial < 4000 && found < 30; ++trial) {
    const vertex_id n = 3 + rng() % 5;
    std::vector<edge> edges;
    for (vertex_id v = 1; v < n; ++v) edges.push_back(edge::linear(rng() % v, v, w(rng)));
    weighted_graph g(n, 0, edges);
    std::vector<double> u;
    for (vertex_id x = 0; x < n; ++x) u.push_back(val(rng));
    auto f = vertex_function::linear(u);
    param_triple pr(2.0, 1.0, 1.0);
    if (!verify_supersolution(g, f, pr, all_vertices(n)).ok()) continue;
    ++found;
    EXPECT_TRUE(harnack_check(g, f, pr.m, p0_constant(g)).ok);
  }
  SUCCEED() << found << " random supersolutions checked";
}

TEST(harnack_dichotomy, zero_forces_zero) {
  weighted_graph path(3, 0, {edge::linear(0, 1, 1.0), edge::linear(1, 2, 1.0)});
  auto z = harnack_dichotomy(path, vertex_function::linear({0.0, 0.0, 0.0}), 2.0);
  EXPECT_TRUE(z.identically_zero);
  EXPECT_TRUE(z.holds);
  auto bump = harnack_dichotomy(path, vertex_function::linear({0.0, 1.0, 2.0}), 2.0);
  EXPECT_FALSE(bump.satisfies_on_zero_set);
  EXPECT_TRUE(bump.holds);
  auto pos = harnack_dichotomy(path, vertex_function::linear({1.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(pos.zero_count, 0u);
  EXPECT_TRUE(pos.holds);
}

TEST(make_cutoff, piecewise_values) {
  EXPECT_DOUBLE_EQ(h_value(4, 4), 1.0);
  EXPECT_DOUBLE_EQ(h_value(4, 6), 0.5);
  EXPECT_DOUBLE_EQ(h_value(4, 8), 0.0);
  for (int i = 1; i <= 8; ++i) {
    EXPECT_DOUBLE_EQ(phi_value(i, 0), 1.0);
    EXPECT_DOUBLE_EQ(phi_value(i, std::int64_t{1} << (i - 1)), 1.0);
    EXPECT_DOUBLE_EQ(phi_value(i, std::int64_t{1} << (2 * i - 1)), 0.0);
    EXPECT_GT(phi_value(i, (std::int64_t{1} << (2 * i - 1)) - 1), 0.0);
  }
  auto t = unit_tree(3, 5);
  auto h = make_cutoff(t, 0, cutoff_kind::h, 2);
  auto d = hop_distances(t, 0);
  for (vertex_id x = 0; x < t.vertex_count(); ++x) EXPECT_DOUBLE_EQ(h.values.value(x), h_value(2, d[x]));
  EXPECT_THROW(make_cutoff(t, 0, cutoff_kind::phi, 0), parameter_error);
}

TEST(make_cutoff, gradient_bound_on_annuli) {
  for (int i = 1; i <= 8; ++i) {
    auto t = uniform_radial_tree(3, std::int64_t{1} << (2 * i));
    auto phi = make_cutoff(t, t.root(), cutoff_kind::phi, i);
    auto rep = cutoff_gradient_check(t, t.root(), phi);
    EXPECT_TRUE(rep.ok) << "i=" << i;
    EXPECT_EQ(rep.rows.size(), static_cast<std::size_t>(i + 2));
    EXPECT_EQ(rep.outside_max, 0.0);
  }
}

TEST(caccioppoli, case_one_tree_spec_example) {
  auto prof = case_one(64);
  radial_tree t(prof);
  auto phi = make_cutoff(t, t.root(), cutoff_kind::phi, 3);
  auto r = caccioppoli_sides(t, radial_solution(prof), prof.pr, 0.5, 10.0, phi.values);
  EXPECT_TRUE(r.ok);
  EXPECT_GT(r.lhs, 0.0);
  EXPECT_LT(r.log_lhs, r.log_rhs);
}

TEST(caccioppoli, explicit_and_radial_trees_agree) {
  auto prof = case_one(8);
  radial_tree t(prof);
  auto tg = build_tree_graph(prof, 8);
  auto phi_r = make_cutoff(t, t.root(), cutoff_kind::phi, 2);
  auto phi_g = make_cutoff(tg.graph, 0, cutoff_kind::phi, 2);
  auto a = caccioppoli_sides(t, radial_solution(prof), prof.pr, 0.5, 10.0, phi_r.values);
  auto b = caccioppoli_sides(tg.graph, tg.u, prof.pr, 0.5, 10.0, phi_g.values);
  EXPECT_NEAR(a.log_lhs, b.log_lhs, 1e-12);
  EXPECT_NEAR(a.log_rhs, b.log_rhs, 1e-12);
  EXPECT_DOUBLE_EQ(a.p0, b.p0);
}

TEST(caccioppoli, constant_matches_hand_evaluation) {
  const double m = 2, p = 1, q = 1, t = 0.5, s = 10, p1 = 4;
  const double e = ((m - 1) * p + t * (q - m + 1)) / (p + q - t);
  const double ct = std::pow(2.0, -1 - e) * e;
  const double cp = std::pow(std::sqrt(2 * p1) * (1 + std::pow(p1, t)), e + 1) * std::pow(std::pow(p1, t + 1), e) * ct;
  const double k = p + q - m + 1;
  const double want = std::pow(cp, (p + q - t) / k) * std::pow(2 * s, (m * p + q + t * (q - m)) / k) *
                      std::pow(t, -(p * (m - 1) + t * (q - m + 1)) / k);
  auto c = caccioppoli_constant_for({m, p, q}, t, s, p1);
  EXPECT_NEAR(std::exp(c.log_value), want, 1e-12 * want);
  EXPECT_DOUBLE_EQ(c.exponent, 2.5);
}

TEST(caccioppoli, degenerate_inputs) {
  auto prof = case_one(10);
  radial_tree t(prof);
  auto u = radial_solution(prof);
  auto ones = vertex_function::constant(t.vertex_count(), 1.0);
  auto r = caccioppoli_sides(t, u, prof.pr, 0.5, 10.0, ones);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_GT(r.lhs, 0.0);
  EXPECT_FALSE(r.ok);
  auto phi = make_cutoff(t, t.root(), cutoff_kind::phi, 2);
  auto flat = caccioppoli_sides(t, ones, prof.pr, 0.5, 10.0, phi.values);
  EXPECT_EQ(flat.lhs, 0.0);
  EXPECT_TRUE(flat.ok);
  EXPECT_THROW(caccioppoli_sides(t, u, prof.pr, 0.5, 2.0, phi.values), parameter_error);
}

TEST(caccioppoli, preconditions) {
  weighted_graph path(4, 0, {edge::linear(0, 1, 1.0), edge::linear(1, 2, 1.0), edge::linear(2, 3, 1.0)});
  auto phi = vertex_function::linear({1.0, 0.5, 0.0, 0.0});
  auto down = vertex_function::linear({3.0, 2.5, 2.0, 1.5});
  EXPECT_THROW(caccioppoli_sides(path, down, {2, 1, 1}, 0.5, 10.0, phi, std::vector<vertex_id>{0, 1, 2}),
               precondition_error);
  auto up = vertex_function::linear({1.5, 2.0, 2.5, 3.0});
  EXPECT_NO_THROW(caccioppoli_sides(path, up, {2, 1, 1}, 0.5, 10.0, phi, std::vector<vertex_id>{0, 1, 2}));
  auto jump = vertex_function::linear({1.0, 100.0, 100.0, 100.0});
  EXPECT_THROW(caccioppoli_sides(path, jump, {2, 1, 1}, 0.5, 10.0, phi), precondition_error);
}

TEST(caccioppoli, schedule_corpus_holds) {
  const param_triple pr{2, 1, 1};
  for (int i = 2; i <= 5; ++i) {
    auto prof = case_one(std::int64_t{1} << (2 * i));
    radial_tree t(prof);
    auto phi = make_cutoff(t, t.root(), cutoff_kind::phi, i);
    for (double s : {5.0, 10.0, 40.0}) {
      auto r = caccioppoli_sides(t, radial_solution(prof), pr, proof_t_schedule(pr, i).t, s, phi.values);
      EXPECT_TRUE(r.ok) << "i=" << i << " s=" << s;
    }
  }
}

TEST(descent_sequence, case_one_tree) {
  auto prof = case_one(100);
  radial_tree t(prof);
  auto d = descent_sequence(t, radial_solution(prof), 2.0, t.root(), 50, t.interior());
  EXPECT_EQ(d.steps.size(), 51u);
  EXPECT_FALSE(d.truncated);
  EXPECT_TRUE(d.strictly_decreasing);
  EXPECT_TRUE(d.laplacian_negative);
  for (std::size_t n = 0; n < d.steps.size(); ++n) EXPECT_EQ(t.level(d.steps[n].vertex), static_cast<std::int64_t>(n));
  for (std::size_t n = 1; n < d.increments.size(); ++n) EXPECT_LT(d.increments[n], d.increments[n - 1]);
}

TEST(descent_sequence, explicit_tree_ties_and_truncation) {
  auto prof = case_one(10);
  auto tg = build_tree_graph(prof, 4);
  auto d = descent_sequence(tg.graph, tg.u, 2.0, 0, 20, tg.interior);
  EXPECT_TRUE(d.truncated);
  EXPECT_LE(d.steps.size(), 21u);
  EXPECT_EQ(d.steps[1].vertex, 1u);
  EXPECT_EQ(tg.level[d.steps.back().vertex], 4);
  auto c = vertex_function::constant(tg.graph.vertex_count(), 2.0);
  EXPECT_THROW(descent_sequence(tg.graph, c, 2.0, 0, 5), precondition_error);
}

TEST(parabolicity_series, unit_tree_converges) {
  auto t = uniform_radial_tree(3, 21);
  std::vector<std::int64_t> radii;
  for (int k = 1; k <= 20; ++k) radii.push_back(k);
  auto rep = parabolicity_series(t, t.root(), radii, 2.0);
  ASSERT_EQ(rep.rows.size(), 19u);
  for (std::size_t k = 0; k < rep.rows.size(); ++k)
    EXPECT_NEAR(rep.rows[k].term, 1.0 / (3.0 * std::pow(2.0, static_cast<double>(k) + 2.0)), 1e-15);
  EXPECT_LT(rep.rows.back().partial, 1.0 / 6.0);
}

TEST(parabolicity_series, clique_chain_diverges_logarithmically) {
  auto g = clique_chain(55);
  std::vector<std::int64_t> radii;
  for (int k = 1; k <= 50; ++k) radii.push_back(k);
  auto rep = parabolicity_series(g, 0, radii, 2.0);
  for (const auto& r : rep.rows) EXPECT_NEAR(r.term, 1.0 / (r.r1 + 1.0), 1e-15);
  EXPECT_GT(rep.rows.back().partial, 2.5);
}

TEST(parabolicity_series, single_pair_and_errors) {
  auto g = clique_chain(6);
  auto rep = parabolicity_series(g, 0, {2, 5}, 3.0);
  const double dw = volume_W(g, 0, 5) - volume_W(g, 0, 2);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_NEAR(rep.rows[0].term, std::pow(std::pow(3.0, 3.0) / dw, 0.5), 1e-14);
  EXPECT_THROW(parabolicity_series(g, 0, {3, 2}, 2.0), parameter_error);
  auto t = unit_tree(3, 2);
  auto trunc = parabolicity_series(t, 0, {0, 1, 2}, 2.0);
  EXPECT_EQ(trunc.rows.size(), 1u);
  EXPECT_EQ(trunc.warnings.size(), 1u);
}
