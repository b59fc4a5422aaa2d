#include <doctest.h>

#include <cmath>

#include "cgclust/errors.hpp"
#include "cgclust/optimizer.hpp"
#include "cgclust/parallel.hpp"
#include "properties.hpp"

using namespace cgclust;

TEST_SUITE("optimizer") {
  TEST_CASE("affinity weights") {
    const auto ds = oracle::gaussian_data(15, 2, 2);
    const auto t = NeighborTable::build(ds);
    const auto a = build_affinity(t, 4);
    CHECK(a.beta() == doctest::Approx(1.0 / 20.0));
    CHECK(a.is_symmetric());
    for (std::size_t i = 0; i < 15; ++i) {
      CHECK(a.at(i, i) == doctest::Approx(-a.beta()));
      for (std::size_t j = 0; j < 15; ++j) {
        if (i == j) continue;
        auto weight = [&](std::size_t p, std::size_t q) {
          const auto nb = t.neighbors(p);
          for (std::size_t r = 0; r < 4; ++r) {
            if (nb[r] == q) return 1.0 / ((r + 1.0) * (r + 2.0));
          }
          return 0.0;
        };
        CHECK(a.at(i, j) == doctest::Approx(0.5 * (weight(i, j) + weight(j, i)) - a.beta()));
      }
    }
    CHECK(build_affinity(t, 4, 0.0).beta() == 0.0);
    CHECK(default_beta(10) == doctest::Approx(1.0 / 110.0));
    CHECK_THROWS_AS(build_affinity(t, 0), std::invalid_argument);
  }

  TEST_CASE("k_max beyond the sample size") {
    const auto t = NeighborTable::build(oracle::gaussian_data(5, 1, 1));
    CHECK(build_affinity(t, 10).is_symmetric());
  }

  TEST_CASE("embedding rank") {
    CHECK(default_embedding_rank(1) == 2);
    CHECK(default_embedding_rank(12) == 5);
    CHECK(default_embedding_rank(150) == 18);
    CHECK(default_embedding_rank(100000) == 32);
  }

  TEST_CASE("relaxation solver contracts") {
    AffinityMatrix asym(2, {0, 1, 2, 0});
    CHECK_THROWS_AS(solve_gram_relaxation(asym, 2, SeedSpec(1)), std::invalid_argument);
    AffinityMatrix sym(2, {0, 1, 1, 0});
    CHECK_THROWS_AS(solve_gram_relaxation(sym, 1, SeedSpec(1)), std::invalid_argument);
    CHECK_THROWS_AS(solve_gram_relaxation(sym, 2, SeedSpec(1), 10, 0.0), std::invalid_argument);
    const auto r = solve_gram_relaxation(sym, 2, SeedSpec(1));
    CHECK(r.objective() == doctest::Approx(2.0).epsilon(1e-9));
    for (std::size_t i = 0; i < 2; ++i) {
      double norm = 0.0;
      for (double c : r.embedding.vector(i)) norm += c * c;
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(r.converged);
  }

  TEST_CASE("relaxation is deterministic and thread-count independent") {
    const auto t = NeighborTable::build(oracle::gaussian_data(40, 2, 3));
    const auto a = build_affinity(t);
    const auto r1 = solve_gram_relaxation(a, 6, SeedSpec(5));
    set_max_threads(1);
    const auto r2 = solve_gram_relaxation(a, 6, SeedSpec(5));
    set_max_threads(0);
    CHECK(r1.objective_history == r2.objective_history);
  }

  TEST_CASE("relaxation bounds the discrete problem") {
    const auto r = props::relaxation_bound(30);
    INFO(r.detail);
    CHECK(r.pass);
  }

  TEST_CASE("discrete objective and rounding") {
    AffinityMatrix a(3, {0, 1, -1, 1, 0, 2, -1, 2, 0});
    CHECK(discrete_objective(a, Partition({0, 0, 0})) == doctest::Approx(4.0));
    CHECK(discrete_objective(a, Partition({0, 1, 1})) == doctest::Approx(4.0));
    CHECK(discrete_objective(a, Partition({0, 0, 1})) == doctest::Approx(0.0));
    EmbeddingVectors e(3, 2, {1, 0, -1, 0, 0.6, 0.8});
    const auto p = round_hyperplane(e, SeedSpec(1));
    CHECK(p.size() == 3);
    CHECK(p.label(0) != p.label(1));
    CHECK(round_hyperplane(e, SeedSpec(1)) == p);
    const auto cands = generate_candidates(e, 5, SeedSpec(9));
    CHECK(cands.size() == 5);
    CHECK(cands[3] == round_hyperplane(e, SeedSpec(9).derive(3)));
  }

  TEST_CASE("candidate ranking") {
    const auto ds = oracle::gaussian_data(20, 1, 4);
    const auto t = NeighborTable::build(ds);
    std::vector<Partition> cands{Partition(oracle::random_labels(20, 2, 1)),
                                 Partition(std::vector<int>(20, 0), 2),
                                 Partition(oracle::random_labels(20, 2, 2))};
    std::vector<int> flipped = cands[0].labels();
    for (int& v : flipped) v = 1 - v;
    cands.push_back(Partition(flipped));
    const auto ranked = rank_candidates(t, cands);
    CHECK(ranked.size() == 2);
    CHECK(ranked[0].cvr <= ranked[1].cvr);
    for (const auto& r : ranked) {
      CHECK(r.cvr == cvr(t, cands[r.index]).value);
      CHECK(r.partition == cands[r.index].canonical());
    }
    const auto [best, score] = select_best_cvr(t, cands);
    CHECK(score.value == ranked[0].cvr);
    const std::vector<Partition> only_one{Partition(std::vector<int>(20, 1))};
    CHECK_THROWS_AS(select_best_cvr(t, only_one), UndefinedScoreError);
  }

  TEST_CASE("multiway refinement") {
    std::vector<double> v;
    for (int c = 0; c < 4; ++c) {
      for (int i = 0; i < 8; ++i) {
        v.push_back(10.0 * (c % 2) + 0.1 * i);
        v.push_back(10.0 * (c / 2) + 0.07 * i * i);
      }
    }
    const Dataset ds(v, 2);
    const auto t = NeighborTable::build(ds);
    std::vector<int> by_x(32), by_y(32);
    for (int i = 0; i < 32; ++i) {
      by_x[i] = (i / 8) % 2;
      by_y[i] = i / 16;
    }
    const std::vector<Partition> ranked{Partition(by_x), Partition(by_y)};
    const auto four = refine_multiway(t, Partition(by_x), ranked, 4);
    CHECK_FALSE(four.exhausted);
    CHECK(four.partition.n_nonempty() == 4);
    std::vector<int> quad(32);
    for (int i = 0; i < 32; ++i) quad[i] = i / 8;
    CHECK(rand_index(four.partition, Partition(quad)) == 1.0);

    const auto three = refine_multiway(t, Partition(by_x), ranked, 3);
    CHECK(three.partition.n_nonempty() == 3);

    const std::vector<Partition> none;
    const auto stuck = refine_multiway(t, Partition(by_x), none, 3);
    CHECK(stuck.exhausted);
    CHECK(stuck.partition.n_nonempty() == 2);
    CHECK_THROWS_AS(refine_multiway(t, Partition(by_x), ranked, 1), std::invalid_argument);
  }

  TEST_CASE("pipeline recovers separated blobs") {
    const auto r = props::blob_recovery(10);
    INFO(r.detail);
    CHECK(r.pass);
  }

  TEST_CASE("pipeline scores no worse than the radial ground truth") {
    const auto ds = sample_disk_annulus(DiskAnnulusSpec{}, 300, SeedSpec(2));
    ClusterConfig cfg;
    cfg.seed = 2;
    const auto r = cluster(ds, 2, cfg);
    const auto table = NeighborTable::build(ds);
    CHECK(r.cvr.value <= cvr(table, ds.ground_truth()).value);
    CHECK(r.relaxation_objective >= r.best_candidate_objective - 1e-9);
  }

  TEST_CASE("pipeline determinism and argument checks") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v;
    std::vector<int> truth;
    for (int b = 0; b < 3; ++b) {
      for (int i = 0; i < 20; ++i) {
        v.push_back(10.0 * b + g(rng));
        v.push_back(g(rng));
        truth.push_back(b);
      }
    }
    const Dataset ds(v, 2);
    ClusterConfig cfg;
    cfg.seed = 17;
    const auto a = cluster(ds, 3, cfg);
    set_max_threads(1);
    const auto b = cluster(ds, 3, cfg);
    set_max_threads(0);
    CHECK(a.partition == b.partition);
    CHECK(a.cvr.value == b.cvr.value);
    CHECK(a.partition.n_nonempty() == 3);
    CHECK_FALSE(a.exhausted);
    CHECK(rand_index(a.partition, Partition(truth)) == 1.0);
    CHECK(a.relaxation_objective >= a.best_candidate_objective - 1e-9);

    // Two blobs give a rank-one relaxation and a single distinct split.
    const auto two = cluster(props::separated_blobs(40, 3), 3, cfg);
    CHECK(two.exhausted);
    CHECK(two.partition.n_nonempty() == 2);
    CHECK_THROWS_AS(cluster(ds, 1, cfg), std::invalid_argument);
    CHECK_THROWS_AS(cluster(Dataset({0, 1, 2}, 1), 2, cfg), std::invalid_argument);
  }
}
