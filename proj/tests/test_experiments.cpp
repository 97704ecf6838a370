#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sigspace/experiments.hpp"
#include "sigspace/plot.hpp"
#include "sigspace/rng.hpp"

using namespace sigspace;

namespace {

Index circular_gap(Index a, Index b, Index n) {
  const Index d = std::abs(a - b);
  return std::min(d, n - d);
}

SweepConfig small_sweep() {
  SweepConfig c;
  c.d = 32;
  c.redundancy = 4;
  c.k = 2;
  c.m_grid = {8, 16, 24};
  c.trials = 4;
  c.base_seed = 9;
  c.variants = {named_variant("sscosamp-omp"), named_variant("sscosamp-eps-omp")};
  return c;
}

}  // namespace

TEST_CASE("clustered supports are circular blocks") {
  const auto D = overcomplete_dft(1024, 4);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto sig = gen_sparse_signal(D, 8, SupportMode::clustered, s);
    REQUIRE(sig.support.size() == 8);
    // exactly one wrap-around gap larger than 1
    int breaks = 0;
    for (Index i = 0; i < 8; ++i) {
      const Index a = sig.support[i];
      const Index b = sig.support[(i + 1) % 8];
      breaks += ((b - a + 4096) % 4096) != 1;
    }
    CHECK(breaks == 1);
    CHECK(sig.x.norm() == doctest::Approx(1.0));
    CHECK((D.matrix() * sig.alpha - sig.x).norm() < 1e-12);
  }
}

TEST_CASE("separated supports respect the spacing rule") {
  const auto D = overcomplete_dft(1024, 4);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto sig = gen_sparse_signal(D, 8, SupportMode::separated, s);
    REQUIRE(sig.support.size() == 8);
    for (Index i = 0; i < 8; ++i) {
      for (Index j = i + 1; j < 8; ++j) CHECK(circular_gap(sig.support[i], sig.support[j], 4096) >= 256);
    }
  }
}

TEST_CASE("k = 1 gives the same single index in both modes") {
  const auto D = overcomplete_dft(16, 4);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto a = gen_sparse_signal(D, 1, SupportMode::clustered, s);
    const auto b = gen_sparse_signal(D, 1, SupportMode::separated, s);
    CHECK(a.support == b.support);
    CHECK(a.support.size() == 1);
  }
}

TEST_CASE("separated generation covers the circle") {
  // every atom appears at some point when sampling enough supports
  const auto D = overcomplete_dft(8, 2);
  std::vector<int> seen(16, 0);
  for (std::uint64_t s = 0; s < 400; ++s) {
    for (Index i : gen_sparse_signal(D, 3, SupportMode::separated, s).support) seen[static_cast<std::size_t>(i)]++;
  }
  for (int c : seen) CHECK(c > 0);
}

TEST_CASE("infeasible separation") {
  const auto D = overcomplete_dft(4, 1);
  CHECK_THROWS_AS(gen_sparse_signal(D, 3, SupportMode::separated, 1), InvalidArgument);
  CHECK_THROWS_AS(gen_sparse_signal(D, 5, SupportMode::clustered, 1), InvalidArgument);
}

TEST_CASE("run_trial: overdetermined sanity case and determinism") {
  TrialConfig t;
  t.d = 32;
  t.k = 2;
  t.m = 32;
  t.seed = 4;
  t.variant = named_variant("sscosamp-eps-omp");
  const auto r = run_trial(t);
  CHECK(r.success);
  CHECK(r.relative_error <= t.success_tol);
  const auto r2 = run_trial(t);
  CHECK(r2.relative_error == r.relative_error);
  CHECK(r2.iterations == r.iterations);
  CHECK(r2.config_hash == r.config_hash);
  t.seed = 5;
  CHECK(config_hash(t) != r.config_hash);
}

TEST_CASE("run_trial: far too few measurements fail") {
  TrialConfig t;
  t.d = 64;
  t.k = 8;
  t.m = 4;
  t.variant = named_variant("sscosamp-omp");
  int successes = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    t.seed = s;
    successes += run_trial(t).success;
  }
  CHECK(successes <= 5);
}

TEST_CASE("run_trial validation") {
  TrialConfig t;
  t.m = 300;
  CHECK_THROWS_AS(run_trial(t), InvalidArgument);
  t.m = 64;
  t.success_tol = 0.0;
  CHECK_THROWS_AS(run_trial(t), InvalidArgument);
  CHECK_THROWS_AS(named_variant("basis-pursuit"), InvalidArgument);
}

TEST_CASE("sweep rates, pairing and validation") {
  auto c = small_sweep();
  c.variants.push_back(named_variant("sscosamp-omp"));
  const auto curves = run_sweep(c);
  REQUIRE(curves.size() == 3);
  CHECK(curves[0].rate == curves[2].rate);
  CHECK(curves[0].mean_rel_error == curves[2].mean_rel_error);
  for (const auto& cv : curves) {
    for (std::size_t j = 0; j < cv.m.size(); ++j) {
      CHECK(cv.rate[j] == static_cast<double>(cv.successes[j]) / static_cast<double>(cv.trials[j]));
      CHECK(cv.rate[j] >= 0.0);
      CHECK(cv.rate[j] <= 1.0);
    }
  }
  // a sweep trial is the same as the standalone trial with the derived seed
  TrialConfig t;
  t.d = c.d;
  t.k = c.k;
  t.m = 16;
  t.variant = c.variants[1];
  double err = 0.0;
  for (std::uint64_t i = 0; i < 4; ++i) {
    t.seed = derive_seed(c.base_seed, {i});
    err += run_trial(t).relative_error;
  }
  CHECK(curves[1].mean_rel_error[1] == doctest::Approx(err / 4).epsilon(1e-15));

  auto bad = small_sweep();
  bad.trials = 0;
  CHECK_THROWS_AS(run_sweep(bad), InvalidArgument);
  bad = small_sweep();
  bad.m_grid.clear();
  CHECK_THROWS_AS(run_sweep(bad), InvalidArgument);
}

TEST_CASE("monotonicity alarm") {
  RecoveryCurve c;
  c.rate = {0.1, 0.9, 0.5, 0.55, 0.1};
  CHECK(monotonicity_alarms(c) == std::vector<std::size_t>{2, 4});
}

TEST_CASE("CSV round trip and formatting") {
  RecoveryCurve c;
  c.variant = "v1";
  c.m = {10, 20, 30};
  c.trials = {3, 3, 3};
  c.successes = {0, 1, 3};
  c.rate = {0.0, 1.0 / 3.0, 1.0};
  c.mean_rel_error = {0.5, 0.1, 1e-15};
  c.mean_iters = {50, 7.5, 2};
  std::ostringstream out;
  write_csv(out, {c});
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  std::istringstream in(text);
  const auto back = read_csv(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].variant == c.variant);
  CHECK(back[0].m == c.m);
  CHECK(back[0].successes == c.successes);
  CHECK(back[0].rate == c.rate);
  CHECK(back[0].mean_rel_error == c.mean_rel_error);
  CHECK(back[0].mean_iters == c.mean_iters);
  std::istringstream bad("variant,m\nx,1\n");
  CHECK_THROWS_AS(read_csv(bad), InvalidArgument);
}

TEST_CASE("emit_outputs writes CSV and an 800x600 SVG") {
  RecoveryCurve c;
  c.variant = "all-ones";
  c.m = {1, 2, 3};
  c.trials = {1, 1, 1};
  c.successes = {1, 1, 1};
  c.rate = {1, 1, 1};
  c.mean_rel_error = {0, 0, 0};
  c.mean_iters = {1, 1, 1};
  const auto dir = std::filesystem::temp_directory_path() / "sigspace_tests" / "emit";
  emit_outputs({c}, dir, "t");
  std::ifstream svg(dir / "t.svg");
  const std::string s((std::istreambuf_iterator<char>(svg)), {});
  CHECK(s.find("width=\"800\" height=\"600\"") != std::string::npos);
  CHECK(s.find("<polyline") != std::string::npos);
  CHECK(s.find("<script") == std::string::npos);
  // y axis still spans [0, 1] with constant rates
  CHECK(s.find(">0</text>") != std::string::npos);
  CHECK(s.find(">1</text>") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "t.csv"));
}

TEST_CASE("log-scale chart rejects non-positive x") {
  plot::Series s{"bad", {0.0, 1.0}, {0.5, 0.5}};
  plot::ChartOptions o;
  o.log_x = true;
  CHECK_THROWS_AS(plot::line_chart({s}, o), InvalidArgument);
  CHECK(plot::xml_escape("a<b&c") == "a&lt;b&amp;c");
}
