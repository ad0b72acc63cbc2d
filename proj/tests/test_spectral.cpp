#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/tree_enum.hpp"
#include "vicsek/spectral.hpp"
#include "vicsek/vicsek_gen.hpp"
#include "vicsek/walk_oracle.hpp"

using namespace vicsek;
using testsupport::random_labeled_tree;

namespace {

Tree path(VertexId n) {
  std::vector<Edge> edges;
  for (VertexId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return validate_tree(n, edges);
}

Tree star(VertexId leaves) {
  std::vector<Edge> edges;
  for (VertexId v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return validate_tree(leaves + 1, edges);
}

}  // namespace

TEST_CASE("laplacian entries") {
  Eigen::MatrixXd p3 = laplacian(path(3));
  Eigen::MatrixXd expect(3, 3);
  expect << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK((p3 - expect).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd s4 = laplacian(star(4));
  CHECK(s4(0, 0) == 4.0);
  for (int leaf = 1; leaf <= 4; ++leaf) CHECK(s4(0, leaf) == -1.0);
  CHECK(s4.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd single = laplacian(validate_tree(1, {}));
  CHECK(single.rows() == 1);
  CHECK(single(0, 0) == 0.0);
}

TEST_CASE("spectrum of small graphs") {
  SpectrumResult p3 = spectrum(path(3));
  REQUIRE(p3.eigenvalues.size() == 3);
  CHECK(p3.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p3.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p3.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));

  SpectrumResult s4 = spectrum(star(4));
  REQUIRE(s4.eigenvalues.size() == 5);
  CHECK(s4.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 1; i <= 3; ++i) CHECK(s4.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s4.eigenvalues[4] == doctest::Approx(5.0).epsilon(1e-12));

  SpectrumResult p2 = spectrum(path(2));
  CHECK(p2.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spectrum of P9 is 4 sin^2(k pi / 18)") {
  SpectrumResult p9 = spectrum(path(9));
  for (int k = 0; k < 9; ++k) {
    double expect = 4.0 * std::pow(std::sin(k * M_PI / 18.0), 2);
    CHECK(p9.eigenvalues[k] == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("spectrum sanity: zero multiplicity, trace, max-degree bound") {
  RngStream rng(0xeadbeef);
  for (int n : {2, 13, 77}) {
    Tree g = random_labeled_tree(n, rng);
    SpectrumResult s = spectrum(g);
    CHECK(s.zero_index == 0);
    double trace = 0, degsum = 0;
    for (double ev : s.eigenvalues) trace += ev;
    for (VertexId v = 0; v < g.n(); ++v) degsum += static_cast<double>(g.degree(v));
    CHECK(trace == doctest::Approx(degsum).epsilon(1e-10));
    CHECK(s.eigenvalues.back() <= 2.0 * static_cast<double>(g.max_degree()) + 1e-9);
  }
}

TEST_CASE("spectrum dense cap") {
  CHECK_THROWS_AS(spectrum(path(40), 30), Error);
  try {
    spectrum(path(40), 30);
  } catch (const Error& e) {
    CHECK(e.code() == errc::dense_cap_exceeded);
  }
}

TEST_CASE("mfpt_eigen matches the exact oracle") {
  CHECK(mfpt_eigen(spectrum(path(3))) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(mfpt_eigen(spectrum(path(9))) == doctest::Approx(80.0 / 3.0).epsilon(1e-6));
  CHECK(mfpt_eigen(spectrum(star(4))) == doctest::Approx(32.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("property: Kirchhoff identity n * sum(1/phi) = W on trees") {
  RngStream rng(0x415c);
  std::vector<Tree> graphs;
  for (int n : {2, 9, 50}) graphs.push_back(random_labeled_tree(n, rng));
  graphs.push_back(generate(star_seed(4), 4, 2).tree);          // 125
  graphs.push_back(generate(testsupport::spider_seed(), 3, 2).tree);  // 80
  for (const Tree& g : graphs) {
    SpectrumResult s = spectrum(g);
    double w = to_double(Rational(wiener_fast_tree(g)));
    double kirchhoff = static_cast<double>(g.n()) * s.reciprocal_sum;
    CHECK(std::fabs(kirchhoff - w) / w <= 1e-8);
  }
}

TEST_CASE("pseudoinverse_hitting anchors") {
  Eigen::MatrixXd f9 = pseudoinverse_hitting(path(9));
  CHECK(std::fabs(f9(0, 8) - 64.0) / 64.0 <= 1e-8);
  CHECK(f9(3, 3) == 0.0);

  Eigen::MatrixXd fs = pseudoinverse_hitting(star(4));
  CHECK(std::fabs(fs(0, 1) - 7.0) / 7.0 <= 1e-8);
  CHECK(std::fabs(fs(1, 0) - 1.0) <= 1e-8);

  CHECK_THROWS_AS(pseudoinverse_hitting(path(50), 40), Error);
}

TEST_CASE("property: pseudoinverse hitting equals the exact tree oracle") {
  RngStream rng(0x9a9a);
  std::vector<Tree> graphs;
  for (int n : {2, 24, 111}) graphs.push_back(random_labeled_tree(n, rng));
  graphs.push_back(generate(star_seed(2), 2, 4).tree);  // 243
  for (const Tree& g : graphs) {
    Eigen::MatrixXd f = pseudoinverse_hitting(g);
    for (VertexId target = 0; target < g.n(); target += std::max<VertexId>(1, g.n() / 7)) {
      auto exact = hitting_times_tree(g, target);
      for (VertexId u = 0; u < g.n(); ++u) {
        if (u == target) continue;
        CHECK(std::fabs(f(u, target) - static_cast<double>(exact[u])) /
                  static_cast<double>(exact[u]) <=
              1e-8);
      }
    }
  }
}

TEST_CASE("decimate_eigenvalue: s=2 parent 1 recovers the P9 bottom eigenvalue") {
  DecimationTriple triple = decimate_eigenvalue(1.0, 2);
  CHECK(triple.children[0] == doctest::Approx(4.0 * std::pow(std::sin(M_PI / 18.0), 2)).epsilon(1e-9));
  for (double r : triple.residuals) CHECK(std::fabs(r) <= 1e-10);
  // all three children sit in the P9 spectrum
  SpectrumResult p9 = spectrum(path(9));
  for (double child : triple.children) {
    double best = 1e9;
    for (double ev : p9.eigenvalues) best = std::min(best, std::fabs(ev - child));
    CHECK(best <= 1e-9);
  }
}

TEST_CASE("decimate_eigenvalue: small parents approach {0, 3, s+1}") {
  for (long s : {2L, 3L, 5L}) {
    DecimationTriple t = decimate_eigenvalue(1e-9, s);
    CHECK(std::fabs(t.children[0]) <= 1e-3);
    CHECK(std::fabs(t.children[1] - 3.0) <= 1e-3);
    CHECK(std::fabs(t.children[2] - (s + 1)) <= 1e-3);
  }
}

TEST_CASE("decimate_eigenvalue: three real distinct roots for s=3, parent 1") {
  DecimationTriple t = decimate_eigenvalue(1.0, 3);
  CHECK(t.children[0] < t.children[1]);
  CHECK(t.children[1] < t.children[2]);
  for (double r : t.residuals) CHECK(std::fabs(r) <= 1e-10);
}

TEST_CASE("decimate_eigenvalue: complex pair reported, bad parents rejected") {
  // for s=2 the cubic's local maximum is 4; beyond it only one real root remains
  CHECK_THROWS_AS(decimate_eigenvalue(10.0, 2), Error);
  try {
    decimate_eigenvalue(10.0, 2);
  } catch (const Error& e) {
    CHECK(e.code() == errc::no_three_real_roots);
  }
  CHECK_THROWS_AS(decimate_eigenvalue(0.0, 2), Error);
  CHECK_THROWS_AS(decimate_eigenvalue(-1.0, 2), Error);
  CHECK_THROWS_AS(decimate_eigenvalue(1.0, 1), Error);
}

TEST_CASE("decimation_report: generation 0 -> 1 inclusion for s=2 and s=3") {
  for (long s : {2L, 3L}) {
    SpectrumResult parent = spectrum(generate(star_seed(s), s, 0).tree);
    SpectrumResult child = spectrum(generate(star_seed(s), s, 1).tree);
    DecimationReport rep = decimation_report(parent, child, s);
    CHECK(rep.all_matched);
    CHECK(rep.entries.size() == static_cast<std::size_t>(s));  // s nonzero parents in a star
    for (const DecimationEntry& e : rep.entries) {
      CHECK(e.matched);
      for (double err : e.match_error) CHECK(err <= 1e-6);
    }
  }
}

TEST_CASE("eval_ap5_sums evaluates the printed partition sums") {
  Ap5Evaluation e = eval_ap5_sums(2, 1);
  CHECK(e.sum1 == make_rational(1, 3));
  CHECK(e.sum2 == 1);
  CHECK(e.total == make_rational(8, 3));  // versus the oracle's 80/3: the flagged mismatch

  // sum1 at t=1 collapses to 1/(s+1)
  for (long s = 2; s <= 6; ++s) {
    CHECK(eval_ap5_sums(s, 1).sum1 == make_rational(1, s + 1));
  }
  // the (s-2) factor kills the first piece of sum2 at s=2
  CHECK(eval_ap5_sums(2, 3).sum2 == make_rational(int_pow(9, 3) - 1, 8));

  CHECK_THROWS_AS(eval_ap5_sums(1, 1), Error);
  CHECK_THROWS_AS(eval_ap5_sums(3, 0), Error);
}

TEST_CASE("Kirchhoff identity holds at the dense-cap scale") {
  Tree g = generate(star_seed(2), 2, 5).tree;  // 729 vertices
  SpectrumResult s = spectrum(g);
  double w = to_double(Rational(wiener_fast_tree(g)));
  CHECK(std::fabs(static_cast<double>(g.n()) * s.reciprocal_sum - w) / w <= 1e-8);
}

TEST_CASE("spectrum CSV format") {
  std::ostringstream os;
  write_spectrum_csv(spectrum(star(4)), os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "index,eigenvalue,multiplicity_hint");
  std::getline(is, line);
  CHECK(line.substr(0, 2) == "0,");
  int rows = 1;
  std::string last;
  while (std::getline(is, line)) {
    if (!line.empty()) {
      last = line;
      ++rows;
    }
  }
  CHECK(rows == 5);
  CHECK(last == "4,5,1");
  // the triple eigenvalue 1 carries hint 3
  CHECK(os.str().find("1,1,3") != std::string::npos);
}

TEST_CASE("decimation JSON serialization") {
  SpectrumResult parent = spectrum(generate(star_seed(2), 2, 0).tree);
  SpectrumResult child = spectrum(generate(star_seed(2), 2, 1).tree);
  DecimationReport rep = decimation_report(parent, child, 2);
  rep.parent_generation = 0;
  rep.child_generation = 1;
  std::ostringstream os;
  write_decimation_json(rep, os);
  auto j = nlohmann::json::parse(os.str());
  CHECK(j["s"] == 2);
  CHECK(j["all_matched"] == true);
  CHECK(j["entries"].size() == 2);
  CHECK(j["entries"][0]["children"].size() == 3);
}
