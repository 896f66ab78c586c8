#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <algorithm>
#include <vector>

#include "wignerlab/matrix.hpp"
#include "wignerlab/spectra.hpp"
#include "support/jacobi.hpp"

using namespace wignerlab;
using Catch::Approx;

namespace {

SymMatrix make2(double a, double b, double c) {
  SymMatrix m(2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = b;
  m.at(1, 1) = c;
  return m;
}

// A^k by repeated multiplication; the slow route for trace cross-checks.
SymMatrix mat_mul(const SymMatrix& x, const SymMatrix& y) {
  SymMatrix out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      double s = 0.0;
      for (int k = 0; k < x.n; ++k) s += x.at(i, k) * y.at(k, j);
      out.at(i, j) = s;
    }
  return out;
}

double mat_trace(const SymMatrix& m) {
  double t = 0.0;
  for (int i = 0; i < m.n; ++i) t += m.at(i, i);
  return t;
}

}  // namespace

TEST_CASE("2x2 eigenvalues match the closed form") {
  const Spectrum s1 = eigenvalues(make2(2.0, 1.0, 2.0));
  REQUIRE(s1.lambda.size() == 2);
  CHECK(s1.lambda[0] == Approx(1.0).margin(1e-12));
  CHECK(s1.lambda[1] == Approx(3.0).margin(1e-12));

  const Spectrum s2 = eigenvalues(make2(0.0, 1.0, 0.0));
  CHECK(s2.lambda[0] == Approx(-1.0).margin(1e-12));
  CHECK(s2.lambda[1] == Approx(1.0).margin(1e-12));
  CHECK(spectral_norm(s2) == Approx(1.0).margin(1e-12));

  const double a = 0.3, b = -0.7, c = 1.1;
  const double mid = (a + c) / 2.0;
  const double rad = std::sqrt((a - c) * (a - c) / 4.0 + b * b);
  const Spectrum s3 = eigenvalues(make2(a, b, c));
  CHECK(s3.lambda[0] == Approx(mid - rad).margin(1e-12));
  CHECK(s3.lambda[1] == Approx(mid + rad).margin(1e-12));
}

TEST_CASE("diagonal matrices return their sorted diagonal") {
  SymMatrix m(3);
  m.at(0, 0) = 5.0;
  m.at(1, 1) = -2.0;
  m.at(2, 2) = 0.0;
  const Spectrum s = eigenvalues(m);
  CHECK(s.lambda[0] == Approx(-2.0).margin(1e-13));
  CHECK(s.lambda[1] == Approx(0.0).margin(1e-13));
  CHECK(s.lambda[2] == Approx(5.0).margin(1e-13));
  CHECK(spectral_norm(s) == Approx(5.0).margin(1e-13));
}

TEST_CASE("trace and Frobenius identities hold on random samples") {
  const EntryDistribution d = make_two_point(0.8, 0.5);
  for (int n : {5, 17, 30}) {
    const MatrixSample m = sample_matrix(d, n, 1000 + n);
    const Spectrum s = eigenvalues(m);
    REQUIRE(std::is_sorted(s.lambda.begin(), s.lambda.end()));
    double trace = 0.0, frob = 0.0;
    for (int i = 0; i < n; ++i) {
      trace += m.entries.at(i, i);
      for (int j = 0; j < n; ++j) frob += m.entries.at(i, j) * m.entries.at(i, j);
    }
    double lam_sum = 0.0, lam_sq = 0.0;
    for (double x : s.lambda) {
      lam_sum += x;
      lam_sq += x * x;
    }
    const double tol = spectol::residual_per_n * n;
    CHECK(lam_sum == Approx(trace).margin(tol));
    CHECK(lam_sq == Approx(frob).margin(tol));
    // Frobenius is also the 2nd trace power
    CHECK(trace_power(s, 2) == Approx(frob).margin(tol));
  }
}

TEST_CASE("spectra agree with the rotation-based reference solver") {
  const EntryDistribution d = make_two_point(0.8, 0.5);
  for (int n : {5, 20, 50}) {
    const MatrixSample m = sample_matrix(d, n, 4000 + n);
    const Spectrum fast = eigenvalues(m);
    const std::vector<double> slow = testing::jacobi_eigenvalues(m.entries);
    REQUIRE(slow.size() == fast.lambda.size());
    double gap = 0.0;
    for (std::size_t i = 0; i < slow.size(); ++i)
      gap = std::max(gap, std::abs(slow[i] - fast.lambda[i]));
    CHECK(gap <= spectol::jacobi_agreement);
  }
}

TEST_CASE("trace powers match literal matrix powers") {
  const EntryDistribution d = make_two_point(0.8, 0.5);
  const MatrixSample m = sample_matrix(d, 4, 77);
  const Spectrum s = eigenvalues(m);
  SymMatrix sq = mat_mul(m.entries, m.entries);
  SymMatrix power = sq;  // A^2
  for (int exp = 2; exp <= 8; exp += 2) {
    CHECK(trace_power(s, exp) == Approx(mat_trace(power)).margin(1e-10));
    power = mat_mul(power, sq);
  }
}

TEST_CASE("trace power scales out the norm before summing") {
  // Eigenvalues far above 1: naive pow-and-sum would still work here, but the
  // factored form must agree with the direct sum exactly enough.
  SymMatrix m(2);
  m.at(0, 0) = 3.0;
  m.at(1, 1) = -2.0;
  const Spectrum s = eigenvalues(m);
  const double direct = std::pow(3.0, 10) + std::pow(2.0, 10);
  CHECK(trace_power(s, 10) == Approx(direct).epsilon(1e-13));
}

TEST_CASE("spectra reject malformed queries") {
  Spectrum empty;
  CHECK_THROWS_AS(spectral_norm(empty), std::invalid_argument);
  CHECK_THROWS_AS(trace_power(empty, 2), std::invalid_argument);
  SymMatrix m(2);
  const Spectrum s = eigenvalues(m);
  CHECK(trace_power(s, 4) == 0.0);  // zero matrix
  CHECK_THROWS_AS(trace_power(s, 3), std::invalid_argument);
  CHECK_THROWS_AS(trace_power(s, 0), std::invalid_argument);
}

TEST_CASE("eigensolver failures carry the offending index") {
  const EigensolverError err(3, 10);
  CHECK(err.index == 3);
  CHECK(std::string(err.what()).find("element 3") != std::string::npos);
  CHECK(std::string(err.what()).find("n = 10") != std::string::npos);
}
