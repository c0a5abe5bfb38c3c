#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "ompsd/ensembles.hpp"
#include "ompsd/errors.hpp"
#include "oracle_helpers.hpp"

using namespace ompsd;

namespace {

// Pearson chi-square critical value, 15 degrees of freedom, alpha = 0.001.
constexpr double kChi2Crit15 = 37.6973;

bool bitwise_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real() || a(i).imag() != b(i).imag()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rpr entries have constant modulus and unit-norm columns") {
  const auto mat = generate_matrix(Ensemble::rpr, 16, 24, 9);
  const double inv_sqrt_m = 1.0 / 4.0;
  for (Eigen::Index i = 0; i < mat.entries.size(); ++i) {
    CHECK(std::abs(mat.entries(i)) == doctest::Approx(inv_sqrt_m).epsilon(1e-14));
  }
  for (Eigen::Index c = 0; c < mat.cols(); ++c) {
    CHECK(mat.entries.col(c).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(mat.ensemble == Ensemble::rpr);
  CHECK(mat.seed == 9);
}

TEST_CASE("rpr phases are uniform on [0, 2pi)") {
  const auto mat = generate_matrix(Ensemble::rpr, 64, 64, 401);
  std::vector<std::int64_t> counts(16, 0);
  for (Eigen::Index i = 0; i < mat.entries.size(); ++i) {
    double phase = std::atan2(mat.entries(i).imag(), mat.entries(i).real());
    if (phase < 0.0) phase += 2.0 * M_PI;
    auto bin = static_cast<std::size_t>(phase / (2.0 * M_PI) * 16.0);
    if (bin > 15) bin = 15;
    ++counts[bin];
  }
  CHECK(oracle::chi_square_uniform(counts, mat.entries.size()) < kChi2Crit15);
}

TEST_CASE("matrix generation is seed-deterministic") {
  const auto a = generate_matrix(Ensemble::rpr, 12, 20, 77);
  const auto b = generate_matrix(Ensemble::rpr, 12, 20, 77);
  const auto c = generate_matrix(Ensemble::rpr, 12, 20, 78);
  CHECK(bitwise_equal(a.entries, b.entries));
  CHECK_FALSE(bitwise_equal(a.entries, c.entries));
}

TEST_CASE("bernoulli entries are +-1/sqrt(M) in near-equal proportion") {
  const auto mat = generate_matrix(Ensemble::bernoulli, 64, 64, 5);
  const double v = 1.0 / 8.0;
  std::int64_t plus = 0;
  for (Eigen::Index i = 0; i < mat.entries.size(); ++i) {
    CHECK(mat.entries(i).imag() == 0.0);
    const double re = mat.entries(i).real();
    CHECK((re == v || re == -v));
    if (re > 0) ++plus;
  }
  // 4096 fair signs: 3 sigma is about 96 around 2048.
  CHECK(plus > 2048 - 3 * 32);
  CHECK(plus < 2048 + 3 * 32);
}

TEST_CASE("gaussian ensembles have per-entry second moment 1/M") {
  const std::int64_t m = 50;
  const auto complex_mat = generate_matrix(Ensemble::complex_gaussian, m, 400, 13);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < complex_mat.entries.size(); ++i) {
    acc += std::norm(complex_mat.entries(i));
  }
  const double n_entries = static_cast<double>(complex_mat.entries.size());
  // E|entry|^2 = 1/M; |entry|^2 has std 1/M, so the mean over 20000
  // entries has 3 sigma ~ 0.021/M.
  CHECK(acc / n_entries == doctest::Approx(1.0 / m).epsilon(0.03));

  const auto real_mat = generate_matrix(Ensemble::real_gaussian, m, 400, 13);
  acc = 0.0;
  for (Eigen::Index i = 0; i < real_mat.entries.size(); ++i) {
    CHECK(real_mat.entries(i).imag() == 0.0);
    acc += std::norm(real_mat.entries(i));
  }
  // Real case: |entry|^2 has std sqrt(2)/M; wider tolerance.
  CHECK(acc / n_entries == doctest::Approx(1.0 / m).epsilon(0.05));
}

TEST_CASE("dft ensemble is orthonormal with constant modulus") {
  const auto mat = generate_matrix(Ensemble::dft, 8, 6, 12345);
  const Eigen::MatrixXcd gram =
      mat.entries.adjoint() * mat.entries - Eigen::MatrixXcd::Identity(6, 6);
  CHECK(gram.cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index i = 0; i < mat.entries.size(); ++i) {
    CHECK(std::abs(mat.entries(i)) ==
          doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(generate_matrix(Ensemble::dft, 4, 5, 0), DimensionError);
}

TEST_CASE("generate_matrix rejects non-positive dimensions") {
  CHECK_THROWS_AS(generate_matrix(Ensemble::rpr, 0, 4, 0), DimensionError);
  CHECK_THROWS_AS(generate_matrix(Ensemble::rpr, 4, 0, 0), DimensionError);
}

TEST_CASE("coherence matches the brute-force oracle") {
  const auto mat = generate_matrix(Ensemble::rpr, 8, 12, 31);
  CHECK(coherence(mat) ==
        doctest::Approx(oracle::coherence_bruteforce(mat.entries)).epsilon(1e-14));

  const auto bern = generate_matrix(Ensemble::bernoulli, 10, 7, 3);
  CHECK(coherence(bern) ==
        doctest::Approx(oracle::coherence_bruteforce(bern.entries)).epsilon(1e-14));
}

TEST_CASE("coherence of known matrices") {
  // Columns [1, 0] and [1/sqrt(2), 1/sqrt(2)]: inner product 1/sqrt(2).
  Eigen::MatrixXcd a(2, 2);
  a << Complex(1, 0), Complex(1.0 / std::sqrt(2.0), 0), Complex(0, 0),
      Complex(1.0 / std::sqrt(2.0), 0);
  CHECK(coherence(a) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  // Orthonormal columns: coherence 0.
  const auto dft = generate_matrix(Ensemble::dft, 8, 8, 0);
  CHECK(coherence(dft) < 1e-12);

  Eigen::MatrixXcd single(3, 1);
  single.setOnes();
  CHECK_THROWS_AS(coherence(single), DimensionError);
}

TEST_CASE("signal support is sorted, distinct, in range, unit-valued") {
  const auto sig = generate_signal(50, 7, SignalMode::unit_coefficients, 99);
  CHECK(sig.dim == 50);
  CHECK(sig.sparsity() == 7);
  std::set<Index> seen;
  Index prev = -1;
  for (const Index idx : sig.support) {
    CHECK(idx >= 0);
    CHECK(idx < 50);
    CHECK(idx > prev);  // sorted strictly ascending implies distinct
    prev = idx;
    seen.insert(idx);
  }
  CHECK(seen.size() == 7);
  for (Index i = 0; i < sig.values.size(); ++i) {
    CHECK(sig.values(i) == Complex(1.0, 0.0));
  }
}

TEST_CASE("signal generation is seed-deterministic and covers all supports") {
  const auto a = generate_signal(40, 5, SignalMode::unit_coefficients, 7);
  const auto b = generate_signal(40, 5, SignalMode::unit_coefficients, 7);
  CHECK(a.support == b.support);

  // N=4, K=2 has 6 possible supports; 500 draws should hit all of them.
  std::set<std::vector<Index>> supports;
  for (std::uint64_t s = 0; s < 500; ++s) {
    supports.insert(generate_signal(4, 2, SignalMode::unit_coefficients, s).support);
  }
  CHECK(supports.size() == 6);
}

TEST_CASE("signal index frequencies are uniform") {
  // Each of 16 indices should appear in a K=4 support with probability
  // 1/4; over 4000 draws that is 1000 +- 3*sqrt(4000*0.25*0.75) ~ 82.
  std::vector<std::int64_t> hits(16, 0);
  for (std::uint64_t s = 0; s < 4000; ++s) {
    const auto sig = generate_signal(16, 4, SignalMode::unit_coefficients, s * 31 + 1);
    for (const Index idx : sig.support) ++hits[static_cast<std::size_t>(idx)];
  }
  for (const std::int64_t h : hits) {
    CHECK(h > 1000 - 3 * 82);
    CHECK(h < 1000 + 3 * 82);
  }
}

TEST_CASE("signal generation validates its inputs") {
  CHECK_THROWS_AS(generate_signal(5, 6, SignalMode::unit_coefficients, 0),
                  DimensionError);
  CHECK_THROWS_AS(generate_signal(0, 1, SignalMode::unit_coefficients, 0),
                  DimensionError);
  CHECK_THROWS_AS(generate_signal(5, 0, SignalMode::unit_coefficients, 0),
                  DimensionError);
  // given mode: wrong value count, and zero coefficients.
  CHECK_THROWS_AS(generate_signal(5, 2, SignalMode::given, 0, {Complex(1, 0)}),
                  DimensionError);
  CHECK_THROWS_AS(
      generate_signal(5, 2, SignalMode::given, 0, {Complex(1, 0), Complex(0, 0)}),
      DomainError);
}

TEST_CASE("given mode places supplied coefficients in support order") {
  const std::vector<Complex> values{Complex(2, 1), Complex(-3, 0.5)};
  const auto sig = generate_signal(10, 2, SignalMode::given, 4, values);
  CHECK(sig.values(0) == values[0]);
  CHECK(sig.values(1) == values[1]);
  const auto dense = sig.dense();
  CHECK(dense(sig.support[0]) == values[0]);
  CHECK(dense(sig.support[1]) == values[1]);
  CHECK(dense.cwiseAbs().sum() ==
        doctest::Approx(std::abs(values[0]) + std::abs(values[1])));
}

TEST_CASE("measure equals the dense multiply oracle") {
  const auto mat = generate_matrix(Ensemble::rpr, 12, 30, 21);
  const auto sig = generate_signal(30, 4, SignalMode::unit_coefficients, 22);
  const auto meas = measure(mat, sig);
  const Eigen::VectorXcd expected =
      oracle::multiply_bruteforce(mat.entries, sig.dense());
  CHECK((meas.vector - expected).norm() < 1e-14);
  REQUIRE(meas.signal.has_value());
  CHECK(meas.signal->support == sig.support);

  const auto small = generate_signal(29, 4, SignalMode::unit_coefficients, 22);
  CHECK_THROWS_AS(measure(mat, small), DimensionError);
}

TEST_CASE("ensemble and signal-mode names round-trip") {
  for (const Ensemble e : {Ensemble::rpr, Ensemble::bernoulli,
                           Ensemble::complex_gaussian, Ensemble::real_gaussian,
                           Ensemble::dft}) {
    CHECK(ensemble_from_string(to_string(e)) == e);
  }
  CHECK(ensemble_from_string("gaussian") == Ensemble::complex_gaussian);
  CHECK_THROWS_AS(ensemble_from_string("fourier"), DomainError);

  for (const SignalMode m : {SignalMode::unit_coefficients, SignalMode::given}) {
    CHECK(signal_mode_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(signal_mode_from_string("random"), DomainError);
}
