#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles/cubic_eigen.hpp"
#include "../oracles/nv_closed_form.hpp"
#include "nvdac/error.hpp"
#include "nvdac/frames.hpp"
#include "nvdac/spin_model.hpp"
#include "random_inputs.hpp"

using namespace nvdac;

namespace {

NvFrameInputs zero_inputs() { return {}; }

// Spin-1 operators typed out by hand, basis (+1, 0, -1).
Eigen::Matrix3cd hand_hamiltonian(double d, double gamma, const Vec3& b) {
  const double r = 1.0 / std::sqrt(2.0);
  const std::complex<double> i(0, 1);
  Eigen::Matrix3cd sx, sy, sz;
  sx << 0, r, 0, r, 0, r, 0, r, 0;
  sy << 0, -i * r, 0, i * r, 0, -i * r, 0, i * r, 0;
  sz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  return d * sz * sz + gamma * (b.x() * sx + b.y() * sy + b.z() * sz);
}

}  // namespace

TEST_CASE("zero stress and zero field give both transitions at D") {
  const auto p = nv_transitions(ZfsParams{}, StressCouplings{}, zero_inputs());
  CHECK(std::abs(p.nu_minus - 2870.0) < 1e-9);
  CHECK(std::abs(p.nu_plus - 2870.0) < 1e-9);
  CHECK(p.splitting() == 0.0);
  CHECK_FALSE(p.degenerate);
}

TEST_CASE("on-axis field gives linear Zeeman splitting") {
  NvFrameInputs in;
  in.field_nv = Vec3(0, 0, 1.0);
  const auto p = nv_transitions(ZfsParams{}, StressCouplings{}, in);
  CHECK(p.nu_minus == doctest::Approx(2870.0 - 28.024).epsilon(1e-13));
  CHECK(p.nu_plus == doctest::Approx(2870.0 + 28.024).epsilon(1e-13));
  CHECK_FALSE(p.degenerate);
}

TEST_CASE("isotropic stress shifts both lines by 3 a1 p") {
  const StressCouplings k;
  for (double p : {1.0, 10.0, 77.7}) {
    NvFrameInputs in;
    in.stress_nv = p * StressTensor::Identity();
    const auto t = stress_terms(k, in.stress_nv);
    CHECK(std::abs(t.mx) < 1e-12);
    CHECK(std::abs(t.my) < 1e-12);
    const auto pair = nv_transitions(ZfsParams{}, k, in);
    CHECK(pair.nu_minus == doctest::Approx(2870.0 + 3.0 * k.a1 * p).epsilon(1e-13));
    CHECK(pair.nu_plus == doctest::Approx(2870.0 + 3.0 * k.a1 * p).epsilon(1e-13));
  }
}

TEST_CASE("invalid inputs are rejected") {
  NvFrameInputs in;
  in.stress_nv(0, 1) = 1.0;
  CHECK_THROWS_AS(build_hamiltonian(ZfsParams{}, StressCouplings{}, in), InvalidInput);
  CHECK_THROWS_AS((ZfsParams{-1.0, 28.0}.validate()), InvalidInput);
  CHECK_THROWS_AS((ZfsParams{2870.0, 0.0}.validate()), InvalidInput);
  NvFrameInputs nan_in;
  nan_in.field_nv.x() = std::nan("");
  CHECK_THROWS_AS(build_hamiltonian(ZfsParams{}, StressCouplings{}, nan_in), InvalidInput);
}

TEST_CASE("Hamiltonian is Hermitian and its trace matches the eigenvalue sum") {
  std::mt19937_64 rng(11);
  StressCouplings k;
  k.include_spin_half_mixing = true;
  k.d = 1.3;
  k.e = -0.7;
  for (int n = 0; n < 200; ++n) {
    NvFrameInputs in{testutil::random_symmetric(rng, 100.0), testutil::random_vector(rng, 10.0)};
    const SpinMatrix h = build_hamiltonian(ZfsParams{}, k, in);
    CHECK((h - h.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<SpinMatrix> es(h);
    CHECK(es.eigenvalues().sum() == doctest::Approx(h.trace().real()).epsilon(1e-12));
  }
}

TEST_CASE("spin-1/2 mixing with zero couplings changes nothing") {
  std::mt19937_64 rng(5);
  StressCouplings off;
  StressCouplings on;
  on.include_spin_half_mixing = true;
  for (int n = 0; n < 50; ++n) {
    NvFrameInputs in{testutil::random_symmetric(rng, 50.0), testutil::random_vector(rng, 5.0)};
    const auto a = nv_transitions(ZfsParams{}, off, in);
    const auto b = nv_transitions(ZfsParams{}, on, in);
    CHECK(std::abs(a.nu_minus - b.nu_minus) < 1e-9);
    CHECK(std::abs(a.nu_plus - b.nu_plus) < 1e-9);
  }
}

TEST_CASE("first-order formula examples") {
  const ZfsParams p;
  auto a = first_order_frequencies(p, 0, 0, 0);
  CHECK(a.nu_minus == 2870.0);
  CHECK(a.nu_plus == 2870.0);
  a = first_order_frequencies(p, 384, 156, 0);
  CHECK(a.nu_minus == doctest::Approx(3176.0));
  CHECK(a.nu_plus == doctest::Approx(3332.0));
  a = first_order_frequencies(p, 0, 3, 4);
  CHECK(a.splitting() == doctest::Approx(5.0));
  CHECK_THROWS_AS(first_order_frequencies(p, 0, -1, 0), InvalidInput);
}

TEST_CASE("zero-field diagonalization equals the first-order formula") {
  std::mt19937_64 rng(21);
  const StressCouplings k;
  for (int n = 0; n < 500; ++n) {
    NvFrameInputs in{testutil::random_symmetric(rng, 40.0), Vec3::Zero()};
    const auto t = stress_terms(k, in.stress_nv);
    const auto full = nv_transitions(ZfsParams{}, k, in);
    const auto fo = first_order_frequencies(ZfsParams{}, t.mz, 2.0 * std::hypot(t.mx, t.my), 0.0);
    CHECK(std::abs(full.nu_minus - fo.nu_minus) < 1e-9);
    CHECK(std::abs(full.nu_plus - fo.nu_plus) < 1e-9);
  }
}

TEST_CASE("first-order discrepancy shrinks as the field aligns with the NV axis") {
  const StressCouplings k;
  const StressTensor s = anvil_stress({0.56, 60.0});
  const auto& o = nv_orientations()[0];
  const StressTensor snv = o.rotation * s * o.rotation.transpose();
  const auto t = stress_terms(k, snv);
  const double ds = 2.0 * std::hypot(t.mx, t.my);
  double last = 1e300;
  for (double deg : {60.0, 40.0, 20.0, 10.0, 5.0, 1.0, 0.0}) {
    const double th = deg * M_PI / 180.0;
    const Vec3 b(6.0 * std::sin(th), 0.0, 6.0 * std::cos(th));
    const auto full = nv_transitions(ZfsParams{}, k, {snv, b});
    const auto fo = first_order_frequencies(ZfsParams{}, t.mz, ds, 2.0 * 28.024 * b.z());
    const double err = std::abs(full.splitting() - fo.splitting());
    CHECK(err <= last + 1e-9);
    last = err;
  }
  CHECK(last < 1e-6);
}

TEST_CASE("anvil stress at alpha 0.56, P 40 matches the closed form") {
  const StressCouplings k;
  const auto [lo, hi] = oracle::anvil_zero_field(2870.0, k.a1, k.b, 0.56, 40.0);
  const auto& o = nv_orientations()[0];
  const auto in = to_nv_frame(o, anvil_stress({0.56, 40.0}), {0.0});
  const auto pair = nv_transitions(ZfsParams{}, k, in);
  CHECK(std::abs(pair.nu_minus - lo) < 1e-9);
  CHECK(std::abs(pair.nu_plus - hi) < 1e-9);
  // published-constant ballpark: splitting about 3.9 MHz/GPa, centre about 9.7 MHz/GPa
  CHECK(pair.splitting() == doctest::Approx(3.9 * 40.0).epsilon(0.1));
  CHECK(pair.center() - 2870.0 == doctest::Approx(9.68 * 40.0).epsilon(0.1));
}

TEST_CASE("eigenvalues agree with the characteristic-cubic oracle") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 1000; ++n) {
    const auto h = testutil::random_hermitian(rng, 1000.0);
    Eigen::SelfAdjointEigenSolver<SpinMatrix> es(h);
    const auto e = oracle::hermitian_eigenvalues(h);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(es.eigenvalues()(i) - static_cast<double>(e[i])) < 1e-9);
  }
}

TEST_CASE("transitions agree with the oracle's m_s = 0 reference selection") {
  std::mt19937_64 rng(4);
  const StressCouplings k;
  for (int n = 0; n < 1000; ++n) {
    NvFrameInputs in{testutil::random_symmetric(rng, 60.0), testutil::random_vector(rng, 10.0)};
    const auto h = build_hamiltonian(ZfsParams{}, k, in);
    const auto pair = transition_frequencies(h);
    const auto f = oracle::transitions(h);
    CHECK(std::abs(pair.nu_minus - static_cast<double>(f[0])) < 1e-9);
    CHECK(std::abs(pair.nu_plus - static_cast<double>(f[1])) < 1e-9);
  }
}

TEST_CASE("pure Zeeman at an arbitrary angle matches a hand-built Hamiltonian") {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 200; ++n) {
    const Vec3 b = testutil::random_vector(rng, 10.0);
    const auto pair = nv_transitions(ZfsParams{}, StressCouplings{}, {StressTensor::Zero(), b});
    const auto f = oracle::transitions(hand_hamiltonian(2870.0, 28.024, b));
    CHECK(std::abs(pair.nu_minus - static_cast<double>(f[0])) < 1e-9);
    CHECK(std::abs(pair.nu_plus - static_cast<double>(f[1])) < 1e-9);
  }
}

TEST_CASE("degenerate flag and fully degenerate tie rule") {
  const auto zero = transition_frequencies(SpinMatrix::Zero());
  CHECK(zero.degenerate);
  CHECK(zero.nu_minus == 0.0);
  CHECK(zero.nu_plus == 0.0);
  const auto split = transition_frequencies(build_hamiltonian(ZfsParams{}, StressCouplings{}, {}));
  CHECK_FALSE(split.degenerate);
}
