// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bctas/waveform.hpp"
#include "catch_amalgamated.hpp"

using namespace bctas;
using namespace bctas::waveform;
using bctas::numerics::RngStream;
using Catch::Approx;

namespace {

Bits random_bits(RngStream& rng, std::size_t n) {
  Bits b(n);
  for (auto& x : b) x = rng.bit();
  return b;
}

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

CVector random_qam(RngStream& rng, std::size_t n, unsigned m) {
  return qam_map(random_bits(rng, n * bits_per_symbol(m)), m);
}

}  // namespace

TEST_CASE("constellations have unit mean energy") {
  for (unsigned m : {16u, 64u}) {
    const auto& c = constellation(m);
    REQUIRE(c.size() == m);
    double e = 0.0;
    for (const auto& s : c) e += std::norm(s);
    CHECK(e / m == Approx(1.0).margin(1e-12));
  }
  CHECK_THROWS_AS(bits_per_symbol(32), std::domain_error);
  CHECK_THROWS_AS(qam_map(Bits{0, 1, 0}, 16), std::domain_error);
}

TEST_CASE("16-QAM label 0000 is the (-3,-3) corner") {
  // In-phase Gray bits 00 -> level 0 -> amplitude -3, same on quadrature.
  const auto s = qam_map(Bits{0, 0, 0, 0}, 16);
  REQUIRE(s.size() == 1);
  CHECK(std::abs(s[0]) == Approx(std::sqrt(18.0 / 10.0)).margin(1e-12));
  CHECK(s[0].real() == Approx(-3.0 / std::sqrt(10.0)).margin(1e-12));
  CHECK(s[0].imag() == Approx(-3.0 / std::sqrt(10.0)).margin(1e-12));
  // 0010: quadrature Gray 10 -> level 3 -> +3.
  const auto t = qam_map(Bits{0, 0, 1, 0}, 16);
  CHECK(t[0].imag() == Approx(3.0 / std::sqrt(10.0)).margin(1e-12));
}

TEST_CASE("neighbouring levels differ in one bit") {
  for (unsigned m : {16u, 64u}) {
    const auto& c = constellation(m);
    const double d_min = 2.0 / std::sqrt(m == 16 ? 10.0 : 42.0);
    for (unsigned a = 0; a < m; ++a) {
      for (unsigned b = a + 1; b < m; ++b) {
        if (std::abs(std::abs(c[a] - c[b]) - d_min) < 1e-9) {
          CHECK(std::popcount(a ^ b) == 1);
        }
      }
    }
  }
}

TEST_CASE("qam round trip") {
  RngStream rng(3, 1);
  for (unsigned m : {16u, 64u}) {
    for (int i = 0; i < 10000; ++i) {
      const auto b = random_bits(rng, bits_per_symbol(m));
      REQUIRE(qam_demap(qam_map(b, m), m) == b);
    }
  }
}

TEST_CASE("small perturbations decode to the original label") {
  RngStream rng(3, 2);
  const double half = 1.0 / std::sqrt(10.0);
  const auto& c = constellation(16);
  for (unsigned label = 0; label < 16; ++label) {
    for (int i = 0; i < 50; ++i) {
      const double r = 0.99 * half * rng.uniform();
      const double th = 2.0 * std::numbers::pi * rng.uniform();
      const CVector rx{c[label] + std::polar(r / std::sqrt(2.0), th)};
      const auto b = qam_demap(rx, 16);
      unsigned got = 0;
      for (auto bit : b) got = (got << 1) | bit;
      REQUIRE(got == label);
    }
  }
}

TEST_CASE("16-QAM AWGN BER at 10 dB") {
  // Exact Gray 4-PAM per axis: (3 Q(a) + 2 Q(3a) - Q(5a)) / 4, a = sqrt(Es/(5 N0)).
  const double es_n0 = 10.0;
  const double a = std::sqrt(es_n0 / 5.0);
  const double oracle = (3.0 * q_func(a) + 2.0 * q_func(3.0 * a) - q_func(5.0 * a)) / 4.0;

  RngStream rng(5, 1);
  constexpr std::size_t kSymbols = 1000000;
  const auto bits = random_bits(rng, kSymbols * 4);
  auto rx = qam_map(bits, 16);
  for (auto& s : rx) s += numerics::gaussian_complex(rng, 1.0 / es_n0);
  const auto got = qam_demap(rx, 16);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) errors += got[i] != bits[i];
  const double ber = static_cast<double>(errors) / static_cast<double>(bits.size());
  CHECK(std::abs(ber - oracle) / oracle < 0.05);
}

TEST_CASE("single antenna ofdm round trip") {
  RngStream rng(7, 1);
  for (std::size_t os : {1u, 4u}) {
    OfdmParams p;
    p.n_sc = 64;
    p.n_cp = 16;
    p.oversample = os;
    const std::size_t n_syms = 3;
    const OfdmGrid grid{p, 16, n_syms, random_qam(rng, n_syms * p.n_sc, 16)};
    const auto w = ofdm_modulate(grid, SelectionMap(p.n_sc, 0), 1);
    REQUIRE(w.antennas.size() == 1);
    REQUIRE(w.antennas[0].size() == n_syms * p.symbol_len());
    const auto x = ofdm_demodulate(w.antennas[0], p, n_syms);
    for (std::size_t i = 0; i < x.size(); ++i) {
      REQUIRE(std::abs(x[i] - grid.symbols[i]) < 1e-12);
    }
    // The cyclic prefix repeats the tail of the body.
    const auto& s = w.antennas[0];
    for (std::size_t i = 0; i < p.cp_len(); ++i) {
      REQUIRE(s[i] == s[i + p.fft_len()]);
    }
  }
}

TEST_CASE("alternating map leaves odd subcarriers empty on antenna 0") {
  RngStream rng(7, 2);
  OfdmParams p;
  p.n_sc = 64;
  p.n_cp = 16;
  const OfdmGrid grid{p, 16, 1, random_qam(rng, p.n_sc, 16)};
  SelectionMap map(p.n_sc);
  for (std::size_t k = 0; k < p.n_sc; ++k) map[k] = static_cast<std::uint32_t>(k % 2);
  const auto w = ofdm_modulate(grid, map, 2);
  const auto x0 = ofdm_demodulate(w.antennas[0], p, 1);
  const auto x1 = ofdm_demodulate(w.antennas[1], p, 1);
  for (std::size_t k = 0; k < p.n_sc; ++k) {
    if (k % 2) {
      CHECK(std::abs(x0[k]) < 1e-13);
    } else {
      CHECK(std::abs(x1[k]) < 1e-13);
    }
    CHECK(std::abs(x0[k] + x1[k] - grid.symbols[k]) < 1e-12);
  }
}

TEST_CASE("selection moves energy between antennas without creating it") {
  RngStream rng(7, 3);
  OfdmParams p;
  p.n_sc = 256;
  p.n_cp = 0;
  p.oversample = 4;
  const OfdmGrid grid{p, 64, 1, random_qam(rng, p.n_sc, 64)};
  SelectionMap map(p.n_sc);
  for (auto& j : map) j = static_cast<std::uint32_t>(rng.uniform_index(4));
  const auto w = ofdm_modulate(grid, map, 4);
  double total = 0.0;
  for (const auto& a : w.antennas) total += numerics::energy(a);
  CHECK(total == Approx(numerics::energy(grid.symbols)).margin(1e-10));
}

TEST_CASE("bad selection maps are rejected") {
  OfdmParams p;
  p.n_sc = 8;
  p.n_cp = 2;
  const OfdmGrid grid{p, 16, 1, CVector(8, Complex{1.0, 0.0})};
  CHECK_THROWS_AS(ofdm_modulate(grid, SelectionMap(8, 2), 2), std::domain_error);
  CHECK_THROWS_AS(ofdm_modulate(grid, SelectionMap(7, 0), 2), std::domain_error);
}

TEST_CASE("windowed symbols overlap by the transition length") {
  RngStream rng(7, 4);
  OfdmParams p;
  p.n_sc = 64;
  p.n_cp = 16;
  p.oversample = 2;
  p.transition = 6;
  const std::size_t n_syms = 4;
  const OfdmGrid grid{p, 16, n_syms, random_qam(rng, n_syms * p.n_sc, 16)};
  const auto w = ofdm_modulate(grid, SelectionMap(p.n_sc, 0), 1);
  REQUIRE(w.antennas[0].size() == n_syms * p.symbol_len() + p.transition);
  // The ramp sits inside the prefix, so the FFT window is untouched.
  const auto x = ofdm_demodulate(w.antennas[0], p, n_syms);
  for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(x[i] - grid.symbols[i]) < 1e-12);
  p.transition = p.cp_len() + 1;
  const OfdmGrid bad{p, 16, 1, CVector(p.n_sc, Complex{1.0, 0.0})};
  CHECK_THROWS_AS(ofdm_modulate(bad, SelectionMap(p.n_sc, 0), 1), std::domain_error);
}

TEST_CASE("papr definition") {
  CHECK(papr_db(CVector(64, std::polar(1.0, 0.3))) == Approx(0.0).margin(1e-12));
  CVector impulse(100, Complex{});
  impulse[17] = {0.0, 2.0};
  CHECK(papr_db(impulse) == Approx(20.0).margin(1e-12));
  CHECK_THROWS_AS(papr_db(CVector(8, Complex{})), std::domain_error);
  CHECK_THROWS_AS(papr_db(CVector{}), std::domain_error);
}

TEST_CASE("full 256-subcarrier ofdm papr at ccdf 1e-2") {
  RngStream rng(11, 1);
  constexpr std::size_t kSymbols = 100000;
  std::vector<double> papr(kSymbols);
  for (auto& v : papr) v = papr_db(ofdm_symbol(random_qam(rng, 256, 16), 4));
  const double at = value_at_ccdf(papr, 1e-2);
  CHECK(at >= 9.0);
  CHECK(at <= 10.5);
  const double t[] = {at};
  CHECK(ccdf(papr, t)[0] <= 1e-2);
}

TEST_CASE("ccdf counts strict exceedances") {
  const std::vector<double> s{1.0, 2.0, 3.0};
  const std::vector<double> t{0.0, 1.0, 2.0, 3.0, 4.0};
  const auto p = ccdf(s, t);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == Approx(2.0 / 3.0));
  CHECK(p[2] == Approx(1.0 / 3.0));
  CHECK(p[3] == 0.0);
  CHECK(p[4] == 0.0);
  RngStream rng(1, 1);
  std::vector<double> x(1000), grid;
  for (auto& v : x) v = rng.normal();
  for (int i = -40; i <= 40; ++i) grid.push_back(0.1 * i);
  const auto q = ccdf(x, grid);
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(q[i] >= 0.0);
    CHECK(q[i] <= 1.0);
    if (i) CHECK(q[i] <= q[i - 1]);
  }
}
