// SPDX-License-Identifier: Apache-2.0
//
// Complex arithmetic helpers, unitary DFT, decibel conversion and the keyed
// random-number streams shared by every simulation module.

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace bctas {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

namespace numerics {

/// 10^(x_db/10). All power quantities are linear internally; dB only at I/O.
double db_to_linear(double x_db);

/// 10*log10(x). Throws std::domain_error for x <= 0.
double linear_to_db(double x);

/// Inverse DFT with 1/sqrt(N) scaling, so sum |time|^2 == sum |spectrum|^2.
CVector idft_unitary(std::span<const Complex> spectrum);

/// Forward DFT with 1/sqrt(N) scaling; exact inverse of idft_unitary.
CVector dft_unitary(std::span<const Complex> time);

/// In-place unnormalized transform, exp(-j2pi nk/N) when inverse == false.
void fft_in_place(std::span<Complex> data, bool inverse);

/// Mixes an arbitrary key path into a 64-bit stream id (splitmix64 chain).
std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> keys);

/// A reproducible random stream. Identical (seed, stream_id) pairs produce
/// identical sequences no matter which thread consumes them or in what order
/// streams are created.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);
  /// A single fair bit.
  std::uint8_t bit();

  std::mt19937_64& engine() { return engine_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Circularly symmetric complex Gaussian with E[|x|^2] = variance.
/// Throws std::domain_error for negative variance.
Complex gaussian_complex(RngStream& rng, double variance);

inline double power(Complex z) { return std::norm(z); }

double energy(std::span<const Complex> x);
double mean_power(std::span<const Complex> x);

}  // namespace numerics
}  // namespace bctas
