// SPDX-License-Identifier: Apache-2.0

#include "bctas/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace bctas::numerics {

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("linear_to_db: input must be positive");
  }
  return 10.0 * std::log10(x);
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Twiddles and bit-reversal table for one power-of-two size.
struct Radix2Plan {
  std::size_t n = 0;
  std::vector<std::size_t> bitrev;
  std::vector<Complex> twiddle;  // exp(-j2pi k/n), k < n/2

  explicit Radix2Plan(std::size_t size) : n(size), bitrev(size), twiddle(size / 2) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) {
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      }
      bitrev[i] = r;
    }
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddle[k] = {std::cos(a), std::sin(a)};
    }
  }

  void run(std::span<Complex> x, bool inverse) const {
    for (std::size_t i = 0; i < n; ++i) {
      if (i < bitrev[i]) std::swap(x[i], x[bitrev[i]]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n / len;
      for (std::size_t start = 0; start < n; start += len) {
        for (std::size_t k = 0; k < half; ++k) {
          Complex w = twiddle[k * step];
          if (inverse) w = std::conj(w);
          const Complex u = x[start + k];
          const Complex v = x[start + k + half] * w;
          x[start + k] = u + v;
          x[start + k + half] = u - v;
        }
      }
    }
  }
};

// Bluestein chirp-z for sizes that are not a power of two.
struct BluesteinPlan {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Complex> chirp;         // exp(-j pi k^2 / n)
  std::vector<Complex> kernel_fft;    // FFT of conj(chirp), wrapped

  explicit BluesteinPlan(std::size_t size);
};

const Radix2Plan& radix2_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, Radix2Plan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Radix2Plan(n)).first;
  return it->second;
}

BluesteinPlan::BluesteinPlan(std::size_t size) : n(size), chirp(size) {
  m = 1;
  while (m < 2 * n - 1) m <<= 1;
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small for large k.
    const auto k2 = static_cast<double>((k * k) % (2 * n));
    const double a = -std::numbers::pi * k2 / static_cast<double>(n);
    chirp[k] = {std::cos(a), std::sin(a)};
  }
  kernel_fft.assign(m, Complex{});
  kernel_fft[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    kernel_fft[k] = std::conj(chirp[k]);
    kernel_fft[m - k] = std::conj(chirp[k]);
  }
  radix2_plan(m).run(kernel_fft, false);
}

const BluesteinPlan& bluestein_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, BluesteinPlan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, BluesteinPlan(n)).first;
  return it->second;
}

void bluestein(std::span<Complex> x, bool inverse) {
  const BluesteinPlan& plan = bluestein_plan(x.size());
  const std::size_t n = plan.n;
  const std::size_t m = plan.m;
  const Radix2Plan& r2 = radix2_plan(m);

  // The inverse transform is conj(FFT(conj(x))).
  std::vector<Complex> a(m, Complex{});
  for (std::size_t k = 0; k < n; ++k) {
    const Complex v = inverse ? std::conj(x[k]) : x[k];
    a[k] = v * plan.chirp[k];
  }
  r2.run(a, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= plan.kernel_fft[i];
  r2.run(a, true);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex v = a[k] * scale * plan.chirp[k];
    x[k] = inverse ? std::conj(v) : v;
  }
}

}  // namespace

void fft_in_place(std::span<Complex> data, bool inverse) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  if (is_power_of_two(n)) {
    radix2_plan(n).run(data, inverse);
  } else {
    bluestein(data, inverse);
  }
}

CVector idft_unitary(std::span<const Complex> spectrum) {
  if (spectrum.empty()) throw std::domain_error("idft_unitary: empty input");
  CVector out(spectrum.begin(), spectrum.end());
  fft_in_place(out, true);
  const double scale = 1.0 / std::sqrt(static_cast<double>(out.size()));
  for (auto& v : out) v *= scale;
  return out;
}

CVector dft_unitary(std::span<const Complex> time) {
  if (time.empty()) throw std::domain_error("dft_unitary: empty input");
  CVector out(time.begin(), time.end());
  fft_in_place(out, false);
  const double scale = 1.0 / std::sqrt(static_cast<double>(out.size()));
  for (auto& v : out) v *= scale;
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(seeded_engine(seed, stream_id)) {}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::normal() { return normal_(engine_); }

std::size_t RngStream::uniform_index(std::size_t n) {
  if (n == 0) throw std::domain_error("uniform_index: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::uint8_t RngStream::bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

Complex gaussian_complex(RngStream& rng, double variance) {
  if (variance < 0.0) throw std::domain_error("gaussian_complex: negative variance");
  if (variance == 0.0) return {0.0, 0.0};
  const double s = std::sqrt(variance / 2.0);
  const double re = rng.normal();
  const double im = rng.normal();
  return {s * re, s * im};
}

double energy(std::span<const Complex> x) {
  double e = 0.0;
  for (const auto& v : x) e += std::norm(v);
  return e;
}

double mean_power(std::span<const Complex> x) {
  if (x.empty()) return 0.0;
  return energy(x) / static_cast<double>(x.size());
}

}  // namespace bctas::numerics
