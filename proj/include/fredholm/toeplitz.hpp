#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "errors.hpp"
#include "symbol.hpp"
#include "winding.hpp"

namespace fredholm {

inline constexpr int kMaxTruncation = 4096;
inline constexpr double kDefaultDecayThreshold = 1e-6;

/// Fourier coefficients c_{-M}..c_{M}; values[n + M] = c_n.
struct FourierCoeffs {
  std::vector<cplx> values;
  bool alias_risk = false;  // M beyond the native grid's Nyquist limit

  int half_width() const noexcept { return (static_cast<int>(values.size()) - 1) / 2; }
  cplx operator[](int n) const noexcept { return values[static_cast<std::size_t>(n + half_width())]; }
};

inline FourierCoeffs fourier_coeffs(const CircleSymbol& f, int M) {
  if (M < 0) throw InvalidArgument("fourier_coeffs: M must be nonnegative");
  FourierCoeffs out;
  out.values.assign(static_cast<std::size_t>(2 * M + 1), 0.0);
  if (!f.is_sampled()) {
    const LaurentPolynomial p = f.as_laurent();
    for (int n = -M; n <= M; ++n) out.values[static_cast<std::size_t>(n + M)] = p.coeff(n);
    return out;
  }
  // Direct DFT over the native grid.
  const auto& s = std::get<SampledSymbol>(f.repr());
  const auto N = static_cast<long>(s.size());
  out.alias_risk = M > N / 2;
  for (int n = -M; n <= M; ++n) {
    cplx acc = 0.0;
    for (long k = 0; k < N; ++k) {
      // Reduce n*k mod N so the twiddle angle stays small and exact.
      const long r = ((static_cast<long>(n) * k) % N + N) % N;
      acc += s.values[static_cast<std::size_t>(k)] * std::polar(1.0, -kTwoPi * static_cast<double>(r) / N);
    }
    out.values[static_cast<std::size_t>(n + M)] = acc / static_cast<double>(N);
  }
  return out;
}

/// N x N section of T_f: entry (j, k) = c_{j-k}.
struct ToeplitzTruncation {
  int size = 0;
  Eigen::MatrixXcd entries;
  CircleSymbol symbol;
};

inline ToeplitzTruncation build_truncation(const CircleSymbol& f, int N) {
  if (N < 1) throw InvalidArgument("build_truncation: N must be >= 1");
  const auto c = fourier_coeffs(f, N - 1);
  Eigen::MatrixXcd T(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) T(j, k) = c[j - k];
  return {N, std::move(T), f};
}

/// All singular values, descending.
inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& A) {
  if (A.rows() > kMaxTruncation || A.cols() > kMaxTruncation)
    throw SizeExceeded("singular values: size " + std::to_string(A.rows()) + " exceeds cap " +
                       std::to_string(kMaxTruncation));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues();
}

/// The k smallest singular values, ascending.
inline std::vector<double> smallest_singular_values(const ToeplitzTruncation& T, int k) {
  if (T.size > kMaxTruncation) throw SizeExceeded("truncation larger than " + std::to_string(kMaxTruncation));
  if (k < 1 || k > T.size) throw InvalidArgument("smallest_singular_values: need 1 <= k <= N");
  const Eigen::VectorXd s = singular_values(T.entries);
  std::vector<double> out;
  for (int i = 0; i < k; ++i) out.push_back(s(s.size() - 1 - i));
  return out;
}

struct SpectralEvidence {
  int near_zero_count = 0;
  bool agrees_with_winding = false;
  int winding = 0;
  int size = 0;               // N; the second section has 2N
  double sigma_max = 0.0;
};

/// Counts singular values of the N and 2N sections below
/// decay_threshold * sigma_max. The count is accepted when it is the same at
/// both sizes, the counted values do not grow, and the first uncounted value
/// is not itself collapsing. Anything else is Inconclusive.
inline SpectralEvidence spectral_index_evidence(const CircleSymbol& f, int N,
                                                double decay_threshold = kDefaultDecayThreshold,
                                                const WindingOptions& wopt = {}) {
  if (f.is_sampled()) throw InvalidArgument("spectral_index_evidence: needs a Laurent or Fourier symbol");
  if (!(decay_threshold > 0.0)) throw InvalidArgument("decay_threshold must be positive");
  if (2 * N > kMaxTruncation) throw SizeExceeded("spectral_index_evidence: 2N exceeds " + std::to_string(kMaxTruncation));
  const auto w = winding_number(f, wopt);
  if (!(w.min_modulus > 10.0 * wopt.vanish_tol))
    throw InvalidArgument("spectral_index_evidence: symbol too close to vanishing");

  const Eigen::VectorXd s1 = singular_values(build_truncation(f, N).entries);
  const Eigen::VectorXd s2 = singular_values(build_truncation(f, 2 * N).entries);
  const double smax = std::max(s1(0), s2(0));
  const double cut = decay_threshold * smax;
  auto count_below = [cut](const Eigen::VectorXd& s) {
    int c = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) c += s(i) < cut ? 1 : 0;
    return c;
  };
  const int c1 = count_below(s1);
  const int c2 = count_below(s2);
  if (c1 != c2) throw Inconclusive("near-zero singular value count changed between N and 2N", c1, c2);

  // Ascending access helper.
  auto asc = [](const Eigen::VectorXd& s, int i) { return s(s.size() - 1 - i); };
  const double noise = 1e-13 * smax;
  for (int i = 0; i < c1; ++i)
    if (asc(s2, i) > std::max(asc(s1, i), noise))
      throw Inconclusive("counted singular values grew between N and 2N", c1, c2);
  if (c1 < N) {
    const double next1 = asc(s1, c1);
    const double next2 = asc(s2, c1);
    if (next2 < 0.5 * next1)
      throw Inconclusive("first uncounted singular value is still decaying", c1, c2);
  }

  SpectralEvidence ev;
  ev.near_zero_count = c1;
  ev.winding = w.winding;
  ev.agrees_with_winding = c1 == std::abs(w.winding);
  ev.size = N;
  ev.sigma_max = smax;
  return ev;
}

/// Row-major CSV, one `re,im` pair per entry.
inline void write_truncation_csv(const ToeplitzTruncation& T, std::ostream& out) {
  char buf[64];
  for (int j = 0; j < T.size; ++j) {
    for (int k = 0; k < T.size; ++k) {
      const cplx v = T.entries(j, k);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", v.real(), v.imag());
      if (k > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

inline void write_truncation_csv(const ToeplitzTruncation& T, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_truncation_csv(T, out);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace fredholm
