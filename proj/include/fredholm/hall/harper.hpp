#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "../errors.hpp"
#include "../laurent.hpp"
#include "../parallel.hpp"

namespace fredholm::hall {

/// Flux p/q per unit cell, gcd(p, q) = 1.
struct FluxRational {
  int p = 1;
  int q = 1;

  FluxRational() = default;
  FluxRational(int p_, int q_) : p(p_), q(q_) {
    if (p < 1 || q < 1) throw InvalidArgument("flux p/q needs positive p and q");
    if (std::gcd(p, q) != 1)
      throw InvalidArgument("flux " + std::to_string(p) + "/" + std::to_string(q) + " is not in lowest terms");
  }
  double value() const noexcept { return static_cast<double>(p) / q; }
};

/// Magnetic Bloch matrix of the isotropic square-lattice Harper model
/// (hopping 1). Diagonal 2 cos(2 pi (p/q) n + k2); unit hopping between
/// neighbouring sites of the q-site magnetic cell; the wrap-around hop
/// carries e^{+-i k1}. For q = 1 and q = 2 the hops coincide and add.
inline Eigen::MatrixXcd harper_bloch_matrix(const FluxRational& flux, double k1, double k2) {
  const int q = flux.q;
  const double alpha = flux.value();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(q, q);
  for (int n = 0; n < q; ++n) H(n, n) = 2.0 * std::cos(kTwoPi * alpha * n + k2);
  if (q == 1) {
    H(0, 0) += 2.0 * std::cos(k1);
    return H;
  }
  for (int n = 0; n + 1 < q; ++n) {
    H(n, n + 1) += 1.0;
    H(n + 1, n) += 1.0;
  }
  const cplx phase = std::polar(1.0, k1);
  H(q - 1, 0) += phase;
  H(0, q - 1) += std::conj(phase);
  return H;
}

struct Band {
  double lo = 0.0;
  double hi = 0.0;
};

struct HarperSpectrum {
  FluxRational flux;
  std::vector<Band> bands;                // q bands, ascending
  std::vector<bool> gap_open;             // q - 1 gaps
  std::vector<std::optional<int>> gap_labels;  // sigma_j for open gaps, j = 1..q-1
  int k_grid_n = 0;
};

/// sigma with p sigma = j (mod q), |sigma| < q/2. Throws CentralGap for even
/// q and j = q/2, where the representative would be +-q/2.
inline int solve_diophantine(int p, int q, int j) {
  if (p < 1 || q < 1 || std::gcd(p, q) != 1) throw InvalidArgument("solve_diophantine: need coprime positive p, q");
  if (j < 0 || j > q) throw InvalidArgument("solve_diophantine: need 0 <= j <= q");
  if (j == 0 || j == q) return 0;
  // Modular inverse of p by the extended Euclidean algorithm.
  long r0 = q, r1 = p % q, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const long quot = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - quot * r1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - quot * t1);
  }
  long s = ((t0 * j) % q + q) % q;  // in [0, q)
  if (2 * s == q) throw CentralGap("central gap of even q = " + std::to_string(q) + " has no unique label");
  if (2 * s > q) s -= q;
  return static_cast<int>(s);
}

inline constexpr double kDefaultGapTol = 1e-8;

struct HarperOptions {
  double gap_tol = kDefaultGapTol;  // relative to the total bandwidth
};

inline HarperSpectrum harper_bands(const FluxRational& flux, int k_grid_n = 64, const HarperOptions& opt = {}) {
  if (k_grid_n < 8) throw InvalidArgument("harper_bands: k_grid_n must be >= 8");
  const int q = flux.q;
  HarperSpectrum out;
  out.flux = flux;
  out.k_grid_n = k_grid_n;
  out.bands.assign(static_cast<std::size_t>(q), {std::numeric_limits<double>::infinity(),
                                                 -std::numeric_limits<double>::infinity()});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (int a = 0; a < k_grid_n; ++a) {
    const double k1 = kTwoPi * a / k_grid_n;
    for (int b = 0; b < k_grid_n; ++b) {
      const double k2 = kTwoPi * b / k_grid_n;
      solver.compute(harper_bloch_matrix(flux, k1, k2), Eigen::EigenvaluesOnly);
      const auto& ev = solver.eigenvalues();  // ascending
      for (int j = 0; j < q; ++j) {
        out.bands[j].lo = std::min(out.bands[j].lo, ev(j));
        out.bands[j].hi = std::max(out.bands[j].hi, ev(j));
      }
    }
  }
  const double width = out.bands.back().hi - out.bands.front().lo;
  const double tol = opt.gap_tol * std::max(width, 1.0);
  for (int j = 1; j < q; ++j) {
    bool open = out.bands[j].lo - out.bands[j - 1].hi > tol;
    // Even q: the central gap is treated as closed.
    if (q % 2 == 0 && 2 * j == q) open = false;
    out.gap_open.push_back(open);
    out.gap_labels.push_back(open ? std::optional<int>(solve_diophantine(flux.p, q, j)) : std::nullopt);
  }
  return out;
}

struct BandConductances {
  std::vector<int> values;       // one per band; the central pair merged for even q
  bool merged_central = false;
};

/// sigma_j - sigma_{j-1} with sigma_0 = sigma_q = 0. For even q the two
/// central bands are merged (their shared gap has no label).
inline BandConductances band_conductances(int p, int q) {
  if (p < 1 || q < 1 || std::gcd(p, q) != 1) throw InvalidArgument("band_conductances: need coprime positive p, q");
  BandConductances out;
  int prev = 0;
  for (int j = 1; j <= q; ++j) {
    if (q % 2 == 0 && 2 * j == q) {
      out.merged_central = true;
      continue;
    }
    const int s = solve_diophantine(p, q, j);
    out.values.push_back(s - prev);
    prev = s;
  }
  return out;
}

struct ButterflyRow {
  int p = 0;
  int q = 0;
  int band = 0;  // 1-based
  double lo = 0.0;
  double hi = 0.0;
  std::optional<int> label_below;
  std::optional<int> label_above;
};

using ButterflyDataset = std::vector<ButterflyRow>;

inline constexpr int kMaxButterflyQ = 50;

/// Every coprime p/q with 1 <= p <= q <= q_max, sorted by (q, p, band).
inline ButterflyDataset butterfly(int q_max, int k_grid_n = 64, unsigned threads = 0, const HarperOptions& opt = {}) {
  if (q_max < 1 || q_max > kMaxButterflyQ)
    throw InvalidArgument("butterfly: q_max must be in [1, " + std::to_string(kMaxButterflyQ) + "]");
  std::vector<FluxRational> fluxes;
  for (int q = 1; q <= q_max; ++q)
    for (int p = 1; p <= q; ++p)
      if (std::gcd(p, q) == 1) fluxes.emplace_back(p, q);

  std::vector<HarperSpectrum> spectra(fluxes.size());
  parallel_for(fluxes.size(), resolve_threads(threads),
               [&](std::size_t i) { spectra[i] = harper_bands(fluxes[i], k_grid_n, opt); });

  ButterflyDataset rows;
  for (const auto& s : spectra) {
    const int q = s.flux.q;
    for (int j = 0; j < q; ++j) {
      ButterflyRow r{s.flux.p, q, j + 1, s.bands[j].lo, s.bands[j].hi, std::nullopt, std::nullopt};
      if (j > 0) r.label_below = s.gap_labels[j - 1];
      if (j + 1 < q) r.label_above = s.gap_labels[j];
      rows.push_back(r);
    }
  }
  return rows;
}

/// CSV with header p,q,band,lo,hi,label_below,label_above; closed gaps and
/// spectrum edges leave the label empty.
inline void write_butterfly_csv(const ButterflyDataset& rows, std::ostream& out) {
  out << "p,q,band,lo,hi,label_below,label_above\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.15g,%.15g,", r.p, r.q, r.band, r.lo, r.hi);
    out << buf;
    if (r.label_below) out << *r.label_below;
    out << ',';
    if (r.label_above) out << *r.label_above;
    out << '\n';
  }
}

inline void write_butterfly_csv(const ButterflyDataset& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_butterfly_csv(rows, out);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace fredholm::hall
