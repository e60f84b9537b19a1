#include "rydvmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydvmc/errors.hpp"
#include "rydvmc/rng.hpp"
#include "rydvmc/threads.hpp"
#include "io_util.hpp"

namespace rydvmc {

namespace {

constexpr int kMaxSites = 20;          // 2^20 state vector ~ 8 MB
constexpr int kMaxDenseSites = 12;     // 4096^2 dense matrix ~ 134 MB
constexpr double kResidualTol = 1e-8;
constexpr int kLanczosBasisCap = 120;
constexpr int kLanczosMaxRestarts = 60;

std::size_t hilbert_dim(const HamiltonianSpec& spec) {
  return std::size_t{1} << spec.n_atoms();
}

// Diagonal matrix elements for every basis state, through the same
// accumulation as diagonal_energy so the two never disagree in the last bit.
Eigen::VectorXd diagonal_table(const HamiltonianSpec& spec) {
  const int n = spec.n_atoms();
  const auto dim = static_cast<long>(hilbert_dim(spec));
  Eigen::VectorXd diag(dim);
  parallel_for(dim, [&](long k) {
    diag[k] = diagonal_energy(spec, config_from_index(static_cast<std::uint64_t>(k), n));
  });
  return diag;
}

// y = H x with the diagonal already tabulated. Off-diagonal part: -omega/2
// between basis states differing by a single occupation flip.
void apply_with_diagonal(const HamiltonianSpec& spec, const Eigen::VectorXd& diag,
                         const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const int n = spec.n_atoms();
  const double off = -0.5 * spec.omega;
  y.resize(x.size());
  parallel_for(x.size(), [&](long k) {
    const auto bits = static_cast<std::uint64_t>(k);
    double flip_sum = 0.0;
    for (int i = 0; i < n; ++i) flip_sum += x[static_cast<long>(bits ^ (std::uint64_t{1} << i))];
    y[k] = diag[k] * x[k] + off * flip_sum;
  });
}

// Sign-fix, clamp numerical negatives, renormalize. Perron-Frobenius for the
// nonpositive off-diagonal guarantees the true ground state is entrywise
// nonnegative; the solver may hand us its negation or tiny negative noise.
void finalize_amplitudes(Eigen::VectorXd& psi) {
  long imax = 0;
  psi.cwiseAbs().maxCoeff(&imax);
  if (psi[imax] < 0.0) psi = -psi;
  for (long k = 0; k < psi.size(); ++k) {
    if (psi[k] < 0.0 && psi[k] >= -1e-12) psi[k] = 0.0;
  }
  psi /= psi.norm();
}

double residual_norm(const HamiltonianSpec& spec, const Eigen::VectorXd& diag,
                     const Eigen::VectorXd& psi, double energy) {
  Eigen::VectorXd hpsi;
  apply_with_diagonal(spec, diag, psi, hpsi);
  return (hpsi - energy * psi).norm();
}

}  // namespace

Configuration config_from_index(std::uint64_t index, int n_sites) {
  if (n_sites < 0 || n_sites > 63) {
    throw std::invalid_argument("config_from_index: n_sites out of range");
  }
  Configuration sigma(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i) sigma[static_cast<std::size_t>(i)] = (index >> i) & 1u;
  return sigma;
}

std::uint64_t index_of(const Configuration& sigma) {
  if (sigma.size() > 63) throw std::invalid_argument("index_of: configuration too long");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i]) index |= std::uint64_t{1} << i;
  }
  return index;
}

void apply_hamiltonian(const HamiltonianSpec& spec, const Eigen::VectorXd& x,
                       Eigen::VectorXd& y) {
  const auto dim = static_cast<long>(hilbert_dim(spec));
  if (x.size() != dim) {
    throw std::invalid_argument("apply_hamiltonian: vector has length " +
                                std::to_string(x.size()) + ", expected " + std::to_string(dim));
  }
  const Eigen::VectorXd diag = diagonal_table(spec);
  apply_with_diagonal(spec, diag, x, y);
}

ExactGroundState ground_state_dense(const HamiltonianSpec& spec) {
  const int n = spec.n_atoms();
  if (n > kMaxDenseSites) {
    throw capacity_error("dense ground-state solve supports at most " +
                         std::to_string(kMaxDenseSites) + " sites, got " + std::to_string(n));
  }
  const auto dim = static_cast<long>(hilbert_dim(spec));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double off = -0.5 * spec.omega;
  for (long k = 0; k < dim; ++k) {
    const auto bits = static_cast<std::uint64_t>(k);
    h(k, k) = diagonal_energy(spec, config_from_index(bits, n));
    for (int i = 0; i < n; ++i) h(static_cast<long>(bits ^ (std::uint64_t{1} << i)), k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("dense eigensolver failed on the " + std::to_string(dim) +
                          "-dimensional Hamiltonian");
  }
  ExactGroundState gs;
  gs.energy = solver.eigenvalues()(0);
  gs.amplitudes = solver.eigenvectors().col(0);
  gs.n_sites = n;
  finalize_amplitudes(gs.amplitudes);
  return gs;
}

ExactGroundState ground_state_lanczos(const HamiltonianSpec& spec) {
  const int n = spec.n_atoms();
  if (n > kMaxSites) {
    throw capacity_error("ground state supports at most " + std::to_string(kMaxSites) +
                         " sites, got " + std::to_string(n));
  }
  const auto dim = static_cast<long>(hilbert_dim(spec));
  const Eigen::VectorXd diag = diagonal_table(spec);
  const int basis_cap = static_cast<int>(std::min<long>(kLanczosBasisCap, dim));

  // Uniform positive start: nonzero overlap with the (nonnegative) ground
  // state is guaranteed, and the run is deterministic.
  Eigen::VectorXd v = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));

  std::vector<Eigen::VectorXd> basis;
  Eigen::VectorXd alphas(basis_cap), betas(basis_cap), w(dim), ritz(dim);
  double best_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < kLanczosMaxRestarts; ++restart) {
    basis.clear();
    basis.push_back(v);
    int m = 0;
    double beta = 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small;
    while (m < basis_cap) {
      apply_with_diagonal(spec, diag, basis.back(), w);
      alphas[m] = basis.back().dot(w);
      ++m;
      // Full reorthogonalization (two Gram-Schmidt passes) keeps the basis
      // orthonormal despite the classic Lanczos loss of orthogonality.
      for (int pass = 0; pass < 2; ++pass) {
        for (const Eigen::VectorXd& b : basis) w -= b.dot(w) * b;
      }
      beta = w.norm();
      // Cheap convergence probe on the m x m tridiagonal projection: the
      // lowest Ritz pair's residual equals beta * |last component|.
      small.computeFromTridiagonal(alphas.head(m), betas.head(m - 1));
      if (small.info() == Eigen::Success) {
        const double estimate = beta * std::abs(small.eigenvectors()(m - 1, 0));
        if (estimate <= 0.1 * kResidualTol) break;
      }
      if (beta < 1e-13 || m == basis_cap) break;  // invariant subspace or cap
      betas[m - 1] = beta;
      basis.push_back(w / beta);
    }

    small.computeFromTridiagonal(alphas.head(m), betas.head(m - 1));
    if (small.info() != Eigen::Success) {
      throw numerical_error("tridiagonal eigensolve failed inside the Lanczos iteration");
    }
    const Eigen::VectorXd s = small.eigenvectors().col(0);
    ritz.setZero();
    for (int j = 0; j < m; ++j) ritz += s[j] * basis[static_cast<std::size_t>(j)];
    ritz /= ritz.norm();

    const double energy = small.eigenvalues()(0);
    const double residual = residual_norm(spec, diag, ritz, energy);
    best_residual = std::min(best_residual, residual);
    if (residual <= kResidualTol) {
      ExactGroundState gs;
      gs.energy = energy;
      gs.amplitudes = ritz;
      gs.n_sites = n;
      finalize_amplitudes(gs.amplitudes);
      return gs;
    }
    v = ritz;  // restart from the best current approximation
  }
  throw convergence_error("Lanczos did not reach residual " + io::format_double(kResidualTol) +
                          " after " + std::to_string(kLanczosMaxRestarts) +
                          " restarts; best residual " + io::format_double(best_residual));
}

ExactGroundState ground_state(const HamiltonianSpec& spec) {
  const int n = spec.n_atoms();
  if (n > kMaxSites) {
    throw capacity_error("ground state supports at most " + std::to_string(kMaxSites) +
                         " sites, got " + std::to_string(n));
  }
  if (hilbert_dim(spec) <= 512) return ground_state_dense(spec);
  return ground_state_lanczos(spec);
}

Dataset sample_dataset(const ExactGroundState& gs, const HamiltonianSpec& spec,
                       std::uint64_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_dataset: count must be >= 1");
  const int n = spec.n_atoms();
  const auto dim = static_cast<long>(hilbert_dim(spec));
  if (gs.amplitudes.size() != dim) {
    throw std::invalid_argument("sample_dataset: amplitude vector has length " +
                                std::to_string(gs.amplitudes.size()) + ", spec implies " +
                                std::to_string(dim));
  }

  std::vector<double> cdf(static_cast<std::size_t>(dim));
  double acc = 0.0;
  for (long k = 0; k < dim; ++k) {
    acc += gs.amplitudes[k] * gs.amplitudes[k];
    cdf[static_cast<std::size_t>(k)] = acc;
  }
  cdf.back() = 1.0;  // guard binary search against rounding in the total

  Dataset dataset;
  dataset.seed = seed;
  dataset.source = "oracle";
  dataset.samples.resize(count);
  parallel_for(static_cast<long>(count), [&](long k) {
    // Draw k depends only on (seed, k): reproducible at any thread count.
    const double u = uniform01_at(seed, Stream::OracleDraw, static_cast<std::uint64_t>(k));
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto index = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(), dim - 1));
    dataset.samples[static_cast<std::size_t>(k)] = config_from_index(index, n);
  });
  return dataset;
}

double enumerated_energy(const HamiltonianSpec& spec,
                         const std::function<double(const Configuration&)>& logprob) {
  if (!logprob) throw std::invalid_argument("enumerated_energy: logprob function is empty");
  const int n = spec.n_atoms();
  if (n > 16) {
    throw capacity_error("enumerated_energy enumerates 2^N configurations; N=" +
                         std::to_string(n) + " exceeds the cap of 16");
  }
  const auto dim = static_cast<std::uint64_t>(hilbert_dim(spec));

  std::vector<double> logp(dim);
  for (std::uint64_t k = 0; k < dim; ++k) logp[k] = logprob(config_from_index(k, n));

  double energy = 0.0;
  for (std::uint64_t k = 0; k < dim; ++k) {
    const double weight = std::exp(logp[k]);
    if (weight == 0.0) continue;  // zero-probability configurations carry no weight
    // Same arithmetic as local_energy: diagonal term plus -omega/2 times the
    // sum of amplitude ratios psi(flip)/psi(sigma) over single-site flips.
    double flip_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      flip_sum += std::exp(0.5 * (logp[k ^ (std::uint64_t{1} << i)] - logp[k]));
    }
    const double local = diagonal_energy(spec, config_from_index(k, n)) -
                         0.5 * spec.omega * flip_sum;
    energy += weight * local;
  }
  return energy;
}

}  // namespace rydvmc
