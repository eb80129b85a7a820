#include "rotorkit/quantum3d.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "rotorkit/errors.hpp"

namespace rotor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxGrowAttempts = 4;

double reduce_free_time(double dtau) { return std::fmod(dtau, kRevivalPeriod3D); }

// exp(i s C) applied through C = V diag(lambda) V^T. cos^2 theta never
// couples even and odd J, so each parity block is diagonalized on its own and
// the two sectors stay exactly decoupled.
class CouplingExponential {
 public:
  explicit CouplingExponential(int j_max) {
    const Eigen::MatrixXd full = build_coupling(j_max);
    for (int parity = 0; parity < 2; ++parity) {
      Block& b = blocks_[parity];
      for (int j = parity; j <= j_max; j += 2) b.index.push_back(j);
      const auto m = static_cast<Eigen::Index>(b.index.size());
      Eigen::MatrixXd sub(m, m);
      for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index q = 0; q < m; ++q) sub(r, q) = full(b.index[r], b.index[q]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub);
      b.vectors = solver.eigenvectors();
      b.values = solver.eigenvalues();
    }
  }

  void apply(std::vector<cplx>& c, double s) const {
    for (const Block& b : blocks_) {
      const auto m = static_cast<Eigen::Index>(b.index.size());
      Eigen::VectorXd re(m), im(m);
      bool empty = true;
      for (Eigen::Index k = 0; k < m; ++k) {
        re[k] = c[b.index[k]].real();
        im[k] = c[b.index[k]].imag();
        empty = empty && re[k] == 0.0 && im[k] == 0.0;
      }
      if (empty) continue;
      Eigen::VectorXd pr = b.vectors.transpose() * re;
      Eigen::VectorXd pi = b.vectors.transpose() * im;
      for (Eigen::Index k = 0; k < m; ++k) {
        const cplx z = cplx(pr[k], pi[k]) * std::polar(1.0, s * b.values[k]);
        pr[k] = z.real();
        pi[k] = z.imag();
      }
      re.noalias() = b.vectors * pr;
      im.noalias() = b.vectors * pi;
      for (Eigen::Index k = 0; k < m; ++k) c[b.index[k]] = cplx(re[k], im[k]);
    }
  }

 private:
  struct Block {
    std::vector<int> index;
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
  };
  std::array<Block, 2> blocks_;
};

std::vector<cplx> free_phases(int j_max, double dtau) {
  const double t = reduce_free_time(dtau);
  std::vector<cplx> ph(static_cast<std::size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) ph[j] = std::polar(1.0, -0.5 * j * (j + 1.0) * t);
  return ph;
}

void multiply(std::vector<cplx>& c, const std::vector<cplx>& ph) {
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= ph[k];
}

void check_edge(QuantumState3D& s, double tolerance, const char* where) {
  const double edge = edge_population(s);
  s.truncation_safe = s.truncation_safe && edge < tolerance;
  if (edge >= tolerance)
    throw TruncationError(std::string(where) + ": edge population " + std::to_string(edge) +
                              " exceeds tolerance at J_max=" + std::to_string(s.j_max),
                          edge);
}

// Split-step integration on [lo, hi] with step <= dt; basis already sized.
void split_step(QuantumState3D& s, const PulseEnvelope& env, double lo, double hi, double dt) {
  const double span = hi - lo;
  if (span <= 0.0) return;
  const auto steps = static_cast<long>(std::ceil(span / dt * (1.0 - 1e-12)));
  const double h = span / static_cast<double>(steps);
  const CouplingExponential expc(s.j_max);
  const auto half = free_phases(s.j_max, 0.5 * h);
  const auto full = free_phases(s.j_max, h);
  multiply(s.coeffs, half);
  for (long k = 0; k < steps; ++k) {
    const double mid = lo + (static_cast<double>(k) + 0.5) * h;
    expc.apply(s.coeffs, env.value(mid) * h);
    multiply(s.coeffs, k + 1 < steps ? full : half);
  }
}

QuantumState3D propagate_once(const QuantumState3D& state, const PulseEnvelope& env, double t0, double t1,
                              double dt, int j_max, const PropagateOptions& options) {
  QuantumState3D s = grow_basis(state, j_max);
  if (t0 > s.tau) s = free_evolve(s, t0 - s.tau);

  if (env.is_delta()) {
    const auto& d = std::get<DeltaShape>(env.shape());
    if (d.at >= t0 && d.at < t1) {
      s = free_evolve(s, d.at - t0);
      PropagateOptions inner = options;
      inner.auto_grow = false;
      s = apply_impulsive(s, d.strength, inner);
      s = free_evolve(s, t1 - d.at);
    } else {
      s = free_evolve(s, t1 - t0);
    }
    s.tau = t1;
    return s;
  }

  const auto [a, b] = env.support();
  const double lo = std::clamp(a, t0, t1);
  const double hi = std::clamp(b, t0, t1);
  if (hi > lo) {
    s = free_evolve(s, lo - t0);
    split_step(s, env, lo, hi, dt);
    s.applied_strength += env.integral(lo, hi);
    s = free_evolve(s, t1 - hi);
  } else {
    s = free_evolve(s, t1 - t0);
  }
  s.tau = t1;
  check_edge(s, options.edge_tolerance, "propagate");
  return s;
}

}  // namespace

int j_max_for_strength(double total_strength) {
  const double k = std::ceil(std::fabs(total_strength));
  return static_cast<int>(k + 4.0 * std::ceil(std::cbrt(k)) + 32.0);
}

QuantumState3D isotropic_ground_state(int j_max, double tau) {
  if (j_max < 2) throw ContractError("isotropic_ground_state: J_max must be >= 2");
  QuantumState3D s;
  s.j_max = j_max;
  s.coeffs.assign(static_cast<std::size_t>(j_max) + 1, cplx{});
  s.coeffs[0] = 1.0;
  s.tau = tau;
  return s;
}

QuantumState3D grow_basis(const QuantumState3D& state, int j_max) {
  if (j_max <= state.j_max) return state;
  QuantumState3D out = state;
  out.j_max = j_max;
  out.coeffs.resize(static_cast<std::size_t>(j_max) + 1, cplx{});
  return out;
}

double norm_squared(const QuantumState3D& state) {
  double s = 0.0;
  for (const auto& c : state.coeffs) s += std::norm(c);
  return s;
}

double edge_population(const QuantumState3D& state) {
  const std::size_t n = state.coeffs.size();
  if (n == 0) return 0.0;
  double e = std::norm(state.coeffs[n - 1]);
  if (n >= 2) e = std::max(e, std::norm(state.coeffs[n - 2]));
  return e;
}

Eigen::MatrixXd build_coupling(int j_max) {
  if (j_max < 2) throw ContractError("build_coupling: J_max must be >= 2");
  // cos(theta)|J> = a_{J+1}|J+1> + a_J|J-1>, a_J = J / sqrt((2J-1)(2J+1)).
  // One extra level keeps the square exact on the retained block.
  const int n = j_max + 2;
  Eigen::MatrixXd ladder = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    const double a = j / std::sqrt((2.0 * j - 1.0) * (2.0 * j + 1.0));
    ladder(j, j - 1) = a;
    ladder(j - 1, j) = a;
  }
  const Eigen::MatrixXd sq = ladder * ladder;
  return sq.topLeftCorner(j_max + 1, j_max + 1);
}

QuantumState3D free_evolve(const QuantumState3D& state, double dtau) {
  if (!(dtau >= 0.0)) throw ContractError("free_evolve: dtau must be non-negative");
  QuantumState3D out = state;
  multiply(out.coeffs, free_phases(state.j_max, dtau));
  out.tau = state.tau + dtau;
  return out;
}

QuantumState3D apply_impulsive(const QuantumState3D& state, double strength, const PropagateOptions& options) {
  if (!std::isfinite(strength)) throw ContractError("apply_impulsive: strength must be finite");
  int j_max = options.auto_grow ? std::max(state.j_max, j_max_for_strength(state.applied_strength + std::fabs(strength)))
                                : state.j_max;
  for (int attempt = 0;; ++attempt) {
    QuantumState3D s = grow_basis(state, j_max);
    CouplingExponential(s.j_max).apply(s.coeffs, strength);
    s.applied_strength += std::fabs(strength);
    try {
      check_edge(s, options.edge_tolerance, "apply_impulsive");
      return s;
    } catch (const TruncationError&) {
      if (!options.auto_grow || attempt + 1 >= kMaxGrowAttempts) throw;
      j_max = j_max + j_max / 2 + 16;
    }
  }
}

QuantumState3D propagate(const QuantumState3D& state, const PulseEnvelope& envelope, double t0, double t1,
                         double dt, const PropagateOptions& options) {
  if (!(dt > 0.0)) throw ContractError("propagate: dt must be positive");
  if (!(t1 >= t0)) throw ContractError("propagate: t1 must not precede t0");
  if (t0 < state.tau - 1e-12) throw ContractError("propagate: t0 lies before the state time");
  envelope.require_non_negative();

  double segment_strength = 0.0;
  if (envelope.is_delta()) {
    const auto& d = std::get<DeltaShape>(envelope.shape());
    if (d.at >= t0 && d.at < t1) segment_strength = d.strength;
  } else {
    const auto [a, b] = envelope.support();
    const double lo = std::clamp(a, t0, t1), hi = std::clamp(b, t0, t1);
    if (hi > lo) {
      segment_strength = envelope.integral(lo, hi);
      const double scale = envelope.resolution_scale();
      if (scale > 0.0 && dt * 50.0 > scale * (1.0 + 1e-12))
        throw ContractError("propagate: dt must resolve the pulse with >= 50 steps per width");
      // The spectrum of cos^2 theta lies in [0, 1].
      if (dt * envelope.peak() >= 0.1)
        throw ContractError("propagate: dt * eps_max * ||C|| must stay below 0.1");
    }
  }

  int j_max = options.auto_grow
                  ? std::max(state.j_max, j_max_for_strength(state.applied_strength + std::fabs(segment_strength)))
                  : state.j_max;
  QuantumState3D out;
  for (int attempt = 0;; ++attempt) {
    try {
      out = propagate_once(state, envelope, t0, t1, dt, j_max, options);
      break;
    } catch (const TruncationError&) {
      if (!options.auto_grow || attempt + 1 >= kMaxGrowAttempts) throw;
      j_max = j_max + j_max / 2 + 16;
    }
  }

  if (options.verify_step && !envelope.is_delta()) {
    PropagateOptions inner = options;
    inner.verify_step = false;
    const QuantumState3D fine = propagate(state, envelope, t0, t1, 0.5 * dt, inner);
    const double change = std::fabs(alignment_factor(fine) - alignment_factor(out));
    if (change > options.step_tolerance)
      throw StepSizeError("propagate: halving dt changed <cos^2 theta> by " + std::to_string(change), change);
  }
  return out;
}

double alignment_factor(const QuantumState3D& state) {
  const int n = static_cast<int>(state.coeffs.size());
  const Eigen::MatrixXd c = build_coupling(std::max(2, state.j_max));
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j)
      s += c(i, j) * (std::conj(state.coeffs[i]) * state.coeffs[j]).real();
  return s;
}

std::vector<double> polar_grid(std::size_t count) {
  if (count < 2) throw ContractError("polar_grid: need at least two points");
  std::vector<double> g(count);
  for (std::size_t j = 0; j < count; ++j) g[j] = kPi * static_cast<double>(j) / static_cast<double>(count - 1);
  return g;
}

namespace {

cplx synthesize(const QuantumState3D& state, double x) {
  // Legendre recurrence with the Y_J0 normalization sqrt((2J+1)/4pi).
  double p_prev = 0.0, p = 1.0;
  cplx psi{};
  for (int j = 0; j <= state.j_max; ++j) {
    psi += state.coeffs[j] * (std::sqrt((2.0 * j + 1.0) / (4.0 * kPi)) * p);
    const double next = ((2.0 * j + 1.0) * x * p - j * p_prev) / (j + 1.0);
    p_prev = p;
    p = next;
  }
  return psi;
}

}  // namespace

std::vector<double> angular_density_3d(const QuantumState3D& state, std::span<const double> grid) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < 0.0 || grid[k] > kPi) throw ContractError("angular_density_3d: grid must lie in [0, pi]");
    out[k] = 2.0 * kPi * std::sin(grid[k]) * std::norm(synthesize(state, std::cos(grid[k])));
  }
  return out;
}

double pole_density(const QuantumState3D& state) { return std::norm(synthesize(state, 1.0)); }

DensityContour density_contour(const QuantumState3D& state, const PulseEnvelope& envelope,
                               std::span<const double> sample_taus, std::span<const double> grid, double dt,
                               const PropagateOptions& options) {
  if (!std::is_sorted(sample_taus.begin(), sample_taus.end()))
    throw ContractError("density_contour: sample times must be sorted");
  DensityContour out;
  out.tau.assign(sample_taus.begin(), sample_taus.end());
  out.theta.assign(grid.begin(), grid.end());
  out.values.reserve(sample_taus.size() * grid.size());
  QuantumState3D s = state;
  for (double t : sample_taus) {
    if (t > s.tau) s = propagate(s, envelope, s.tau, t, dt, options);
    const auto row = angular_density_3d(s, grid);
    out.values.insert(out.values.end(), row.begin(), row.end());
    out.alignment.push_back(alignment_factor(s));
  }
  return out;
}

}  // namespace rotor
