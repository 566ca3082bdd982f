#include <cmath>
#include <limits>

#include "gllb/convergence.hpp"
#include "gllb/errors.hpp"

namespace gllb {

namespace {

// Solves (I - r A) x = b in place along one line, where A is the Neumann
// second-difference matrix with ghost-point closure:
//   row 0:   (1 + r) x0 - r x1
//   row i:   -r x_{i-1} + (1 + 2r) x_i - r x_{i+1}
//   row N-1: -r x_{N-2} + (1 + r) x_{N-1}
void thomas_neumann(double r, double* x, std::size_t n, std::size_t stride,
                    std::vector<double>& cprime) {
  cprime.resize(n);
  const double a = -r;
  double diag = 1.0 + r;
  cprime[0] = a / diag;
  x[0] /= diag;
  for (std::size_t i = 1; i < n; ++i) {
    diag = (i == n - 1 ? 1.0 + r : 1.0 + 2.0 * r) - a * cprime[i - 1];
    cprime[i] = a / diag;
    x[i * stride] = (x[i * stride] - a * x[(i - 1) * stride]) / diag;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i * stride] -= cprime[i] * x[(i + 1) * stride];
  }
}

// Second differences of one scalar component on an nx-by-ny (ny = 1 in 1-D)
// row-major grid with Neumann ghosts.
void fd_laplacian(std::span<const double> u, std::span<double> out, int nx, int ny,
                  double hx, double hy) {
  const double ix = 1.0 / (hx * hx);
  const double iy = ny > 1 ? 1.0 / (hy * hy) : 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const std::size_t p = static_cast<std::size_t>(i) * ny + j;
      const double c = u[p];
      const double w = i > 0 ? u[p - ny] : c;
      const double e = i < nx - 1 ? u[p + ny] : c;
      double v = (w - 2.0 * c + e) * ix;
      if (ny > 1) {
        const double s = j > 0 ? u[p - 1] : c;
        const double n = j < ny - 1 ? u[p + 1] : c;
        v += (s - 2.0 * c + n) * iy;
      }
      out[p] = v;
    }
  }
}

GridField initial_on_grid(const InitialData& u0, const BoxDomain& grid) {
  if (const auto* table = std::get_if<ModeTable>(&u0)) return evaluate_on(*table, grid);
  const auto& g = std::get<GridField>(u0);
  if (g.domain() == grid) return g;
  std::vector<int> trunc;
  for (int n : g.domain().quad_points()) trunc.push_back(n / 2);
  for (int j = 0; j < grid.dim(); ++j) trunc[j] = std::min(trunc[j], grid.quad_points(j));
  const SpectralField f = analyze(g, trunc);
  return synthesize_on(f, grid);
}

}  // namespace

FdTrajectory fd_oracle(const SolverConfig& config, const InitialData& u0,
                       int grid_n, double dt, double record_interval) {
  validate(config.params);
  const int d = config.domain.dim();
  if (d > 2) throw ConfigError("the finite-difference oracle supports d <= 2 only");
  if (grid_n < 16 || grid_n % 2 != 0) {
    throw ConfigError("finite-difference grids need an even grid_n >= 16");
  }
  if (!(dt > 0.0) || !(record_interval > 0.0) || !(config.t_end > 0.0)) {
    throw ConfigError("fd_oracle needs positive dt, record interval and t_end");
  }

  const BoxDomain grid(std::vector<double>(config.domain.lengths().begin(),
                                           config.domain.lengths().end()),
                       std::vector<int>(d, grid_n));
  const int nx = grid_n;
  const int ny = d == 2 ? grid_n : 1;
  const double hx = grid.length(0) / nx;
  const double hy = d == 2 ? grid.length(1) / ny : 1.0;
  const std::size_t nodes = grid.node_count();
  const GLLBParams& p = config.params;

  GridField u = initial_on_grid(u0, grid);
  FdTrajectory traj{grid, {}, {}, Outcome::kCompleted, std::nullopt};
  traj.times.push_back(0.0);
  traj.states.push_back(u);

  const auto steps = static_cast<long>(std::ceil(config.t_end / dt - 1e-9));
  const long every = std::max(1L, std::lround(record_interval / dt));
  std::vector<double> lap(kComponents * nodes);
  std::vector<double> next(kComponents * nodes);
  std::vector<double> scratch;
  double t = 0.0;
  for (long s = 1; s <= steps; ++s) {
    const double t_next = s == steps ? config.t_end : static_cast<double>(s) * dt;
    const double h = t_next - t;
    const auto vals = u.values();
    for (int c = 0; c < kComponents; ++c) {
      fd_laplacian(u.component(c), std::span<double>(lap).subspan(c * nodes, nodes), nx, ny,
                   hx, hy);
    }
    bool finite = true;
    for (std::size_t i = 0; i < nodes; ++i) {
      const Vec3 z(vals[i], vals[nodes + i], vals[2 * nodes + i]);
      const Vec3 lz(lap[i], lap[nodes + i], lap[2 * nodes + i]);
      const auto [f, g] = config.potential.value_gradient(z);
      const Vec3 n = p.gamma * g.cross(lz) - p.kappa2 * (1.0 + p.mu * f) * g;
      for (int c = 0; c < kComponents; ++c) {
        next[c * nodes + i] = z[c] + h * n[c];
        finite = finite && std::isfinite(next[c * nodes + i]);
      }
    }
    if (finite) {
      // (I - h kappa1 A_x)(I - h kappa1 A_y) u_new = u + h N(u)
      const double rx = h * p.kappa1 / (hx * hx);
      const double ry = h * p.kappa1 / (hy * hy);
      for (int c = 0; c < kComponents; ++c) {
        double* base = next.data() + c * nodes;
        for (int j = 0; j < ny; ++j) {
          thomas_neumann(rx, base + j, static_cast<std::size_t>(nx),
                         static_cast<std::size_t>(ny), scratch);
        }
        if (d == 2) {
          for (int i = 0; i < nx; ++i) {
            thomas_neumann(ry, base + static_cast<std::size_t>(i) * ny,
                           static_cast<std::size_t>(ny), 1, scratch);
          }
        }
      }
      double l2 = 0.0;
      for (double v : next) l2 += v * v;
      l2 *= grid.quadrature_weight();
      finite = std::isfinite(l2) && l2 <= config.blowup_threshold;
    }
    if (!finite) {
      traj.outcome = Outcome::kBlowup;
      traj.blowup_time = t_next;
      break;
    }
    u = GridField(grid, next);
    t = t_next;
    if (s % every == 0 || s == steps) {
      traj.times.push_back(t);
      traj.states.push_back(u);
    }
  }
  return traj;
}

CrossValidation cross_validate(const SolverConfig& config, const InitialData& u0,
                               int n, int grid_n, double fd_dt_factor) {
  if (!(fd_dt_factor > 0.0)) throw ConfigError("fd_dt_factor must be positive");
  if (grid_n < n) throw ConfigError("FD grid must be at least as fine as the truncation");
  const SolverConfig spectral_cfg = with_truncation(config, n);
  const Trajectory spectral = simulate(spectral_cfg, u0);

  double h = std::numeric_limits<double>::infinity();
  for (double len : config.domain.lengths()) h = std::min(h, len / grid_n);
  const double interval = config.dt * config.record_every;
  const double target = fd_dt_factor * h * h / config.params.kappa1;
  const double per_interval = std::ceil(interval / target - 1e-9);
  const double fd_dt = interval / per_interval;
  const FdTrajectory fd = fd_oracle(config, u0, grid_n, fd_dt, interval);

  CrossValidation out;
  out.fd_dt = fd_dt;
  out.spectral_outcome = spectral.outcome;
  out.fd_outcome = fd.outcome;
  std::size_t j = 0;
  for (std::size_t i = 0; i < spectral.times.size(); ++i) {
    const double t = spectral.times[i];
    while (j < fd.times.size() && fd.times[j] < t - 1e-9 * std::max(1.0, t)) ++j;
    if (j == fd.times.size()) break;
    if (std::fabs(fd.times[j] - t) > 1e-9 * std::max(1.0, t)) continue;
    const GridField s = synthesize_on(spectral.states[i], fd.grid);
    const auto a = s.values();
    const auto b = fd.states[j].values();
    double e2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) e2 += (a[k] - b[k]) * (a[k] - b[k]);
    out.max_l2_error = std::max(out.max_l2_error, std::sqrt(e2 * fd.grid.quadrature_weight()));
  }
  if (spectral.outcome != Outcome::kCompleted || fd.outcome != Outcome::kCompleted) {
    out.max_l2_error = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace gllb
