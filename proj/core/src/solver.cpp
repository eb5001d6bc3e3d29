#include "nlkpp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>

#include "nlkpp/convolve.hpp"
#include "nlkpp/errors.hpp"

namespace nlkpp {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;

int grow_cells(const SimConfig& cfg) {
  return std::max(1, static_cast<int>(std::ceil(cfg.extension_chunk / cfg.dx -
                                                1e-9)));
}

// Symmetric staggered grid: n even, nodes at +-(k+1/2) dx, never at 0, so an
// even field stays exactly even and kernel jumps fall between nodes.
Grid staggered_grid(double reach, double dx) {
  const int per_side =
      std::max(4, static_cast<int>(std::ceil(reach / dx + 0.5 - 1e-12)));
  Grid g;
  g.dx = dx;
  g.n = 2 * per_side;
  g.x0 = -(per_side - 0.5) * dx;
  return g;
}

}  // namespace

void SimConfig::validate() const {
  if (!(dx > 0.0)) throw ConfigError("sim: dx must be positive");
  if (!(dt_max > 0.0) || dt_max > 0.5)
    throw ConfigError("sim: dt_max must lie in (0, 0.5]");
  if (!(t_end >= 0.0)) throw ConfigError("sim: t_end must be non-negative");
  if (!(cfl_advection > 0.0) || cfl_advection > 1.0)
    throw ConfigError("sim: cfl_advection must lie in (0, 1]");
  if (!(edge_tol > 0.0)) throw ConfigError("sim: edge_tol must be positive");
  if (!(extension_chunk > 0.0))
    throw ConfigError("sim: extension_chunk must be positive");
  if (!(linf_cap > 0.0)) throw ConfigError("sim: linf_cap must be positive");
  if (!(record_every > 0.0))
    throw ConfigError("sim: record_every must be positive");
  if (!(max_width > 0.0)) throw ConfigError("sim: max_width must be positive");
}

InitialData InitialData::indicator(double a, double height) {
  InitialData d;
  d.kind = Kind::Indicator;
  d.radius = a;
  d.height = height;
  return d;
}

InitialData InitialData::bump(double a, double height) {
  InitialData d;
  d.kind = Kind::Bump;
  d.radius = a;
  d.height = height;
  return d;
}

InitialData InitialData::tabulated(std::vector<double> values, double spacing) {
  InitialData d;
  d.kind = Kind::Table;
  d.table = std::move(values);
  d.table_dx = spacing;
  return d;
}

InitialData InitialData::narrow_gaussian() {
  InitialData d;
  d.kind = Kind::NarrowGaussian;
  return d;
}

DriftSpec DriftSpec::none() { return DriftSpec{}; }

DriftSpec DriftSpec::constant(double value) {
  DriftSpec d;
  d.kind = Kind::Constant;
  d.value = value;
  return d;
}

DriftSpec DriftSpec::sine_potential(double a0, double a1) {
  if (!(a0 > 0.0) || !(a1 >= 0.0))
    throw ConfigError("sine potential drift needs a0 > 0 and a1 >= 0");
  DriftSpec d;
  d.kind = Kind::SinePotential;
  d.a0 = a0;
  d.a1 = a1;
  return d;
}

double DriftSpec::at(double x) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return value;
    case Kind::SinePotential:
      // v(x) = a0 sin(a1 x / a0), drift b = v_x = a1 cos(a1 x / a0)
      return a1 * std::cos(a1 * x / a0);
  }
  return 0.0;
}

double DriftSpec::max_abs() const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return std::fabs(value);
    case Kind::SinePotential:
      return a1;
  }
  return 0.0;
}

double DriftSpec::a2() const {
  return kind == Kind::SinePotential ? a1 * a1 / a0 : 0.0;
}

SimState init(const InitialData& u0, const SimConfig& cfg,
              bool allow_unnormalized) {
  cfg.validate();

  double a = 0.0;
  switch (u0.kind) {
    case InitialData::Kind::Indicator:
    case InitialData::Kind::Bump:
      if (!(u0.radius > 0.0))
        throw HypothesisError("initial data needs a positive support radius");
      a = u0.radius;
      break;
    case InitialData::Kind::Table: {
      if (u0.table.empty() || u0.table.size() % 2 != 0)
        throw HypothesisError(
            "tabulated initial data needs an even, non-empty sample list");
      if (std::fabs(u0.table_dx - cfg.dx) > 1e-12 * cfg.dx)
        throw ConfigError(
            "tabulated initial data must be sampled at the grid spacing dx");
      a = (u0.table.size() / 2.0) * u0.table_dx;
      break;
    }
    case InitialData::Kind::NarrowGaussian:
      a = 18.0 * cfg.dx;  // 6 sigma with sigma = 3 dx
      break;
  }

  const Grid g = staggered_grid(a + cfg.extension_chunk, cfg.dx);
  SimState st;
  st.field.grid = g;
  st.field.time = 0.0;
  st.field.values.assign(g.n, 0.0);

  switch (u0.kind) {
    case InitialData::Kind::Indicator:
      for (int i = 0; i < g.n; ++i)
        if (std::fabs(g.node(i)) <= u0.radius) st.field.values[i] = u0.height;
      break;
    case InitialData::Kind::Bump:
      for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        if (std::fabs(x) <= u0.radius) {
          const double c = std::cos(kTwoPi / 4.0 * x / u0.radius);
          st.field.values[i] = u0.height * c * c;
        }
      }
      break;
    case InitialData::Kind::Table: {
      const int m = static_cast<int>(u0.table.size());
      const int start = g.n / 2 - m / 2;
      for (int j = 0; j < m; ++j) st.field.values[start + j] = u0.table[j];
      break;
    }
    case InitialData::Kind::NarrowGaussian: {
      const double sigma = 3.0 * cfg.dx;
      const double norm = 1.0 / (sigma * std::sqrt(kTwoPi));
      for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        st.field.values[i] = norm * std::exp(-x * x / (2.0 * sigma * sigma));
      }
      break;
    }
  }

  double mx = 0.0;
  for (double v : st.field.values) {
    if (v < 0.0) throw HypothesisError("initial data must be non-negative");
    mx = std::max(mx, v);
  }
  if (!(mx > 0.0)) throw HypothesisError("initial data must not vanish");
  if (!allow_unnormalized && mx > 1.0 + 1e-12)
    throw HypothesisError("initial data must satisfy max u0 <= 1");
  return st;
}

namespace {

// One simulation loop's worth of reusable state: nodal velocities (from the
// kernel convolution or an analytic drift), flux and tridiagonal scratch.
class Stepper {
 public:
  Stepper(const Kernel* kernel, const DriftSpec* drift, const SimConfig& cfg)
      : kernel_(kernel), drift_(drift), cfg_(cfg) {}

  void bind(const Grid& g) {
    grid_ = g;
    vel_.assign(g.n, 0.0);
    flux_.assign(g.n + 1, 0.0);
    cp_.assign(g.n, 0.0);
    dp_.assign(g.n, 0.0);
    if (kernel_) {
      engine_ = std::make_unique<ConvolutionEngine>(*kernel_, g,
                                                    2.0 * g.width());
    } else {
      for (int i = 0; i < g.n; ++i) vel_[i] = drift_->at(g.node(i));
    }
  }

  // Nodal advection velocities for the current field; also returns max |v|.
  double velocities(const Field& u) {
    if (kernel_) {
      engine_->apply(u.values, vel_);
    }
    double vmax = 0.0;
    for (double v : vel_) vmax = std::max(vmax, std::fabs(v));
    return vmax;
  }

  double proposed_dt(double vmax) const {
    return std::min(cfg_.dt_max,
                    cfg_.cfl_advection * cfg_.dx / std::max(vmax, 1e-12));
  }

  // Advance by the given dt using the velocities from the last velocities()
  // call. Fills info and leaves the field clamped and checked.
  void advance(SimState& st, double dt, StepInfo& info) {
    Field& f = st.field;
    const int n = grid_.n;
    const double dx = grid_.dx;
    std::vector<double>& u = f.values;

    info.t_before = f.time;
    info.dt = dt;
    info.mass_before = trapezoid(f);
    {
      double s = 0.5 * (u[0] * (1.0 - u[0]) + u[n - 1] * (1.0 - u[n - 1]));
      for (int i = 1; i < n - 1; ++i) s += u[i] * (1.0 - u[i]);
      info.bulk_before = s * dx;
    }

    // explicit conservative upwind advection; ghost cells are zero
    flux_[0] = vel_[0] < 0.0 ? vel_[0] * u[0] : 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      const double w = 0.5 * (vel_[i] + vel_[i + 1]);
      flux_[i + 1] = w >= 0.0 ? w * u[i] : w * u[i + 1];
    }
    flux_[n] = vel_[n - 1] > 0.0 ? vel_[n - 1] * u[n - 1] : 0.0;
    const double r = dt / dx;
    for (int i = 0; i < n; ++i) u[i] -= r * (flux_[i + 1] - flux_[i]);

    // explicit reaction on the advected field
    switch (cfg_.reaction) {
      case Reaction::Logistic:
        for (int i = 0; i < n; ++i) u[i] += dt * u[i] * (1.0 - u[i]);
        break;
      case Reaction::LinearGrowth:
        for (int i = 0; i < n; ++i) u[i] += dt * u[i];
        break;
      case Reaction::None:
        break;
    }

    // implicit diffusion: Thomas solve with homogeneous Dirichlet ghosts
    const double lam = dt / (dx * dx);
    double diag, off;
    if (cfg_.scheme == Scheme::ImexBackwardEuler) {
      diag = 1.0 + 2.0 * lam;
      off = -lam;
    } else {
      diag = 1.0 + lam;
      off = -0.5 * lam;
      // rhs += (dt/2) Delta_h u on the post-reaction field
      double prev_ghost = 0.0;
      double carry = u[0];
      for (int i = 0; i < n; ++i) {
        const double right = i + 1 < n ? u[i + 1] : 0.0;
        const double lap = prev_ghost - 2.0 * carry + right;
        prev_ghost = carry;
        carry = right;
        u[i] += 0.5 * lam * lap;
      }
    }
    cp_[0] = off / diag;
    dp_[0] = u[0] / diag;
    for (int i = 1; i < n; ++i) {
      const double m = 1.0 / (diag - off * cp_[i - 1]);
      cp_[i] = off * m;
      dp_[i] = (u[i] - off * dp_[i - 1]) * m;
    }
    u[n - 1] = dp_[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = dp_[i] - cp_[i] * u[i + 1];

    // positivity / finiteness / cap checks, then round-off clamp
    double mn = u[0], mx = u[0];
    int imn = 0, imx = 0;
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(u[i]))
        throw NumericalError("non-finite value", f.time + dt, grid_.node(i));
      if (u[i] < mn) {
        mn = u[i];
        imn = i;
      }
      if (u[i] > mx) {
        mx = u[i];
        imx = i;
      }
    }
    info.min_before_clamp = mn;
    if (mn < -1e-13)
      throw NumericalError("positivity violated beyond round-off",
                           f.time + dt, grid_.node(imn));
    if (mx > cfg_.linf_cap)
      throw NumericalError("blow-up: sup-norm cap exceeded", f.time + dt,
                           grid_.node(imx));
    for (int i = 0; i < n; ++i)
      if (u[i] < 0.0) u[i] = 0.0;
    info.max_after = mx;

    f.time += dt;
    info.mass_after = trapezoid(f);
    st.step_count += 1;
    st.last_dt = dt;
  }

  // Symmetric zero-filled growth; rebuilds velocities/engine for the new grid.
  void extend(SimState& st) {
    const int g = grow_cells(cfg_);
    Grid ng = st.field.grid;
    ng.n += 2 * g;
    ng.x0 -= g * ng.dx;
    std::vector<double> nv(ng.n, 0.0);
    std::copy(st.field.values.begin(), st.field.values.end(), nv.begin() + g);
    st.field.grid = ng;
    st.field.values = std::move(nv);
    st.extensions += 1;
    bind(ng);
  }

  bool needs_extension(const SimState& st) const {
    const std::vector<double>& u = st.field.values;
    return u.front() >= cfg_.edge_tol || u.back() >= cfg_.edge_tol;
  }

 private:
  const Kernel* kernel_;   // exactly one of kernel_/drift_ is set
  const DriftSpec* drift_;
  SimConfig cfg_;
  Grid grid_;
  std::unique_ptr<ConvolutionEngine> engine_;
  std::vector<double> vel_, flux_, cp_, dp_;
};

RunResult run_loop(Stepper& stepper, SimState st, const SimConfig& cfg,
                   const DiagnosticsConfig& diag, const StepMonitor& monitor,
                   const RecordHook& hook, bool fresh_start) {
  RunResult out;
  out.series.levels = diag.levels;
  out.series.eps = diag.eps;

  stepper.bind(st.field.grid);

  auto record = [&](const Field& f) {
    out.series.records.push_back(observe(f, diag));
    if (hook) hook(f);
  };

  double next_record;
  if (fresh_start) {
    record(st.field);
    next_record = cfg.record_every;
  } else {
    next_record =
        cfg.record_every *
        (std::floor(st.field.time / cfg.record_every + 1e-9) + 1.0);
  }

  out.status = RunStatus::Complete;
  const double t_eps = 1e-9 * std::max(cfg.record_every, cfg.dt_max);
  while (st.field.time < cfg.t_end - t_eps) {
    const double vmax = stepper.velocities(st.field);
    double dt = stepper.proposed_dt(vmax);
    if (st.field.time + dt >= cfg.t_end - t_eps) {
      dt = cfg.t_end - st.field.time;
    }
    StepInfo info;
    stepper.advance(st, dt, info);
    if (st.field.time >= cfg.t_end - t_eps) st.field.time = cfg.t_end;
    if (monitor) monitor(info);

    while (st.field.time >= next_record - t_eps) {
      record(st.field);
      next_record += cfg.record_every;
    }

    if (stepper.needs_extension(st)) {
      stepper.extend(st);
      if (st.field.grid.width() > cfg.max_width) {
        out.status = RunStatus::ResourceLimit;
        out.message =
            "domain exceeded max_width before t_end; returning partial run";
        break;
      }
    }
  }

  if (out.series.records.empty() ||
      out.series.records.back().t < st.field.time - t_eps) {
    record(st.field);
  }

  out.final_field = st.field;
  out.state = std::move(st);
  return out;
}

}  // namespace

void step(SimState& state, const Kernel& k, const SimConfig& cfg) {
  cfg.validate();
  Stepper stepper(&k, nullptr, cfg);
  stepper.bind(state.field.grid);
  const double vmax = stepper.velocities(state.field);
  StepInfo info;
  stepper.advance(state, stepper.proposed_dt(vmax), info);
}

RunResult run(const Kernel& k, const InitialData& u0, const SimConfig& cfg,
              const DiagnosticsConfig& diag, StepMonitor monitor,
              RecordHook hook) {
  SimState st = init(u0, cfg);
  Stepper stepper(&k, nullptr, cfg);
  return run_loop(stepper, std::move(st), cfg, diag, monitor, hook, true);
}

RunResult run_from(SimState state, const Kernel& k, const SimConfig& cfg,
                   const DiagnosticsConfig& diag, StepMonitor monitor,
                   RecordHook hook) {
  cfg.validate();
  Stepper stepper(&k, nullptr, cfg);
  return run_loop(stepper, std::move(state), cfg, diag, monitor, hook, false);
}

RunResult run_drift_diffusion(const DriftSpec& drift, const InitialData& u0,
                              const SimConfig& cfg,
                              const DiagnosticsConfig& diag,
                              StepMonitor monitor, RecordHook hook) {
  if (cfg.reaction == Reaction::Logistic)
    throw ConfigError(
        "drift-diffusion runs are linear: reaction must be none or "
        "linear-growth");
  SimState st = init(u0, cfg, /*allow_unnormalized=*/true);
  Stepper stepper(nullptr, &drift, cfg);
  return run_loop(stepper, std::move(st), cfg, diag, monitor, hook, true);
}

void save_checkpoint(const SimState& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open checkpoint file '" + path + "'");
  const char magic[8] = {'N', 'L', 'K', 'P', 'P', 'C', 'P', '1'};
  out.write(magic, 8);
  const double head[4] = {state.field.grid.x0, state.field.grid.dx,
                          state.field.time, state.last_dt};
  out.write(reinterpret_cast<const char*>(head), sizeof(head));
  const std::int64_t counters[3] = {state.field.grid.n, state.step_count,
                                    state.extensions};
  out.write(reinterpret_cast<const char*>(counters), sizeof(counters));
  out.write(reinterpret_cast<const char*>(state.field.values.data()),
            static_cast<std::streamsize>(sizeof(double) *
                                         state.field.values.size()));
  if (!out) throw ConfigError("failed writing checkpoint '" + path + "'");
}

SimState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint file '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "NLKPPCP1", 8) != 0)
    throw ConfigError("'" + path + "' is not a checkpoint file");
  double head[4];
  std::int64_t counters[3];
  in.read(reinterpret_cast<char*>(head), sizeof(head));
  in.read(reinterpret_cast<char*>(counters), sizeof(counters));
  if (!in || counters[0] <= 0 || counters[0] > (1LL << 31))
    throw ConfigError("corrupt checkpoint '" + path + "'");
  SimState st;
  st.field.grid.x0 = head[0];
  st.field.grid.dx = head[1];
  st.field.time = head[2];
  st.last_dt = head[3];
  st.field.grid.n = static_cast<int>(counters[0]);
  st.step_count = counters[1];
  st.extensions = static_cast<int>(counters[2]);
  st.field.values.resize(st.field.grid.n);
  in.read(reinterpret_cast<char*>(st.field.values.data()),
          static_cast<std::streamsize>(sizeof(double) *
                                       st.field.values.size()));
  if (!in) throw ConfigError("truncated checkpoint '" + path + "'");
  return st;
}

}  // namespace nlkpp
