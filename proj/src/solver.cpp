#include "pinwheel/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <optional>
#include <ostream>
#include <random>

#include "pinwheel/errors.hpp"
#include "pinwheel/numerics.hpp"

namespace pinwheel {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double pair_total(const StateTerms& t) {
  double s = 0;
  for (std::size_t i = 0; i < t.C.size(); ++i)
    for (std::size_t j = i + 1; j < t.C.size(); ++j) s += t.C[i][j];
  return s;
}

double max_abs(const SystemState& s) {
  double m = 0;
  for (const auto& f : s.u)
    for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

// Adds a ground-state bump at the origin when some component is infeasible.
void add_bump(Field& w, const StateTerms& t, const Params& pr) {
  RadialProfile prof = solve_ground_state(pr.d, pr.p, pr.pot.V_inf);
  Field bump = embed_radial(prof, {0, 0, 0}, w.grid);
  double top = 0;
  for (double x : w.v) top = std::max(top, x);
  const double amp = 0.1 * std::max(top, 1e-300) / prof.omega0();
  bool need = false;
  for (std::size_t i = 0; i < t.A.size(); ++i) need = need || !(t.component_denominator(int(i), pr.beta) > 0);
  if (need)
    for (std::size_t k = 0; k < bump.size(); ++k) w.v[k] += amp * bump.v[k];
}

}  // namespace

void SolveOptions::validate() const {
  if (!(tol > 0)) throw ParameterError("solver tolerance must be positive");
  if (!(armijo > 0 && armijo < 1)) throw ParameterError("Armijo factor must lie in (0,1)");
  if (max_iters < 0) throw ParameterError("max_iters must be nonnegative");
  if (!(alpha0 > 0 && alpha_max >= alpha0 && alpha_min > 0)) throw ParameterError("invalid step bounds");
  if (step == StepRule::fixed && !(fixed_step > 0)) throw ParameterError("fixed step must be positive");
  if (perturbation < 0) throw ParameterError("perturbation must be nonnegative");
}

void Diagnostics::write_csv(std::ostream& os) const {
  os << "iter,energy,s_u,grad_norm,raw_residual,step,nehari_defect,overlap,pinwheel\n";
  for (const auto& r : rows)
    os << r.iter << ',' << g17(r.energy) << ',' << g17(r.s_u) << ',' << g17(r.grad_norm) << ','
       << g17(r.raw_residual) << ',' << g17(r.step) << ',' << g17(r.nehari_defect) << ',' << g17(r.overlap) << ',' << g17(r.pinwheel)
       << '\n';
}

SolveResult minimize(const SystemState& initial, const SolveOptions& opts) {
  opts.validate();
  initial.validate();
  initial.params.validate();
  const Params& pr = initial.params;
  const int ell = initial.ell();
  Discretization disc(pr, initial.grid());
  HelmholtzSolver K(initial.grid(), pr.pot.V_inf, disc.isotropic());
  PinwheelSynthesis S(pr, initial.grid());

  // Iterates are u = S w for a latent field w >= 0; S is exact, so u stays a pinwheel state.
  Field w = S.seed(initial);
  if (opts.perturbation > 0) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    double amp = 0;
    for (double x : w.v) amp = std::max(amp, std::abs(x));
    amp *= opts.perturbation;
    for (double& x : w.v) x += amp * nd(rng);
  }
  for (double& x : w.v) x = std::abs(x);

  SolveResult res;
  SystemState u = S.apply(w);
  StateTerms t = disc.terms(u);
  try {
    check_feasible(t, pr.beta);
  } catch (const InfeasibleProjection&) {
    add_bump(w, t, pr);
    u = S.apply(w);
    t = disc.terms(u);
    try {
      check_feasible(t, pr.beta);
    } catch (const InfeasibleProjection& e) {
      throw InfeasibleProjection(std::string("infeasible start: ") + e.what(), e.component);
    }
    res.diag.warnings.push_back("initial state infeasible; ground-state bump added");
  }
  double energy = nehari_energy(t, pr.beta, pr.p);
  double s_u = nehari_scalar(t, pr.beta, pr.p);
  for (double& x : w.v) x *= s_u;
  u = S.apply(w);
  t = disc.terms(u);
  res.diag.initial_energy = energy;

  // g is the latent gradient divided by l: for smooth states it matches the symmetrized component gradient.
  Field g(initial.grid()), gm(initial.grid());
  double gnorm = 0, raw_norm = 0;
  auto refresh = [&] {
    std::vector<Field> raw = disc.gradient(u);
    raw_norm = 0;
    for (int i = 0; i < ell; ++i)
      raw_norm = std::max(raw_norm, t.A[i] > 0 ? l2_norm(raw[i]) / std::sqrt(t.A[i]) : 0.0);
    g = S.adjoint(raw);
    for (double& x : g.v) x /= ell;
    // Bound w >= 0: only nodes sitting at zero with an outward gradient are frozen; others reflect.
    gm = g;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (w.v[k] == 0 && g.v[k] > 0) gm.v[k] = 0;
    gnorm = l2_norm(gm) / std::sqrt(t.sum_A() / ell);
  };
  double pin = check_pinwheel(u).pinwheel;
  auto record = [&](int iter, double step) {
    DiagnosticsRow row;
    row.iter = iter;
    row.energy = energy;
    row.s_u = s_u;
    row.grad_norm = gnorm;
    row.raw_residual = raw_norm;
    row.step = step;
    double A = t.sum_A();
    row.nehari_defect = std::abs(A - t.denominator(pr.beta)) / A;
    row.overlap = pair_total(t);
    row.pinwheel = pin;
    res.diag.rows.push_back(row);
  };
  refresh();
  record(0, 0.0);

  // Coupling stiffness |beta| (p-1) |u_i|^{p-2} sum_j |u_j|^p, pulled back to the latent grid as a
  // weighted average over the nodes each latent value feeds.
  const Field feed = S.adjoint(std::vector<Field>(ell, Field(initial.grid(), 1.0)));
  auto coupling_weight = [&] {
    Field Dw(initial.grid());
    if (pr.beta == 0 || ell < 2) return Dw;
    const double top = max_abs(u);
    std::vector<Field> D(ell, Field(initial.grid()));
    for (int i = 0; i < ell; ++i)
      for (std::size_t k = 0; k < D[i].size(); ++k) {
        double others = 0;
        for (int j = 0; j < ell; ++j)
          if (j != i) others += std::pow(std::abs(u.u[j].v[k]), pr.p);
        const double ui = std::max(std::abs(u.u[i].v[k]), 1e-2 * top);
        D[i].v[k] = -pr.beta * (pr.p - 1) * std::pow(ui, pr.p - 2) * others;
      }
    Dw = S.adjoint(D);
    for (std::size_t k = 0; k < Dw.size(); ++k) Dw.v[k] = feed.v[k] > 0 ? Dw.v[k] / feed.v[k] : 0.0;
    return Dw;
  };
  // Approximate solve of (-Delta + V_inf + Dw) x = r on the free nodes, preconditioned by K.
  auto precondition = [&](const Field& r) {
    auto mask = [&](Field& f) {
      for (std::size_t k = 0; k < f.size(); ++k)
        if (r.v[k] == 0 && g.v[k] != 0) f.v[k] = 0;
    };
    Field x = K.apply(r);
    mask(x);
    const Field Dw = coupling_weight();
    double dmax = 0;
    for (double v : Dw.v) dmax = std::max(dmax, v);
    // Only worth it once coupling outweighs self-focusing.
    if (dmax < std::max(0.1 * pr.pot.V_inf, (2 * pr.p - 1) * std::pow(max_abs(u), 2 * pr.p - 2))) return x;
    auto op = [&](const Field& f) {
      Field y = disc.neg_laplacian(f);
      for (std::size_t k = 0; k < y.size(); ++k) y.v[k] += (pr.pot.V_inf + Dw.v[k]) * f.v[k];
      mask(y);
      return y;
    };
    Field res = r, z = x, q = x;
    {
      Field Ax = op(x);
      for (std::size_t k = 0; k < res.size(); ++k) res.v[k] -= Ax.v[k];
    }
    mask(res);
    const double r0 = l2_norm(r);
    z = K.apply(res);
    mask(z);
    q = z;
    double rz = l2_dot(res, z);
    for (int it = 0; it < 20 && l2_norm(res) > 0.05 * r0 && rz > 0; ++it) {
      Field Aq = op(q);
      const double qAq = l2_dot(q, Aq);
      if (!(qAq > 0)) break;
      const double a = rz / qAq;
      for (std::size_t k = 0; k < x.size(); ++k) {
        x.v[k] += a * q.v[k];
        res.v[k] -= a * Aq.v[k];
      }
      z = K.apply(res);
      mask(z);
      const double rz_new = l2_dot(res, z);
      for (std::size_t k = 0; k < q.size(); ++k) q.v[k] = z.v[k] + (rz_new / rz) * q.v[k];
      rz = rz_new;
    }
    return x;
  };

  Field dir(initial.grid()), Kg_prev(initial.grid()), g_prev(initial.grid());
  bool have_dir = false;
  double alpha = opts.alpha0;
  bool drift_warned = false;
  int iter = 0;
  while (true) {
    if (gnorm < opts.tol) {
      res.diag.converged = true;
      break;
    }
    if (iter >= opts.max_iters) break;
    ++iter;

    Field Kg = precondition(gm);
    double beta_cg = 0;
    if (opts.method == SolveOptions::Method::conjugate && have_dir) {
      double den = l2_dot(g_prev, Kg_prev);
      beta_cg = den > 0 ? std::max(0.0, (l2_dot(gm, Kg) - l2_dot(gm, Kg_prev)) / den) : 0.0;
    }
    Field d = Kg;
    for (std::size_t k = 0; k < d.size(); ++k)
      d.v[k] = (gm.v[k] == 0 && g.v[k] != 0) ? 0.0 : -Kg.v[k] + (beta_cg > 0 ? beta_cg * dir.v[k] : 0.0);
    double slope = ell * l2_dot(g, d);
    if (!(slope < 0) && beta_cg > 0) {
      for (std::size_t k = 0; k < d.size(); ++k) d.v[k] = -Kg.v[k];
      beta_cg = 0;
      slope = ell * l2_dot(g, d);
    }
    if (!(slope < 0)) {
      res.diag.warnings.push_back("no descent direction at iteration " + std::to_string(iter));
      break;
    }

    struct Trial {
      Field w;
      StateTerms t;
      double e = 0, dec = 0;  // dec: first-order change along the reflected path
      bool feasible = false;
    };
    auto trial = [&](double a) {
      Trial tr{w, {}, 0, 0, false};
      for (std::size_t k = 0; k < tr.w.size(); ++k) {
        tr.w.v[k] = std::abs(w.v[k] + a * d.v[k]);
        tr.dec += g.v[k] * (tr.w.v[k] - w.v[k]);
      }
      tr.dec *= ell * w.grid.cell_volume();
      tr.t = disc.terms(S.apply(tr.w));
      tr.feasible = all_nontrivial(tr.t);
      for (int i = 0; i < ell; ++i) tr.feasible = tr.feasible && tr.t.component_denominator(i, pr.beta) > 0;
      if (tr.feasible) tr.e = nehari_energy(tr.t, pr.beta, pr.p);
      return tr;
    };

    bool accepted = false;
    std::optional<Trial> best;
    if (opts.step == SolveOptions::StepRule::fixed) {
      alpha = opts.fixed_step;
      best = trial(alpha);
      if (!best->feasible)
        throw InfeasibleProjection("fixed step left the feasible set at iteration " + std::to_string(iter), 0);
    } else {
      alpha = std::min(opts.alpha_max, 2 * alpha);
      for (; alpha >= opts.alpha_min; alpha *= 0.5) {
        Trial tr = trial(alpha);
        if (tr.feasible && tr.dec < 0 && tr.e <= energy + opts.armijo * tr.dec) {
          best = std::move(tr);
          break;
        }
      }
      // Overshoot along a convex section: try the minimizer of the quadratic through E, dec and e.
      if (best) {
        const double curv = best->e - energy - best->dec;
        if (curv > 0) {
          const double aq = alpha * (-best->dec) / (2 * curv);
          if (aq > 0.1 * alpha && aq < 0.9 * alpha) {
            Trial tq = trial(aq);
            if (tq.feasible && tq.e < best->e) {
              best = std::move(tq);
              alpha = aq;
            }
          }
        }
      }
    }
    if (best) {
      s_u = nehari_scalar(best->t, pr.beta, pr.p);
      for (double& x : best->w.v) x *= s_u;
      w = std::move(best->w);
      u = S.apply(w);
      t = disc.terms(u);
      energy = best->e;
      accepted = true;
    }
    if (!accepted) {
      if (beta_cg > 0) {
        have_dir = false;
        alpha = opts.alpha0;
        continue;
      }
      res.diag.warnings.push_back("line search stalled at iteration " + std::to_string(iter));
      break;
    }
    dir = std::move(d);
    have_dir = true;
    Kg_prev = std::move(Kg);
    g_prev = gm;
    refresh();
    if (opts.drift_every > 0 && iter % opts.drift_every == 0) {
      pin = check_pinwheel(u).pinwheel;
      if (!drift_warned && drift_diagnostic(u).flagged) {
        res.diag.warnings.push_back("boundary mass above 1e-3: possible escape to infinity");
        drift_warned = true;
      }
    }
    record(iter, alpha);
  }
  res.diag.rows.back().pinwheel = check_pinwheel(u).pinwheel;
  res.diag.iterations = iter;
  if (!res.diag.converged)
    res.diag.warnings.push_back("not converged: residual " + g17(gnorm) + " after " + std::to_string(iter) +
                                " iterations");
  res.energy = energy;
  res.state = std::move(u);
  return res;
}

void ContinuationSchedule::validate() const {
  if (betas.empty()) throw ParameterError("continuation schedule is empty");
  for (double b : betas)
    if (b > 0) throw ParameterError("continuation betas must be <= 0");
  if (betas.size() < 2) return;
  const bool down = betas[1] < betas[0];
  for (std::size_t k = 1; k < betas.size(); ++k)
    if (down ? !(betas[k] < betas[k - 1]) : !(betas[k] > betas[k - 1]))
      throw ParameterError("continuation betas must be strictly monotone");
}

OverlapMetrics overlap_metrics(const SystemState& s, double rel_threshold) {
  s.validate();
  Discretization disc(s.params, s.grid());
  const int ell = s.ell();
  const double p = s.params.p;
  OverlapMetrics m;
  m.pair.assign(ell, std::vector<double>(ell, 0.0));
  for (int i = 0; i < ell; ++i)
    for (int j = i + 1; j < ell; ++j) {
      m.pair[i][j] = m.pair[j][i] = disc.cross_integral(s.u[i], s.u[j], p);
      m.total += m.pair[i][j];
    }
  m.beta_times_total = s.params.beta * m.total;
  m.delta = rel_threshold * max_abs(s);
  std::size_t count = 0;
  for (std::size_t k = 0; k < s.grid().size(); ++k) {
    int above = 0;
    for (int i = 0; i < ell; ++i) above += std::abs(s.u[i].v[k]) > m.delta;
    count += above >= 2;
  }
  m.support_intersection = double(count) * s.grid().cell_volume();
  m.support_fraction = m.support_intersection / s.grid().domain_measure();
  return m;
}

std::vector<ContinuationStep> continuation(const SystemState& initial, const ContinuationSchedule& schedule,
                                           const SolveOptions& opts) {
  schedule.validate();
  std::vector<ContinuationStep> out;
  for (double b : schedule.betas) {
    SystemState start = (schedule.warm_start && !out.empty()) ? out.back().result.state : initial;
    start.params.beta = b;
    ContinuationStep step;
    step.beta = b;
    step.result = minimize(start, opts);
    step.overlap = overlap_metrics(step.result.state);
    out.push_back(std::move(step));
  }
  return out;
}

void write_continuation_csv(std::ostream& os, const std::vector<ContinuationStep>& steps) {
  os << "beta,energy,overlap,beta_times_overlap,support_intersection,support_fraction,converged,iterations\n";
  for (const auto& s : steps)
    os << g17(s.beta) << ',' << g17(s.result.energy) << ',' << g17(s.overlap.total) << ','
       << g17(s.overlap.beta_times_total) << ',' << g17(s.overlap.support_intersection) << ','
       << g17(s.overlap.support_fraction) << ',' << (s.result.diag.converged ? 1 : 0) << ','
       << s.result.diag.iterations << '\n';
}

namespace {

Field map_rho(const Field& f, int ell) {
  if (f.grid.d == 1) return f;
  return compose_rotation(f, kPi / ell);
}

int count_connected(const Grid& g, const std::vector<char>& mask) {
  std::vector<char> seen(mask.size(), 0);
  const std::array<std::size_t, 3> stride{std::size_t(g.n[1]) * g.n[2], std::size_t(g.n[2]), 1};
  int sets = 0;
  std::deque<std::size_t> q;
  for (std::size_t s = 0; s < mask.size(); ++s) {
    if (!mask[s] || seen[s]) continue;
    ++sets;
    seen[s] = 1;
    q.push_back(s);
    while (!q.empty()) {
      std::size_t k = q.front();
      q.pop_front();
      for (int a = 0; a < g.d; ++a) {
        int idx = int((k / stride[a]) % g.n[a]);
        for (int dlt : {-1, 1}) {
          int ni = idx + dlt;
          if (ni < 0 || ni >= g.n[a]) continue;
          std::size_t nb = k + (dlt > 0 ? stride[a] : -stride[a]);
          if (mask[nb] && !seen[nb]) {
            seen[nb] = 1;
            q.push_back(nb);
          }
        }
      }
    }
  }
  return sets;
}

}  // namespace

PartitionResult extract_partition(const SystemState& s, double rel_threshold) {
  s.validate();
  const int ell = s.ell();
  const Grid& g = s.grid();
  const double thr = rel_threshold * max_abs(s), tie = 1e-12 * max_abs(s);
  PartitionResult r;
  r.masks.assign(ell, std::vector<char>(g.size(), 0));
  std::size_t total = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    // ties belong to the interface, not to either set
    int best = -1;
    double bv = thr, second = 0;
    for (int i = 0; i < ell; ++i) {
      const double a = std::abs(s.u[i].v[k]);
      if (a > bv) {
        if (best >= 0) second = std::max(second, bv);
        bv = a;
        best = i;
      } else {
        second = std::max(second, a);
      }
    }
    if (best >= 0 && bv - second > tie) {
      r.masks[best][k] = 1;
      ++total;
    }
  }
  if (total == 0) throw NumericalError("empty partition: every component is below the threshold");
  r.pair_overlap.assign(ell, std::vector<double>(ell, 0.0));
  for (int i = 0; i < ell; ++i) {
    std::size_t c = std::count(r.masks[i].begin(), r.masks[i].end(), 1);
    r.measure.push_back(double(c) * g.cell_volume());
    r.connected_sets.push_back(count_connected(g, r.masks[i]));
    for (int j = i + 1; j < ell; ++j) {
      std::size_t both = 0;
      for (std::size_t k = 0; k < g.size(); ++k) both += r.masks[i][k] && r.masks[j][k];
      r.pair_overlap[i][j] = r.pair_overlap[j][i] = double(both) * g.cell_volume();
      r.disjoint = r.disjoint && both == 0;
    }
  }
  for (int i = 0; i < ell; ++i) {
    const int nx = (i + 1) % ell;
    Field ind(g);
    for (std::size_t k = 0; k < g.size(); ++k) ind.v[k] = r.masks[i][k];
    Field mapped = map_rho(ind, ell);
    std::size_t diff = 0, ref = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      bool a = mapped.v[k] > 0.5, b = r.masks[nx][k];
      diff += a != b;
      ref += b;
    }
    r.mapping_residual.push_back(ref ? double(diff) / double(ref) : std::numeric_limits<double>::infinity());
    Field restricted(g);
    for (std::size_t k = 0; k < g.size(); ++k) restricted.v[k] = r.masks[i][k] ? s.u[i].v[k] : 0.0;
    double e = std::numeric_limits<double>::quiet_NaN();
    if (std::count(r.masks[i].begin(), r.masks[i].end(), 1) > 0) e = single_nehari(restricted, s.params.pot, s.params.p);
    r.domain_energy.push_back(e);
  }
  return r;
}

SignChanging sign_changing(const SystemState& s) {
  s.validate();
  if (s.ell() != 2) throw ParameterError("sign_changing requires l = 2");
  SignChanging out;
  out.w = Field(s.grid());
  for (std::size_t k = 0; k < out.w.size(); ++k) out.w.v[k] = s.u[0].v[k] - s.u[1].v[k];
  auto [mn, mx] = std::minmax_element(out.w.v.begin(), out.w.v.end());
  out.min = *mn;
  out.max = *mx;
  SystemState single;
  single.u = {out.w};
  single.params = s.params;
  single.params.ell = 1;
  single.params.beta = 0;
  auto rr = residual(single);
  out.residual = rr.per_component.front();
  Field mapped = s.grid().d == 1 ? compose_reflection(out.w) : compose_rotation(out.w, kPi / 2);
  Field sum(s.grid());
  for (std::size_t k = 0; k < sum.size(); ++k) sum.v[k] = mapped.v[k] + out.w.v[k];
  double nw = l2_norm(out.w);
  out.antisymmetry = nw > 0 ? l2_norm(sum) / nw : 0.0;
  return out;
}

DriftReport drift_diagnostic(const SystemState& s) {
  s.validate();
  const Field& u = s.u.front();
  const Grid& g = u.grid;
  const double q = 2 * s.params.p;
  DriftReport r;
  double mass = 0, mass2 = 0, edge = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto x = g.point(k);
    double w = std::pow(std::abs(u.v[k]), q);
    mass += w;
    for (int a = 0; a < g.d; ++a) r.center[a] += w * x[a];
    double u2 = u.v[k] * u.v[k];
    mass2 += u2;
    bool outer = false;
    for (int a = 0; a < g.d; ++a) outer = outer || std::abs(x[a]) > 0.9 * g.half_width(a);
    if (outer) edge += u2;
  }
  if (mass > 0)
    for (int a = 0; a < g.d; ++a) r.center[a] /= mass;
  r.center_norm = std::sqrt(r.center[0] * r.center[0] + r.center[1] * r.center[1] + r.center[2] * r.center[2]);
  r.boundary_fraction = mass2 > 0 ? edge / mass2 : 0.0;
  r.flagged = r.boundary_fraction > 1e-3;
  return r;
}

std::vector<std::array<double, 3>> analog_centers(const Params& params, double R, int n,
                                                  std::array<double, 3> base) {
  std::vector<std::array<double, 3>> out;
  auto add = [&](std::array<double, 3> c) {
    for (const auto& o : out)
      if (std::abs(o[0] - c[0]) + std::abs(o[1] - c[1]) + std::abs(o[2] - c[2]) < 1e-12 * (1 + R)) return;
    out.push_back(c);
  };
  for (int j = 0; j < params.m; ++j) {
    std::array<double, 3> c{R * base[0], R * base[1], R * base[2]};
    if (params.d == 1) {
      c[0] *= (j % 2) ? -1.0 : 1.0;
    } else {
      double a = 2 * kPi * j / params.m - kPi * n / params.ell;
      double x = c[0], y = c[1];
      c[0] = std::cos(a) * x - std::sin(a) * y;
      c[1] = std::sin(a) * x + std::cos(a) * y;
    }
    add(c);
  }
  return out;
}

SystemState ansatz_state(const Params& params, const Grid& grid, const RadialProfile& prof, double R,
                         std::array<double, 3> base) {
  params.validate();
  if (grid.d != params.d) throw ParameterError("grid and parameter dimensions differ");
  SystemState s;
  s.params = params;
  for (int n = 0; n < params.ell; ++n) {
    Field u(grid);
    for (const auto& c : analog_centers(params, R, n, base)) {
      Field b = embed_radial(prof, c, grid);
      for (std::size_t k = 0; k < u.size(); ++k) u.v[k] += b.v[k];
      for (const auto& w : b.warnings)
        if (std::find(u.warnings.begin(), u.warnings.end(), w) == u.warnings.end()) u.warnings.push_back(w);
    }
    s.u.push_back(std::move(u));
  }
  s.pinwheel = true;
  return s;
}

AnsatzScan analog_ansatz_scan(const Params& params, const Grid& grid, const RadialProfile& prof,
                              const std::vector<double>& R_grid) {
  AnsatzScan scan;
  scan.best_energy = std::numeric_limits<double>::infinity();
  Discretization disc(params, grid);
  for (double R : R_grid) {
    SystemState s = ansatz_state(params, grid, prof, R);
    StateTerms t = disc.terms(s);
    bool feasible = true;
    for (int i = 0; i < s.ell(); ++i) feasible = feasible && t.component_denominator(i, params.beta) > 0;
    if (!feasible) continue;
    double e = nehari_energy(t, params.beta, params.p);
    scan.R.push_back(R);
    scan.energy.push_back(e);
    if (e < scan.best_energy) {
      scan.best_energy = e;
      scan.best_R = R;
    }
  }
  if (scan.R.empty()) throw InfeasibleProjection("no feasible ansatz radius in the scan", 0);
  return scan;
}

}  // namespace pinwheel
