#include "pndg/study.hpp"

#include "pndg/errors.hpp"
#include "pndg/solver.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

namespace pndg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Smooth periodic field u_p(x) = prod_a sin(2 pi x_a + (p+1)/2) / (1 + p).
SmoothField manufactured_exact(int dim, int moments) {
  auto factor = [](double x, int p) { return std::sin(kTwoPi * x + 0.5 * (p + 1)); };
  auto dfactor = [](double x, int p) { return kTwoPi * std::cos(kTwoPi * x + 0.5 * (p + 1)); };
  SmoothField f;
  f.value = [=](std::span<const double> x) {
    Eigen::VectorXd u(moments);
    for (int p = 0; p < moments; ++p) {
      double v = 1.0 / (1.0 + p);
      for (int a = 0; a < dim; ++a) v *= factor(x[a], p);
      u[p] = v;
    }
    return u;
  };
  f.derivative = [=](std::span<const double> x, int axis) {
    Eigen::VectorXd u(moments);
    for (int p = 0; p < moments; ++p) {
      double v = 1.0 / (1.0 + p);
      for (int a = 0; a < dim; ++a) v *= a == axis ? dfactor(x[a], p) : factor(x[a], p);
      u[p] = v;
    }
    return u;
  };
  return f;
}

template <class E>
[[noreturn]] void rethrow_as(const E& e, const std::string& context) {
  throw E(context + ": " + e.what());
}

[[noreturn]] void rethrow_annotated(std::exception_ptr ep, const std::string& context) {
  try {
    std::rethrow_exception(ep);
  } catch (const SolverError& e) {
    throw SolverError(context + ": " + e.what(), e.residual());
  } catch (const ConfigError& e) {
    rethrow_as(e, context);
  } catch (const InputError& e) {
    rethrow_as(e, context);
  } catch (const InternalError& e) {
    rethrow_as(e, context);
  }
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; results must be
// written to per-index slots. Exceptions are rethrown in index order.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn, const std::vector<std::string>& labels) {
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](int i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) body(i);
      });
    }
  }
  for (int i = 0; i < n; ++i) {
    if (errors[i]) rethrow_annotated(errors[i], labels[i]);
  }
}

std::string cell_label(int cells, double eps) {
  std::ostringstream os;
  os << "cell (h = 1/" << cells << ", eps = " << eps << ")";
  return os.str();
}

double higher_over_eps(const MomentField& field, double eps) {
  const auto& layout = field.layout;
  double best = 0.0;
  for (int p = 1; p < layout.num_moments(); ++p) {
    double s = 0.0;
    for (int e = 0; e < layout.mesh->num_elements(); ++e) s += field.local(e, p).squaredNorm();
    best = std::max(best, std::sqrt(s));
  }
  return best / eps;
}

double first_moment_norm(const MomentField& field) {
  double s = 0.0;
  for (int e = 0; e < field.layout.mesh->num_elements(); ++e) s += field.local(e, 0).squaredNorm();
  return std::sqrt(s);
}

ErrorRow run_cell(const StudyConfig& config, const MomentMatrices& matrices, int cells, double eps, bool moments) {
  const auto start = std::chrono::steady_clock::now();
  const Problem problem = make_problem(config, eps, matrices);
  std::vector<int> n(config.dim, cells);
  const auto mesh = build_mesh(config.dim, n);
  const LocalBasis basis(config.degree, config.dim);
  const auto system = assemble(mesh, basis, matrices, problem.materials, problem.forcing);
  SolveStats stats;
  const MomentField uh = solve(system, config.solver, &stats);
  const int points = config.error_points > 0 ? config.error_points : config.degree + 3;

  ErrorRow row;
  row.dim = config.dim;
  row.moment_order = config.moment_order;
  row.degree = config.degree;
  row.eps = eps;
  row.cells = cells;
  row.h = 1.0 / cells;
  row.errors = measure_errors(uh, problem.exact, problem.materials, matrices, points);
  row.iterations = stats.iterations;
  row.residual = stats.relative_residual;
  if (moments) {
    row.higher_moments_over_eps = higher_over_eps(uh, eps);
    row.first_moment = first_moment_norm(uh);
    if (problem.modal) {
      double best = 0.0;
      for (int p = 1; p < matrices.size(); ++p) best = std::max(best, problem.modal->component_norm(p));
      row.oracle_higher_moments_over_eps = best / eps;
    }
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

FieldErrors measure_errors(const MomentField& field, const SmoothField& exact, const MaterialField& materials,
                           const MomentMatrices& matrices, int points) {
  const auto& mesh = *field.layout.mesh;
  const int dim = mesh.dim();
  const int nm = field.layout.num_moments();
  const auto rule = tensor_gauss_rule(dim, points);
  const double jacobian = mesh.element_volume() / std::pow(2.0, dim);
  double l2 = 0.0;
  double q = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto origin = mesh.origin(e);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      std::array<double, 2> x{0.0, 0.0};
      for (int a = 0; a < dim; ++a) x[a] = origin[a] + 0.5 * mesh.width(a) * (rule.points[k][a] + 1.0);
      const std::span<const double> xs(x.data(), dim);
      const Eigen::VectorXd diff = exact.value(xs) - field.value_reference(e, rule.points[k]);
      if (diff.size() != nm) throw InputError("exact field has the wrong number of moments");
      const auto qe = materials.q_entries(xs);
      const double w = rule.weights[k] * jacobian;
      l2 += w * diff.squaredNorm();
      q += w * (qe[0] * diff[0] * diff[0] + qe[1] * diff.tail(nm - 1).squaredNorm());
    }
  }
  FieldErrors out;
  out.l2 = std::sqrt(l2);
  out.q = std::sqrt(q);
  out.triple = std::sqrt(0.5 * jump_energy(field, matrices) + q);
  return out;
}

Problem make_problem(const StudyConfig& config, double eps, const MomentMatrices& matrices) {
  const int dim = config.dim;
  const int nm = matrices.size();
  const WaveVector kappa{config.wave_vector[0], dim == 2 ? config.wave_vector[1] : 0};

  if (config.oracle == OracleKind::manufactured) {
    MaterialField materials = MaterialField::constant(config.sigma_t, config.sigma_a, eps);
    if (config.variation > 0.0) {
      const double st = config.sigma_t, sa = config.sigma_a, v = config.variation;
      materials = MaterialField::variable(
          [=](std::span<const double> x) {
            double s = std::sin(kTwoPi * x[0]);
            if (x.size() > 1) s *= std::cos(kTwoPi * x[1]);
            return st * (1.0 + v * s);
          },
          [=](std::span<const double> x) { return sa * (1.0 + v * std::cos(kTwoPi * x[0])); }, eps);
    }
    SmoothField exact = manufactured_exact(dim, nm);
    if (config.forcing == ForcingKind::zero) {
      exact.value = [nm](std::span<const double>) { return Eigen::VectorXd::Zero(nm).eval(); };
      exact.derivative = [nm](std::span<const double>, int) { return Eigen::VectorXd::Zero(nm).eval(); };
    }
    VectorFunction forcing = manufactured_forcing(exact, materials, matrices, dim);
    return {materials, forcing, exact, std::nullopt};
  }

  const auto materials = MaterialField::constant(config.sigma_t, config.sigma_a, eps);
  const double amp = config.forcing == ForcingKind::zero ? 0.0 : config.amplitude;
  FourierForcing forcing;
  if (config.forcing == ForcingKind::all_moments) {
    Eigen::VectorXd a(nm);
    for (int p = 0; p < nm; ++p) a[p] = amp / (1.0 + p);
    forcing = FourierForcing::cosine(dim, kappa, a);
  } else {
    forcing = ScalarFourier::cosine(dim, kappa, amp).moments(nm);
  }
  VectorFunction fv = [forcing](std::span<const double> x) { return forcing.value(x); };

  ReferenceSolution modal;
  if (config.oracle == OracleKind::kinetic) {
    const auto kinetic = kinetic_fourier_solve(eps, config.sigma_t, config.sigma_a,
                                               ScalarFourier::cosine(dim, kappa, amp), sphere_quadrature(80));
    modal = kinetic.moments(matrices.order);
  } else {
    modal = pn_fourier_solve(eps, config.sigma_t, config.sigma_a, forcing, matrices);
  }
  return {materials, fv, modal.as_field(), modal};
}

std::vector<std::optional<double>> eoc(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size() || h.size() < 2) throw InputError("eoc needs two or more (h, error) pairs of equal length");
  std::vector<std::optional<double>> rates;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (errors[i] > 0.0 && errors[i + 1] > 0.0 && h[i] > 0.0 && h[i + 1] > 0.0 && h[i] != h[i + 1]) {
      rates.emplace_back(std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]));
    } else {
      rates.emplace_back(std::nullopt);
    }
  }
  return rates;
}

ErrorReport run_convergence(const StudyConfig& config, const StudyOptions& options) {
  config.validate();
  const auto matrices = moment_matrices(MomentBasis(config.moment_order));
  const int nh = static_cast<int>(config.cells.size());
  const int ne = static_cast<int>(config.eps.size());
  ErrorReport report{config, std::vector<ErrorRow>(static_cast<std::size_t>(nh * ne))};
  std::vector<std::string> labels;
  for (int ie = 0; ie < ne; ++ie) {
    for (int ih = 0; ih < nh; ++ih) labels.push_back(cell_label(config.cells[ih], config.eps[ie]));
  }
  parallel_for(
      nh * ne, options.threads,
      [&](int i) {
        report.rows[i] = run_cell(config, matrices, config.cells[i % nh], config.eps[i / nh], false);
      },
      labels);
  for (int ie = 0; ie < ne; ++ie) {
    for (int ih = 1; ih < nh; ++ih) {
      const auto& prev = report.rows[ie * nh + ih - 1];
      auto& row = report.rows[ie * nh + ih];
      row.eoc_l2 = eoc({prev.h, row.h}, {prev.errors.l2, row.errors.l2})[0];
    }
  }
  return report;
}

ErrorReport run_eps_sweep(const StudyConfig& config, const StudyOptions& options) {
  config.validate();
  const auto matrices = moment_matrices(MomentBasis(config.moment_order));
  const int ne = static_cast<int>(config.eps.size());
  const int cells = config.cells.back();
  ErrorReport report{config, std::vector<ErrorRow>(static_cast<std::size_t>(ne))};
  std::vector<std::string> labels;
  for (double e : config.eps) labels.push_back(cell_label(cells, e));
  parallel_for(
      ne, options.threads, [&](int i) { report.rows[i] = run_cell(config, matrices, cells, config.eps[i], true); },
      labels);
  return report;
}

std::vector<NSweepRow> run_n_sweep(const StudyConfig& config, int quadrature_order) {
  config.validate();
  if (config.oracle == OracleKind::manufactured || config.variation > 0.0) {
    throw ConfigError("the N sweep needs constant cross sections and the kinetic reference");
  }
  if (config.forcing == ForcingKind::all_moments) throw ConfigError("the N sweep supports isotropic forcing only");
  const WaveVector kappa{config.wave_vector[0], config.dim == 2 ? config.wave_vector[1] : 0};
  const double amp = config.forcing == ForcingKind::zero ? 0.0 : config.amplitude;
  const auto scalar = ScalarFourier::cosine(config.dim, kappa, amp);
  const auto quad = sphere_quadrature(quadrature_order);
  std::vector<NSweepRow> rows;
  for (double eps : config.eps) {
    const auto kinetic = kinetic_fourier_solve(eps, config.sigma_t, config.sigma_a, scalar, quad);
    for (int order : config.moment_orders) {
      const auto matrices = moment_matrices(MomentBasis(order));
      const auto pn = pn_fourier_solve(eps, config.sigma_t, config.sigma_a, scalar.moments(matrices.size()), matrices);
      NSweepRow row;
      row.eps = eps;
      row.moment_order = order;
      row.moment_error = kinetic.moments(order).distance(pn);
      row.angular_error = kinetic.angular_distance(pn);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace pndg
