// relations.cpp — finer/proportional certificates and the disjoint-vs-joint
// dichotomy over the witness simplex.

#include "witkit/relations.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace witkit {
namespace {

constexpr double bracket_floor = 1e-6;
constexpr double bracket_cap = 1099511627776.0;  // 2^40, guards near-proportional pairs
constexpr double ternary_width = 1e-10;

void require_witness(const HermitianOperator& w, const SeeSawOptions& opts,
                     const std::string& where, const std::string& role) {
  if (certify_witness(w, opts).verdict != WitnessVerdict::witness)
    throw std::invalid_argument(where + ": " + role + " failed witness certification");
}

void require_family(const std::vector<HermitianOperator>& family, const SeeSawOptions& opts,
                    const std::string& where) {
  if (family.empty()) throw std::invalid_argument(where + ": needs at least one witness");
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!(family[i].dims() == family.front().dims()))
      throw std::invalid_argument(where + ": family members live on different spaces");
    require_witness(family[i], opts, where, "member " + std::to_string(i));
  }
}

// Maximum of a concave objective on [lo, hi], down to the given interval width.
template <class F>
double ternary_max(F&& f, double lo, double hi, double width) {
  while (hi - lo > width) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2))
      lo = m1;
    else
      hi = m2;
  }
  return 0.5 * (lo + hi);
}

HermitianOperator combine(const std::vector<HermitianOperator>& family,
                          const Eigen::VectorXd& weights) {
  const int d = family.front().dim();
  Matrix acc = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < family.size(); ++i) acc += weights[static_cast<int>(i)] * family[i].matrix();
  return HermitianOperator(family.front().dims(), std::move(acc));
}

double floor_at(const std::vector<HermitianOperator>& family, const Eigen::VectorXd& weights) {
  return min_eigenvalue(combine(family, weights));
}

// Euclidean projection onto the probability simplex (sort-based).
Eigen::VectorXd project_simplex(Eigen::VectorXd y) {
  const int n = static_cast<int>(y.size());
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (int j = 0; j < n; ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / (j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  for (int i = 0; i < n; ++i) y[i] = std::max(y[i] - theta, 0.0);
  return y;
}

struct SimplexMax {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd weights;
};

// Enumerate all weight vectors with entries k/steps summing to 1,
// lexicographically, and keep the best floor value.
void grid_scan(const std::vector<HermitianOperator>& family, Eigen::VectorXd& weights, int coord,
               int left, int steps, SimplexMax& best) {
  const int n = static_cast<int>(weights.size());
  if (coord == n - 1) {
    weights[coord] = static_cast<double>(left) / steps;
    const double value = floor_at(family, weights);
    if (value > best.value) best = {value, weights};
    return;
  }
  for (int k = 0; k <= left; ++k) {
    weights[coord] = static_cast<double>(k) / steps;
    grid_scan(family, weights, coord + 1, left - k, steps, best);
  }
}

// Maximize h(λ) = λ_min(Σ λ_i W_i) over the simplex; h is concave. Pairs use
// ternary search, up to four members a 0.01 grid plus ternary refinement
// along the fan to each vertex, larger families projected subgradient ascent.
SimplexMax maximize_floor(const std::vector<HermitianOperator>& family) {
  const int n = static_cast<int>(family.size());
  SimplexMax best;

  if (n == 1) {
    best.weights = Eigen::VectorXd::Ones(1);
    best.value = floor_at(family, best.weights);
    return best;
  }

  if (n == 2) {
    const auto h = [&](double t) {
      Eigen::VectorXd w(2);
      w << t, 1.0 - t;
      return floor_at(family, w);
    };
    const double t = ternary_max(h, 0.0, 1.0, ternary_width);
    best.weights = Eigen::VectorXd(2);
    best.weights << t, 1.0 - t;
    best.value = h(t);
    return best;
  }

  if (n <= 4) {
    Eigen::VectorXd weights(n);
    grid_scan(family, weights, 0, 100, 100, best);
    // Refine along segments from the incumbent to each vertex; accept only
    // strict improvements so an exact grid optimum is left untouched.
    bool improved = true;
    for (int pass = 0; improved && pass < 8; ++pass) {
      improved = false;
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd base = best.weights;
        const auto along = [&](double t) {
          Eigen::VectorXd w = (1.0 - t) * base;
          w[i] += t;
          return floor_at(family, w);
        };
        const double t = ternary_max(along, 0.0, 1.0, 1e-12);
        const double value = along(t);
        if (value > best.value + 1e-14) {
          Eigen::VectorXd w = (1.0 - t) * base;
          w[i] += t;
          best = {value, w};
          improved = true;
        }
      }
    }
    return best;
  }

  double specmax = 0.0;
  for (const auto& w : family) specmax = std::max(specmax, spectral_radius(w));
  Eigen::VectorXd lam = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int k = 0; k < 5000; ++k) {
    const HermitianOperator c = combine(family, lam);
    const EigenSystem es = hermitian_eigensystem(c);
    if (es.values[0] > best.value) best = {es.values[0], lam};
    const Vector v = es.vectors.col(0);
    Eigen::VectorXd grad(n);
    for (int i = 0; i < n; ++i)
      grad[i] = std::real(v.dot(family[i].matrix() * v));
    lam = project_simplex(lam + (0.5 / (specmax * std::sqrt(k + 1.0))) * grad);
  }
  const double last = floor_at(family, lam);
  if (last > best.value) best = {last, lam};
  return best;
}

struct Candidate {
  Matrix rho;  // unit trace, PSD
  Eigen::VectorXd margins;
  double worst = std::numeric_limits<double>::infinity();  // max_i margins[i]
};

Candidate make_candidate(const std::vector<HermitianOperator>& family, Matrix rho) {
  Candidate c;
  c.margins.resize(static_cast<int>(family.size()));
  for (std::size_t i = 0; i < family.size(); ++i)
    c.margins[static_cast<int>(i)] = std::real((family[i].matrix() * rho).trace());
  c.worst = c.margins.maxCoeff();
  c.rho = std::move(rho);
  return c;
}

Candidate pure_candidate(const std::vector<HermitianOperator>& family, const Vector& v) {
  return make_candidate(family, Matrix(v * v.adjoint()));
}

// Subgradient descent on pure states for F(ψ) = max_i ⟨ψ|W_i|ψ⟩.
Vector descend(const std::vector<HermitianOperator>& family, Vector v, double specmax) {
  for (int k = 0; k < 250; ++k) {
    int worst = 0;
    double m_worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < family.size(); ++i) {
      const double m = std::real(v.dot(family[i].matrix() * v));
      if (m > m_worst) {
        m_worst = m;
        worst = static_cast<int>(i);
      }
    }
    const double eta = 1.0 / (specmax * std::sqrt(k + 1.0));
    v -= eta * (family[worst].matrix() * v - m_worst * v);
    v.normalize();
  }
  return v;
}

// Alternate softmax-weighted recombination with its bottom eigenvector;
// sharpening β turns the weights into an argmax of the margins.
Candidate softmax_polish(const std::vector<HermitianOperator>& family, Candidate seed) {
  const int d = family.front().dim();
  Candidate best = std::move(seed);
  Eigen::VectorXd margins = best.margins;
  Vector v;
  {
    const EigenSystem es = hermitian_eigensystem(HermitianOperator(family.front().dims(), best.rho));
    v = es.vectors.col(es.values.size() - 1);  // dominant direction of the seed state
  }
  for (const double beta : {4.0, 16.0, 64.0, 256.0}) {
    for (int it = 0; it < 50; ++it) {
      const double peak = margins.maxCoeff();
      Eigen::VectorXd w = (beta * (margins.array() - peak)).exp();
      w /= w.sum();
      Matrix acc = Matrix::Zero(d, d);
      for (std::size_t i = 0; i < family.size(); ++i) acc += w[static_cast<int>(i)] * family[i].matrix();
      const EigenSystem es = hermitian_eigensystem(HermitianOperator(family.front().dims(), std::move(acc)));
      v = es.vectors.col(0);
      Candidate c = pure_candidate(family, v);
      margins = c.margins;
      if (c.worst < best.worst) best = std::move(c);
    }
  }
  return best;
}

// Common-state search shared by joint_detect and joint_analysis; the floor
// maximizer is passed in so it is only ever computed once.
std::optional<JointDetection> detect_given_floor(const std::vector<HermitianOperator>& family,
                                                 const SimplexMax& sm, const SeeSawOptions& opts) {
  const BipartiteDims dims = family.front().dims();
  double specmax = 0.0;
  for (const auto& w : family) specmax = std::max(specmax, spectral_radius(w));

  std::vector<Candidate> pool;
  {
    const EigenSystem es = hermitian_eigensystem(combine(family, sm.weights));
    pool.push_back(pure_candidate(family, es.vectors.col(0)));
  }
  for (const auto& w : family) {
    const EigenSystem es = hermitian_eigensystem(w);
    pool.push_back(pure_candidate(family, es.vectors.col(0)));
  }
  for (int r = 0; r < opts.restarts; ++r) {
    const Vector start = zoo::random_pure(dims, zoo::derive_seed(opts.seed, 5000 + r)).amps();
    pool.push_back(pure_candidate(family, descend(family, start, specmax)));
  }

  const auto better = [](const Candidate& a, const Candidate& b) { return a.worst < b.worst; };
  pool.push_back(softmax_polish(family, *std::min_element(pool.begin(), pool.end(), better)));

  // Margins are affine in the mixing weight, so the worst margin of a pair
  // mixture is convex piecewise linear; ternary-minimize it per pair.
  std::sort(pool.begin(), pool.end(), better);
  const std::size_t top = std::min<std::size_t>(pool.size(), 4);
  for (std::size_t a = 0; a < top; ++a) {
    for (std::size_t b = a + 1; b < top; ++b) {
      const auto mixed_worst = [&](double t) {
        return ((1.0 - t) * pool[a].margins + t * pool[b].margins).maxCoeff();
      };
      const double t = ternary_max([&](double s) { return -mixed_worst(s); }, 0.0, 1.0, 1e-12);
      if (mixed_worst(t) < pool.front().worst) {
        Candidate c = make_candidate(family, (1.0 - t) * pool[a].rho + t * pool[b].rho);
        if (better(c, pool.front())) pool.insert(pool.begin(), std::move(c));
      }
    }
  }

  const Candidate& best = *std::min_element(pool.begin(), pool.end(), better);
  if (!(best.worst < -detect_tol)) return std::nullopt;

  JointDetection found{DensityMatrix(HermitianOperator(dims, best.rho)), {}};
  found.margins.resize(family.size());
  for (std::size_t i = 0; i < family.size(); ++i)
    found.margins[i] = hs_inner(family[i], found.state.op());
  return found;
}

}  // namespace

FinerVerdict finer(const HermitianOperator& w1, const HermitianOperator& w2,
                   const SeeSawOptions& opts) {
  if (!(w1.dims() == w2.dims()))
    throw std::invalid_argument("finer: operands live on different spaces");
  require_witness(w1, opts, "finer", "W1");
  require_witness(w2, opts, "finer", "W2");

  const auto g = [&](double a) { return min_eigenvalue(w1 - a * w2); };

  // Concavity makes g unimodal: double the upper end until g has started to
  // decrease there, then the maximizer is inside the bracket.
  double hi = 1.0;
  double g_hi = g(hi);
  while (hi < bracket_cap) {
    const double next = 2.0 * hi;
    const double g_next = g(next);
    const bool decreasing = g_next < g_hi;
    hi = next;
    g_hi = g_next;
    if (decreasing) break;
  }

  FinerVerdict verdict{};
  const double a_star = ternary_max(g, bracket_floor, hi, ternary_width);
  verdict.best_gap = g(a_star);
  HermitianOperator shift = w1 - a_star * w2;
  const double slack = psd_tolerance(shift);
  verdict.finer = verdict.best_gap >= -slack;
  if (!verdict.finer) return verdict;

  verdict.a = a_star;
  verdict.shift = std::move(shift);

  const auto feasible = [&](double a) { return g(a) >= -slack; };
  double flo = a_star;
  {
    double probe = 0.5 * a_star;
    while (probe > 1e-9 && feasible(probe)) {
      flo = probe;
      probe *= 0.5;
    }
    if (feasible(probe)) {
      flo = probe;
    } else {
      double blo = probe;
      while (flo - blo > ternary_width) {
        const double mid = 0.5 * (flo + blo);
        if (feasible(mid))
          flo = mid;
        else
          blo = mid;
      }
    }
  }
  double fhi = a_star;
  {
    double probe = std::max(2.0 * a_star, 1.0);
    while (probe < bracket_cap && feasible(probe)) {
      fhi = probe;
      probe *= 2.0;
    }
    if (feasible(probe)) {
      fhi = probe;
    } else {
      double bhi = probe;
      while (bhi - fhi > ternary_width) {
        const double mid = 0.5 * (fhi + bhi);
        if (feasible(mid))
          fhi = mid;
        else
          bhi = mid;
      }
    }
  }
  verdict.feasible_interval = std::make_pair(flo, fhi);
  return verdict;
}

std::optional<double> proportional(const HermitianOperator& w1, const HermitianOperator& w2,
                                   const SeeSawOptions&) {
  if (!(w1.dims() == w2.dims()))
    throw std::invalid_argument("proportional: operands live on different spaces");
  const double denom = hs_inner(w2, w2);
  if (denom <= 0.0) return std::nullopt;
  const double a = hs_inner(w1, w2) / denom;
  if (a <= 0.0) return std::nullopt;
  if (frobenius_norm(w1 - a * w2) > proportional_rel_tol * frobenius_norm(w1))
    return std::nullopt;
  return a;
}

std::optional<SimplexCertificate> psd_combination(const std::vector<HermitianOperator>& family,
                                                  const SeeSawOptions& opts) {
  require_family(family, opts, "psd_combination");
  const SimplexMax best = maximize_floor(family);
  HermitianOperator combined = combine(family, best.weights);
  const double h = min_eigenvalue(combined);
  if (h < -psd_tolerance(combined)) return std::nullopt;
  return SimplexCertificate{SimplexKind::psd_found, best.weights, std::move(combined), h};
}

std::optional<JointDetection> joint_detect(const std::vector<HermitianOperator>& family,
                                           const SeeSawOptions& opts) {
  require_family(family, opts, "joint_detect");
  if (opts.restarts <= 0) return std::nullopt;
  return detect_given_floor(family, maximize_floor(family), opts);
}

JointAnalysis joint_analysis(const std::vector<HermitianOperator>& family,
                             const SeeSawOptions& opts) {
  require_family(family, opts, "joint_analysis");
  const SimplexMax best = maximize_floor(family);
  HermitianOperator combined = combine(family, best.weights);
  const double h = min_eigenvalue(combined);

  JointAnalysis out{JointOutcome::inconclusive, std::nullopt, std::nullopt, h};
  if (h >= -psd_tolerance(combined)) {
    out.outcome = JointOutcome::psd_found;
    out.certificate = SimplexCertificate{SimplexKind::psd_found, best.weights, std::move(combined), h};
    return out;
  }
  if (opts.restarts > 0) {
    if (auto found = detect_given_floor(family, best, opts)) {
      out.outcome = JointOutcome::joint_detection;
      out.certificate =
          SimplexCertificate{SimplexKind::all_witnesses, best.weights, std::move(combined), h};
      out.detection = std::move(found);
    }
  }
  return out;
}

LambdaEstimate estimate_lambda(const HermitianOperator& w1, const HermitianOperator& w2,
                               int sample_budget, const SeeSawOptions& opts) {
  if (sample_budget <= 0)
    throw std::invalid_argument("estimate_lambda: empty sample (sample_budget must be positive)");
  const FinerVerdict fv = finer(w1, w2, opts);
  if (!fv.finer) throw std::invalid_argument("estimate_lambda: finer(W1, W2) must hold");

  const EigenSystem es = hermitian_eigensystem(w1);
  const Vector anchor = es.vectors.col(0);
  const double m_anchor = es.values[0];
  const Matrix rho_anchor = anchor * anchor.adjoint();

  const auto ratio_of = [&](const Matrix& rho) {
    const double m1 = std::real((w1.matrix() * rho).trace());
    const double m2 = std::real((w2.matrix() * rho).trace());
    return std::abs(m2) / std::abs(m1);
  };

  double best = ratio_of(rho_anchor);
  for (int k = 0; k < sample_budget; ++k) {
    const DensityMatrix draw = zoo::random_density(w1.dims(), zoo::derive_seed(opts.seed, 2 * k));
    const double m_draw = hs_inner(w1, draw.op());
    double t_enter = 0.0;
    if (m_draw >= -detect_tol) {
      // Slide toward the anchor until the mixture is strictly detected.
      t_enter = (-detect_tol - m_draw) / (m_anchor - m_draw);
      t_enter += (1.0 - t_enter) * 1e-3;
    }
    zoo::Rng rng(zoo::derive_seed(opts.seed, 2 * k + 1));
    const double u = rng.uniform();
    const double t = t_enter + (1.0 - t_enter) * u * u;  // bias toward the detection boundary
    best = std::min(best, ratio_of((1.0 - t) * draw.matrix() + t * rho_anchor));
  }

  LambdaEstimate out;
  out.upper_estimate = best;
  out.lower_bound = 1.0 / *fv.a;
  out.samples_used = sample_budget;
  out.a_max = fv.feasible_interval->second;
  return out;
}

}  // namespace witkit
