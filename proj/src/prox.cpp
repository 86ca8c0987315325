#include "iapial/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "iapial/errors.hpp"

namespace iapial {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double soft_threshold(double v, double kappa) {
  if (v > kappa) return v - kappa;
  if (v < -kappa) return v + kappa;
  return 0.0;
}

Vector project_simplex(const Simplex& s, const Vector& x) {
  Vector pos = x.cwiseMax(0.0);
  if (pos.sum() <= s.radius) return pos;
  // Sort-and-threshold onto {z >= 0, sum z = radius}.
  std::vector<double> sorted(x.data(), x.data() + x.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumsum += sorted[i];
    const double candidate = (cumsum - s.radius) / static_cast<double>(i + 1);
    if (sorted[i] - candidate >= 0.0) theta = candidate;
  }
  return (x.array() - theta).cwiseMax(0.0).matrix();
}

// Minimizes a unimodal function on [lo, hi] by ternary search.
double ternary_search(const std::function<double(double)>& phi, double lo, double hi, int iterations) {
  for (int it = 0; it < iterations && hi - lo > 0.0; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (phi(m1) <= phi(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void check_regularizer(const Regularizer& h) {
  if (!(h.l1_scale >= 0.0) || !std::isfinite(h.l1_scale)) {
    throw StructuralError("l1 scale must be a finite nonnegative number");
  }
  std::visit(overloaded{
                 [&](const Box& b) {
                   if (b.lower.size() != b.upper.size() || b.lower.size() == 0) {
                     throw StructuralError("box bounds must be nonempty and of equal length");
                   }
                   if (!b.lower.allFinite() || !b.upper.allFinite()) {
                     throw StructuralError("box bounds must be finite");
                   }
                   if ((b.lower.array() > b.upper.array()).any()) {
                     throw StructuralError("box requires lower <= upper componentwise");
                   }
                 },
                 [&](const Ball& b) {
                   if (b.center.size() == 0) throw StructuralError("ball center is empty");
                   if (!(b.radius > 0.0) || !std::isfinite(b.radius)) {
                     throw StructuralError("ball radius must be positive");
                   }
                   if (h.l1_scale != 0.0) throw StructuralError("l1 term is only supported on boxes");
                 },
                 [&](const Simplex& s) {
                   if (s.dim <= 0) throw StructuralError("simplex dimension must be positive");
                   if (!(s.radius > 0.0) || !std::isfinite(s.radius)) {
                     throw StructuralError("simplex radius must be positive");
                   }
                   if (h.l1_scale != 0.0) throw StructuralError("l1 term is only supported on boxes");
                 }},
             h.set);
}

std::string kind_name(const Regularizer& h) {
  return std::visit(overloaded{[&](const Box&) -> std::string { return h.l1_scale > 0.0 ? "l1_box" : "box"; },
                               [](const Ball&) -> std::string { return "ball"; },
                               [](const Simplex&) -> std::string { return "simplex"; }},
                    h.set);
}

int dimension(const DomainSet& set) {
  return std::visit(overloaded{[](const Box& b) { return static_cast<int>(b.lower.size()); },
                               [](const Ball& b) { return static_cast<int>(b.center.size()); },
                               [](const Simplex& s) { return s.dim; }},
                    set);
}

bool contains(const DomainSet& set, const Vector& z, double tol) {
  if (z.size() != dimension(set)) return false;
  return std::visit(
      overloaded{[&](const Box& b) {
                   for (Eigen::Index i = 0; i < z.size(); ++i) {
                     if (z[i] < b.lower[i] - tol * (1.0 + std::abs(b.lower[i]))) return false;
                     if (z[i] > b.upper[i] + tol * (1.0 + std::abs(b.upper[i]))) return false;
                   }
                   return true;
                 },
                 [&](const Ball& b) { return (z - b.center).norm() <= b.radius * (1.0 + tol) + tol; },
                 [&](const Simplex& s) {
                   return z.minCoeff() >= -tol * (1.0 + s.radius) && z.sum() <= s.radius + tol * (1.0 + s.radius);
                 }},
      set);
}

double value(const Regularizer& h, const Vector& z, double tol) {
  if (!contains(h.set, z, tol)) return kInf;
  return h.l1_scale > 0.0 ? h.l1_scale * z.lpNorm<1>() : 0.0;
}

Vector project(const DomainSet& set, const Vector& x) {
  return std::visit(overloaded{[&](const Box& b) -> Vector { return x.cwiseMax(b.lower).cwiseMin(b.upper); },
                               [&](const Ball& b) -> Vector {
                                 const Vector d = x - b.center;
                                 const double dist = d.norm();
                                 if (dist <= b.radius) return x;
                                 return b.center + (b.radius / dist) * d;
                               },
                               [&](const Simplex& s) -> Vector { return project_simplex(s, x); }},
                    set);
}

Vector prox(const Regularizer& h, double t, const Vector& x) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ArgumentError("prox step t must be positive");
  if (x.size() != dimension(h.set)) throw StructuralError("prox input has wrong dimension");
  if (h.l1_scale > 0.0) {
    const auto& box = std::get<Box>(h.set);
    const double kappa = t * h.l1_scale;
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      out[i] = std::clamp(soft_threshold(x[i], kappa), box.lower[i], box.upper[i]);
    }
    return out;
  }
  return project(h.set, x);
}

Vector shifted_prox(const Regularizer& h, const Vector& a, double alpha, const Vector& center) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ArgumentError("shifted prox requires alpha > 0");
  return prox(h, 1.0 / alpha, center - a / alpha);
}

double prox_objective(const Regularizer& h, double t, const Vector& x, const Vector& u) {
  return value(h, u) + (u - x).squaredNorm() / (2.0 * t);
}

Vector brute_force_prox(const Regularizer& h, double t, const Vector& x, int iterations) {
  if (!(t > 0.0)) throw ArgumentError("prox step t must be positive");
  return std::visit(
      overloaded{
          [&](const Box& b) -> Vector {
            Vector u(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) {
              const double xi = x[i];
              auto phi = [&](double v) { return h.l1_scale * std::abs(v) + (v - xi) * (v - xi) / (2.0 * t); };
              u[i] = ternary_search(phi, b.lower[i], b.upper[i], iterations);
            }
            return u;
          },
          [&](const Ball& b) -> Vector {
            // u(m) = (x + m c)/(1 + m) is the minimizer of the Lagrangian with multiplier m/2t.
            if ((x - b.center).norm() <= b.radius) return x;
            auto point = [&](double m) -> Vector { return (x + m * b.center) / (1.0 + m); };
            double lo = 0.0, hi = 1.0;
            while ((point(hi) - b.center).norm() > b.radius) hi *= 2.0;
            for (int it = 0; it < iterations; ++it) {
              const double mid = 0.5 * (lo + hi);
              if ((point(mid) - b.center).norm() > b.radius) {
                lo = mid;
              } else {
                hi = mid;
              }
            }
            return point(hi);
          },
          [&](const Simplex& s) -> Vector {
            auto point = [&](double tau) -> Vector { return (x.array() - tau).cwiseMax(0.0).matrix(); };
            if (point(0.0).sum() <= s.radius) return point(0.0);
            double lo = 0.0, hi = x.maxCoeff();
            for (int it = 0; it < iterations; ++it) {
              const double mid = 0.5 * (lo + hi);
              if (point(mid).sum() > s.radius) {
                lo = mid;
              } else {
                hi = mid;
              }
            }
            return point(hi);
          }},
      h.set);
}

double diameter(const DomainSet& set) {
  return std::visit(overloaded{[](const Box& b) { return (b.upper - b.lower).norm(); },
                               [](const Ball& b) { return 2.0 * b.radius; },
                               [](const Simplex& s) { return s.dim >= 2 ? std::sqrt(2.0) * s.radius : s.radius; }},
                    set);
}

double boundary_distance(const DomainSet& set, const Vector& z) {
  return std::visit(overloaded{[&](const Box& b) {
                                 return std::min((z - b.lower).minCoeff(), (b.upper - z).minCoeff());
                               },
                               [&](const Ball& b) { return b.radius - (z - b.center).norm(); },
                               [&](const Simplex& s) {
                                 const double facet = (s.radius - z.sum()) / std::sqrt(static_cast<double>(s.dim));
                                 return std::min(z.minCoeff(), facet);
                               }},
                    set);
}

double max_norm(const DomainSet& set) {
  return std::visit(overloaded{[](const Box& b) { return b.lower.cwiseAbs().cwiseMax(b.upper.cwiseAbs()).norm(); },
                               [](const Ball& b) { return b.center.norm() + b.radius; },
                               [](const Simplex& s) { return s.radius; }},
                    set);
}

double lipschitz_constant(const Regularizer& h) {
  if (h.l1_scale == 0.0) return 0.0;
  return h.l1_scale * std::sqrt(static_cast<double>(dimension(h.set)));
}

double minimum_value(const Regularizer& h) {
  if (h.l1_scale == 0.0) return 0.0;
  const auto& b = std::get<Box>(h.set);
  double total = 0.0;
  for (Eigen::Index i = 0; i < b.lower.size(); ++i) {
    if (b.lower[i] > 0.0) {
      total += b.lower[i];
    } else if (b.upper[i] < 0.0) {
      total += -b.upper[i];
    }
  }
  return h.l1_scale * total;
}

}  // namespace iapial
