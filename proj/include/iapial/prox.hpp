#pragma once

#include <optional>
#include <string>
#include <variant>

#include "iapial/types.hpp"

namespace iapial {

struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

// Capped simplex {z >= 0, sum(z) <= radius}; full-dimensional so a Slater point can be interior.
struct Simplex {
  int dim = 1;
  double radius = 1.0;
};

using DomainSet = std::variant<Box, Ball, Simplex>;

// h = indicator(set) + l1_scale * ||.||_1. A nonzero l1_scale is only supported on boxes.
struct Regularizer {
  DomainSet set;
  double l1_scale = 0.0;
};

// Throws StructuralError when the set data is inconsistent (lower > upper, radius <= 0, ...).
void check_regularizer(const Regularizer& h);

std::string kind_name(const Regularizer& h);
int dimension(const DomainSet& set);

bool contains(const DomainSet& set, const Vector& z, double tol = 1e-12);

// h(z), +infinity outside the domain (tolerance tol on membership).
double value(const Regularizer& h, const Vector& z, double tol = 1e-12);

// Euclidean projection onto the domain.
Vector project(const DomainSet& set, const Vector& x);

// argmin_u { h(u) + ||u - x||^2 / (2t) }. Closed forms only.
Vector prox(const Regularizer& h, double t, const Vector& x);

// argmin_u { <a,u> + h(u) + (alpha/2) ||u - center||^2 } = prox(h, 1/alpha, center - a/alpha).
Vector shifted_prox(const Regularizer& h, const Vector& a, double alpha, const Vector& center);

// Slow reference minimizer of u -> h(u) + ||u - x||^2/(2t) built from 1-D searches
// (ternary search per coordinate on boxes, bisection on the multiplier for balls and simplices).
// Shares no code path with prox().
Vector brute_force_prox(const Regularizer& h, double t, const Vector& x, int iterations = 200);

// Objective of the prox subproblem at u.
double prox_objective(const Regularizer& h, double t, const Vector& x, const Vector& u);

// Domain geometry.
double diameter(const DomainSet& set);
double boundary_distance(const DomainSet& set, const Vector& z);  // dist to the boundary, z inside
double max_norm(const DomainSet& set);                            // sup ||z|| over the domain
double lipschitz_constant(const Regularizer& h);                  // of h on its domain
double minimum_value(const Regularizer& h);                       // min of h on its domain

}  // namespace iapial
