#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace cqed
{

/// Weighted residual vector r(x); the objective is ||r||^2.
using ResidualFunction = std::function<Eigen::VectorXd(Eigen::VectorXd const &)>;

struct BoxProblem
{
	ResidualFunction residuals;
	Eigen::VectorXd initial;
	Eigen::VectorXd lower;
	Eigen::VectorXd upper;
	Eigen::VectorXd step;  ///< characteristic scale of each parameter; sets the initial simplex
};

struct MinimizeOptions
{
	int restarts = 3;
	int max_evaluations = 4000;   ///< per simplex run
	double tolerance = 1e-10;     ///< relative objective spread at which a simplex run stops
	std::uint64_t seed = 1;
	bool polish = true;           ///< Levenberg-Marquardt refinement after the simplex runs
};

struct MinimizeResult
{
	Eigen::VectorXd x;
	Eigen::VectorXd residuals;
	double cost = 0.0;            ///< ||r||^2 at x
	double initial_cost = 0.0;
	int evaluations = 0;
	int iterations = 0;
	int failed_evaluations = 0;   ///< trial points where r(x) threw or was non-finite
	bool converged = false;
	Eigen::MatrixXd jacobian;     ///< dr/dx at x (central differences)
	Eigen::MatrixXd covariance;   ///< (J^T J)^+, unscaled
};

Eigen::VectorXd clamp_to_box(Eigen::VectorXd x, Eigen::VectorXd const & lower, Eigen::VectorXd const & upper);

/// Central-difference Jacobian, stepping inward at the box faces.
Eigen::MatrixXd numeric_jacobian(BoxProblem const & problem, Eigen::VectorXd const & x, Eigen::VectorXd const & r0);

/// Nelder-Mead with seeded restarts around the incumbent, then an optional bounded
/// Levenberg-Marquardt polish. Failing trial points are penalized, not fatal.
MinimizeResult minimize(BoxProblem const & problem, MinimizeOptions const & options = {});

/// Bounded Levenberg-Marquardt from `problem.initial` (no simplex stage).
MinimizeResult levenberg_marquardt(BoxProblem const & problem, int max_iterations = 200);

}  // namespace cqed
