#include "cqed/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace cqed
{
namespace
{

constexpr double penalty = 1e300;

struct Evaluator
{
	BoxProblem const & problem;
	int evaluations = 0;
	int failures = 0;

	double cost(Eigen::VectorXd const & x)
	{
		++evaluations;
		try
		{
			Eigen::VectorXd const r = problem.residuals(x);
			double const c = r.squaredNorm();
			if (std::isfinite(c))
				return c;
		}
		catch (std::exception const &)
		{
		}
		++failures;
		return penalty;
	}
};

struct SimplexRun
{
	Eigen::VectorXd x;
	double cost;
	int iterations;
	bool converged;
};

SimplexRun nelder_mead(Evaluator & eval, Eigen::VectorXd const & start, Eigen::VectorXd const & step,
	BoxProblem const & problem, MinimizeOptions const & options)
{
	Eigen::Index const n = start.size();
	std::vector<Eigen::VectorXd> pts(n + 1, start);
	std::vector<double> f(n + 1);
	f[0] = eval.cost(start);
	for (Eigen::Index i = 0; i < n; ++i)
	{
		Eigen::VectorXd p = start;
		p(i) += step(i);
		if (p(i) > problem.upper(i))
			p(i) = start(i) - step(i);
		pts[i + 1] = clamp_to_box(p, problem.lower, problem.upper);
		f[i + 1] = eval.cost(pts[i + 1]);
	}

	int const budget_end = eval.evaluations + options.max_evaluations;
	std::vector<std::size_t> order(n + 1);
	int iterations = 0;
	bool converged = false;

	auto clamp = [&](Eigen::VectorXd const & v) { return clamp_to_box(v, problem.lower, problem.upper); };

	while (eval.evaluations < budget_end)
	{
		std::iota(order.begin(), order.end(), 0);
		std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
		std::size_t const best = order.front(), worst = order.back(), second = order[n - 1];

		double const spread = std::abs(f[worst] - f[best]);
		double simplex_size = 0.0;
		for (Eigen::Index i = 0; i <= n; ++i)
			simplex_size = std::max(simplex_size, ((pts[i] - pts[best]).array() / step.array()).abs().maxCoeff());
		if ((spread <= options.tolerance * (std::abs(f[best]) + 1e-300) && simplex_size < 1e-3) || simplex_size < 1e-9)
		{
			converged = true;
			break;
		}
		++iterations;

		Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
		for (std::size_t i : order)
			if (i != worst)
				centroid += pts[i];
		centroid /= static_cast<double>(n);

		Eigen::VectorXd const xr = clamp(centroid + (centroid - pts[worst]));
		double const fr = eval.cost(xr);
		if (fr < f[best])
		{
			Eigen::VectorXd const xe = clamp(centroid + 2.0 * (centroid - pts[worst]));
			double const fe = eval.cost(xe);
			if (fe < fr)
			{
				pts[worst] = xe;
				f[worst] = fe;
			}
			else
			{
				pts[worst] = xr;
				f[worst] = fr;
			}
			continue;
		}
		if (fr < f[second])
		{
			pts[worst] = xr;
			f[worst] = fr;
			continue;
		}
		bool const outside = fr < f[worst];
		Eigen::VectorXd const xc = outside
			? clamp(centroid + 0.5 * (xr - centroid))
			: clamp(centroid + 0.5 * (pts[worst] - centroid));
		double const fc = eval.cost(xc);
		if (fc < (outside ? fr : f[worst]))
		{
			pts[worst] = xc;
			f[worst] = fc;
			continue;
		}
		for (std::size_t i : order)
		{
			if (i == best)
				continue;
			pts[i] = clamp(pts[best] + 0.5 * (pts[i] - pts[best]));
			f[i] = eval.cost(pts[i]);
		}
	}

	std::size_t const best =
		static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
	return {pts[best], f[best], iterations, converged};
}

}  // namespace

Eigen::VectorXd clamp_to_box(Eigen::VectorXd x, Eigen::VectorXd const & lower, Eigen::VectorXd const & upper)
{
	return x.cwiseMax(lower).cwiseMin(upper);
}

Eigen::MatrixXd numeric_jacobian(BoxProblem const & problem, Eigen::VectorXd const & x, Eigen::VectorXd const & r0)
{
	// A side that leaves the box or fails to evaluate is dropped; with both sides gone the
	// column stays zero.
	auto try_eval = [&](Eigen::VectorXd const & at) -> std::optional<Eigen::VectorXd> {
		try
		{
			Eigen::VectorXd r = problem.residuals(at);
			if (r.size() == r0.size() && r.allFinite())
				return r;
		}
		catch (std::exception const &)
		{
		}
		return std::nullopt;
	};

	Eigen::Index const n = x.size();
	Eigen::MatrixXd J = Eigen::MatrixXd::Zero(r0.size(), n);
	for (Eigen::Index j = 0; j < n; ++j)
	{
		double const h = std::max(1e-7 * std::abs(x(j)), 1e-4 * problem.step(j));
		Eigen::VectorXd xp = x, xm = x;
		xp(j) += h;
		xm(j) -= h;
		std::optional<Eigen::VectorXd> const rp = xp(j) <= problem.upper(j) ? try_eval(xp) : std::nullopt;
		std::optional<Eigen::VectorXd> const rm = xm(j) >= problem.lower(j) ? try_eval(xm) : std::nullopt;
		if (rp && rm)
			J.col(j) = (*rp - *rm) / (2.0 * h);
		else if (rp)
			J.col(j) = (*rp - r0) / h;
		else if (rm)
			J.col(j) = (r0 - *rm) / h;
	}
	return J;
}

namespace
{

void finalize(BoxProblem const & problem, MinimizeResult & result)
{
	if (result.x.size() == 0)
	{
		result.jacobian.resize(result.residuals.size(), 0);
		result.covariance.resize(0, 0);
		return;
	}
	result.jacobian = numeric_jacobian(problem, result.x, result.residuals);
	Eigen::MatrixXd const jtj = result.jacobian.transpose() * result.jacobian;
	result.covariance = jtj.completeOrthogonalDecomposition().pseudoInverse();
}

}  // namespace

MinimizeResult levenberg_marquardt(BoxProblem const & problem, int max_iterations)
{
	MinimizeResult result;
	result.x = clamp_to_box(problem.initial, problem.lower, problem.upper);
	result.residuals = problem.residuals(result.x);
	result.cost = result.initial_cost = result.residuals.squaredNorm();
	result.evaluations = 1;

	Eigen::Index const n = result.x.size();
	if (n == 0)
	{
		result.converged = true;
		finalize(problem, result);
		return result;
	}

	double lambda = 1e-3;
	for (int it = 0; it < max_iterations; ++it)
	{
		result.iterations = it + 1;
		Eigen::MatrixXd const J = numeric_jacobian(problem, result.x, result.residuals);
		result.evaluations += 2 * static_cast<int>(n);
		Eigen::MatrixXd const jtj = J.transpose() * J;
		Eigen::VectorXd const grad = J.transpose() * result.residuals;

		bool improved = false;
		for (int tries = 0; tries < 12; ++tries)
		{
			Eigen::MatrixXd damped = jtj;
			damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
			Eigen::VectorXd const delta = damped.ldlt().solve(-grad);
			Eigen::VectorXd const trial = clamp_to_box(result.x + delta, problem.lower, problem.upper);
			Eigen::VectorXd r;
			double c = std::numeric_limits<double>::infinity();
			try
			{
				r = problem.residuals(trial);
				c = r.squaredNorm();
			}
			catch (std::exception const &)
			{
				++result.failed_evaluations;
			}
			++result.evaluations;
			if (std::isfinite(c) && c < result.cost)
			{
				double const rel = (result.cost - c) / std::max(result.cost, 1e-300);
				double const move = ((trial - result.x).array() / problem.step.array()).abs().maxCoeff();
				result.x = trial;
				result.residuals = r;
				result.cost = c;
				lambda = std::max(lambda / 10.0, 1e-12);
				improved = true;
				if (rel < 1e-12 || move < 1e-10)
					result.converged = true;
				break;
			}
			lambda *= 10.0;
		}
		if (!improved)
		{
			// No downhill step at any damping: stationary to working precision.
			result.converged = true;
			break;
		}
		if (result.converged)
			break;
	}
	finalize(problem, result);
	return result;
}

MinimizeResult minimize(BoxProblem const & problem, MinimizeOptions const & options)
{
	Eigen::Index const n = problem.initial.size();
	MinimizeResult result;
	Eigen::VectorXd const start = clamp_to_box(problem.initial, problem.lower, problem.upper);

	if (n == 0)
	{
		result.x = start;
		result.residuals = problem.residuals(start);
		result.cost = result.initial_cost = result.residuals.squaredNorm();
		result.evaluations = 1;
		result.converged = true;
		finalize(problem, result);
		return result;
	}

	Evaluator eval{problem};
	result.initial_cost = eval.cost(start);

	SimplexRun best = nelder_mead(eval, start, problem.step, problem, options);
	int iterations = best.iterations;
	bool converged = best.converged;

	std::mt19937_64 rng(options.seed);
	std::normal_distribution<double> normal(0.0, 1.0);
	for (int r = 0; r < options.restarts; ++r)
	{
		Eigen::VectorXd x = best.x;
		Eigen::VectorXd step = problem.step;
		for (Eigen::Index i = 0; i < n; ++i)
		{
			x(i) += 0.5 * problem.step(i) * normal(rng);
			step(i) *= (normal(rng) < 0 ? -1.0 : 1.0) * 0.5;
		}
		x = clamp_to_box(x, problem.lower, problem.upper);
		SimplexRun const run = nelder_mead(eval, x, step, problem, options);
		iterations += run.iterations;
		converged = converged || run.converged;
		if (run.cost < best.cost)
		{
			best = run;
			converged = run.converged;
		}
	}

	result.x = best.x;
	result.cost = best.cost;
	result.iterations = iterations;
	result.evaluations = eval.evaluations;
	result.failed_evaluations = eval.failures;
	result.converged = converged && best.cost < penalty;
	if (!(best.cost < penalty))
		return result;
	result.residuals = problem.residuals(result.x);

	if (options.polish)
	{
		BoxProblem polished = problem;
		polished.initial = result.x;
		MinimizeResult lm = levenberg_marquardt(polished);
		result.evaluations += lm.evaluations;
		result.iterations += lm.iterations;
		result.failed_evaluations += lm.failed_evaluations;
		if (lm.cost <= result.cost)
		{
			result.x = lm.x;
			result.residuals = lm.residuals;
			result.cost = lm.cost;
		}
	}
	finalize(problem, result);
	return result;
}

}  // namespace cqed
