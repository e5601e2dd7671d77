#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cqed/eigen_analysis.hpp"
#include "cqed/fitting.hpp"

namespace cqed
{

ParameterEstimate const & FitResult::at(std::string const & name) const
{
	for (auto const & p : parameters)
		if (p.name == name)
			return p;
	throw ConfigError(name, "no such parameter in fit result");
}

namespace
{

double default_step(FreeParameter const & f)
{
	if (f.step > 0)
		return f.step;
	bool const bounded = f.lower > -1e299 && f.upper < 1e299;
	if (bounded && f.upper > f.lower)
		return 0.1 * (f.upper - f.lower);
	return std::max(0.05 * std::abs(f.initial), 1e-3);
}

void fill_box(std::vector<FreeParameter> const & free, BoxProblem & box)
{
	Eigen::Index const n = static_cast<Eigen::Index>(free.size());
	box.initial.resize(n);
	box.lower.resize(n);
	box.upper.resize(n);
	box.step.resize(n);
	for (Eigen::Index i = 0; i < n; ++i)
	{
		auto const & f = free[i];
		if (!(f.lower <= f.initial && f.initial <= f.upper))
			throw ConfigError(f.path, "initial value outside bounds");
		box.initial(i) = f.initial;
		box.lower(i) = f.lower;
		box.upper(i) = f.upper;
		box.step(i) = default_step(f);
	}
}

}  // namespace

// Hamiltonian fit -----------------------------------------------------------------------

FitResult hamiltonian_fit(std::span<ResonancePosition const> positions, HamiltonianFitSpec const & spec)
{
	spec.model.validate();
	get_parameter(spec.model, spec.control_path);
	std::size_t const p = spec.free.size();
	if (positions.size() < p + 1)
		throw ConfigError("positions", "need at least #free + 1 resonance positions");

	int scale_index = -1;
	for (std::size_t i = 0; i < p; ++i)
	{
		if (spec.free[i].path == control_scale_name)
			scale_index = static_cast<int>(i);
		else
			get_parameter(spec.model, spec.free[i].path);
	}

	auto configure = [&](Eigen::VectorXd const & x, SystemConfig & config, double & scale) {
		config = spec.model;
		scale = spec.control_scale;
		for (std::size_t i = 0; i < p; ++i)
		{
			if (static_cast<int>(i) == scale_index)
				scale = x(i);
			else
				set_parameter(config, spec.free[i].path, x(i));
		}
	};

	BoxProblem box;
	fill_box(spec.free, box);
	box.residuals = [&](Eigen::VectorXd const & x) {
		SystemConfig config;
		double scale = 1.0;
		configure(x, config, scale);
		Eigen::VectorXd r(static_cast<Eigen::Index>(positions.size()));
		for (std::size_t k = 0; k < positions.size(); ++k)
		{
			set_parameter(config, spec.control_path, scale * positions[k].control);
			std::vector<double> const freqs = transition_frequencies(config);
			double best = std::numeric_limits<double>::infinity();
			for (double f : freqs)
				if (std::abs(f - positions[k].frequency) < std::abs(best))
					best = f - positions[k].frequency;
			r(static_cast<Eigen::Index>(k)) = best;
		}
		return r;
	};

	MinimizeResult const m = minimize(box, spec.options);

	FitResult result;
	result.stage = spec.stage;
	result.iterations = m.iterations;
	result.evaluations = m.evaluations;
	result.failed_evaluations = m.failed_evaluations;
	result.residual_norm = std::sqrt(m.cost);
	result.initial_residual_norm = std::sqrt(m.initial_cost);
	double const dof = static_cast<double>(positions.size()) - static_cast<double>(p);
	result.reduced_chi2 = m.cost / std::max(1.0, dof);
	result.converged = m.converged;
	if (!m.converged)
		result.diagnostics = "simplex did not converge within the restart budget";

	double scale = 1.0;
	configure(m.x, result.fitted, scale);
	for (std::size_t i = 0; i < p; ++i)
	{
		double const var = m.covariance.size() ? m.covariance(i, i) * result.reduced_chi2 : 0.0;
		result.parameters.push_back({spec.free[i].path, m.x(i), std::sqrt(std::max(0.0, var)), false, spec.stage});
	}
	return result;
}

// Master-equation fit -------------------------------------------------------------------

FitResult master_equation_fit(FitProblem const & problem)
{
	problem.model.validate();
	if (problem.traces.empty())
		throw ConfigError("traces", "fit problem has no traces");
	for (auto const & f : problem.free)
		get_parameter(problem.model, f.path);

	std::size_t const nphys = problem.free.size();
	std::vector<double> sigmas;
	bool sigma_estimated = false;
	std::size_t total_points = 0;
	std::vector<std::size_t> phase_slots(problem.traces.size(), 0);
	std::size_t nuisance = 0;

	for (std::size_t t = 0; t < problem.traces.size(); ++t)
	{
		auto const & tr = problem.traces[t].trace;
		tr.validate();
		if (tr.x.size() > 1 && tr.x[1] < tr.x[0])
			throw ConfigError("traces[" + std::to_string(t) + "]", "probe grid must be increasing");
		for (auto const & [path, v] : problem.traces[t].overrides)
			get_parameter(problem.model, path);
		double s = tr.sigma;
		if (!(s > 0))
		{
			s = estimate_sigma(tr);
			sigma_estimated = true;
			if (!(s > 1e-12))
				s = 1.0;
		}
		sigmas.push_back(s);
		total_points += tr.x.size();
		if (tr.kind == TraceKind::phase_shift)
		{
			phase_slots[t] = nuisance;
			nuisance += 2;
		}
	}

	auto configure = [&](Eigen::VectorXd const & x) {
		SystemConfig c = problem.model;
		for (std::size_t i = 0; i < nphys; ++i)
			set_parameter(c, problem.free[i].path, x(i));
		return c;
	};
	auto trace_config = [&](SystemConfig c, std::size_t t) {
		for (auto const & [path, v] : problem.traces[t].overrides)
			set_parameter(c, path, v);
		return c;
	};

	std::vector<FreeParameter> free = problem.free;
	// Nuisance scale/offset start from a linear least-squares match at the initial point.
	if (nuisance > 0)
	{
		Eigen::VectorXd x0(static_cast<Eigen::Index>(nphys));
		for (std::size_t i = 0; i < nphys; ++i)
			x0(i) = problem.free[i].initial;
		SystemConfig const c0 = configure(x0);
		for (std::size_t t = 0; t < problem.traces.size(); ++t)
		{
			auto const & tr = problem.traces[t].trace;
			if (tr.kind != TraceKind::phase_shift)
				continue;
			PhaseTrace const sim = qubit_spectroscopy_trace(trace_config(c0, t), tr.x, 1.0, 0.0, problem.workers);
			Eigen::MatrixXd A(static_cast<Eigen::Index>(tr.x.size()), 2);
			Eigen::VectorXd b(static_cast<Eigen::Index>(tr.x.size()));
			for (std::size_t i = 0; i < tr.x.size(); ++i)
			{
				A(i, 0) = sim.values[i];
				A(i, 1) = 1.0;
				b(i) = tr.y[i];
			}
			Eigen::Vector2d const so = A.completeOrthogonalDecomposition().solve(b);
			double const scale0 = std::abs(so(0)) > 0 ? so(0) : 1.0;
			double const yr = std::max(1e-6, b.maxCoeff() - b.minCoeff());
			std::string const tag = "[" + std::to_string(t) + "]";
			free.push_back({"scale" + tag, scale0, -1e6 * std::abs(scale0), 1e6 * std::abs(scale0),
				0.1 * std::abs(scale0)});
			free.push_back({"offset" + tag, so(1), so(1) - 100 * yr, so(1) + 100 * yr, 0.1 * yr});
		}
	}

	BoxProblem box;
	fill_box(free, box);
	box.residuals = [&](Eigen::VectorXd const & x) {
		SystemConfig const base = configure(x);
		Eigen::VectorXd r(static_cast<Eigen::Index>(total_points));
		Eigen::Index row = 0;
		for (std::size_t t = 0; t < problem.traces.size(); ++t)
		{
			auto const & tr = problem.traces[t].trace;
			SystemConfig const c = trace_config(base, t);
			if (tr.kind == TraceKind::reflection_magnitude)
			{
				SpectrumTrace const sim = spectrum_trace(c, tr.x, problem.workers);
				for (std::size_t i = 0; i < tr.x.size(); ++i)
					r(row++) = (std::abs(sim.s11[i]) - tr.y[i]) / sigmas[t];
			}
			else
			{
				Eigen::Index const k = static_cast<Eigen::Index>(nphys + phase_slots[t]);
				PhaseTrace const sim = qubit_spectroscopy_trace(c, tr.x, x(k), x(k + 1), problem.workers);
				for (std::size_t i = 0; i < tr.x.size(); ++i)
					r(row++) = (sim.values[i] - tr.y[i]) / sigmas[t];
			}
		}
		return r;
	};

	MinimizeResult const m = minimize(box, problem.options);

	FitResult result;
	result.stage = problem.stage;
	result.iterations = m.iterations;
	result.evaluations = m.evaluations;
	result.failed_evaluations = m.failed_evaluations;
	result.residual_norm = std::sqrt(m.cost);
	result.initial_residual_norm = std::sqrt(m.initial_cost);
	double const dof = static_cast<double>(total_points) - static_cast<double>(free.size());
	result.reduced_chi2 = m.cost / std::max(1.0, dof);
	result.converged = m.converged;
	if (m.failed_evaluations > 0)
		result.diagnostics = std::to_string(m.failed_evaluations) + " trial points failed to simulate and were penalized";
	if (m.failed_evaluations * 2 > m.evaluations)
	{
		result.converged = false;
		result.diagnostics = "diverged: most trial points failed to simulate";
	}
	if (m.residuals.size() == 0)
	{
		result.converged = false;
		result.diagnostics = "diverged: no feasible point found";
		return result;
	}

	result.fitted = configure(m.x);
	result.parameters = problem.held;
	for (auto & h : result.parameters)
		h.fixed = true;
	double const cov_scale = sigma_estimated ? result.reduced_chi2 : 1.0;
	for (std::size_t i = 0; i < free.size(); ++i)
	{
		double const var = m.covariance.size() ? m.covariance(i, i) * cov_scale : 0.0;
		result.parameters.push_back({free[i].path, m.x(i), std::sqrt(std::max(0.0, var)), false, problem.stage});
	}
	return result;
}

std::vector<FitResult> staged_fit(SystemConfig const & model, std::vector<FitProblem> stages)
{
	std::vector<FitResult> results;
	SystemConfig current = model;
	std::vector<ParameterEstimate> held;
	for (auto & stage : stages)
	{
		stage.model = current;
		stage.held = held;
		// Free parameters start from the current model unless the stage overrides them.
		FitResult r = master_equation_fit(stage);
		for (auto const & p : r.parameters)
		{
			if (p.fixed || p.name.rfind("scale[", 0) == 0 || p.name.rfind("offset[", 0) == 0)
				continue;
			ParameterEstimate h = p;
			h.fixed = true;
			held.push_back(h);
		}
		current = r.fitted;
		results.push_back(std::move(r));
	}
	return results;
}

// Synthetic data --------------------------------------------------------------------------

std::vector<SpectrumTrace> synthesize_dataset(SystemConfig const & config, SweepSpec const & sweep,
	std::span<double const> grid, double sigma, std::uint64_t seed, int workers)
{
	if (sigma < 0)
		throw ConfigError("sigma", "must be >= 0");
	std::vector<SpectrumTrace> traces = sweep.path.empty()
		? std::vector<SpectrumTrace>{spectrum_trace(config, grid, workers)}
		: sweep_2d(config, sweep, grid, workers);
	if (sigma == 0)
		return traces;

	std::mt19937_64 rng(seed);
	std::normal_distribution<double> normal(0.0, sigma);
	for (auto & t : traces)
		for (auto & s : t.s11)
		{
			double const re = normal(rng);
			double const im = normal(rng);
			s += Complex(re, im);
		}
	return traces;
}

MeasuredTrace synthesize_phase_trace(SystemConfig const & config, std::span<double const> grid, double scale,
	double offset, double sigma, std::uint64_t seed, int workers)
{
	if (sigma < 0)
		throw ConfigError("sigma", "must be >= 0");
	PhaseTrace const phase = qubit_spectroscopy_trace(config, grid, scale, offset, workers);
	MeasuredTrace m;
	m.x = phase.probe_freqs;
	m.y = phase.values;
	m.sigma = sigma;
	m.kind = TraceKind::phase_shift;
	if (sigma > 0)
	{
		std::mt19937_64 rng(seed);
		std::normal_distribution<double> normal(0.0, sigma);
		for (auto & v : m.y)
			v += normal(rng);
	}
	return m;
}

ScalingFit exchange_scaling_fit(std::span<std::pair<double, double> const> points)
{
	if (points.size() < 2)
		throw ConfigError("points", "need at least two (Delta_r, 2J) points");
	double num = 0.0, den = 0.0, norm_y = 0.0;
	for (auto const & [dr, j] : points)
	{
		if (dr == 0.0)
			throw DegenerateInput("Delta_r = 0 in scaling fit");
		num += j / dr;
		den += 1.0 / (dr * dr);
		norm_y += j * j;
	}
	double const a = num / den;
	double res = 0.0;
	for (auto const & [dr, j] : points)
		res += (j - a / dr) * (j - a / dr);
	return {a, norm_y > 0 ? std::sqrt(res / norm_y) : 0.0};
}

}  // namespace cqed
