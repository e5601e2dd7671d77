#include <algorithm>
#include <cmath>
#include <numeric>

#include "cqed/fitting.hpp"

namespace cqed
{

std::string to_string(TraceKind kind)
{
	return kind == TraceKind::reflection_magnitude ? "reflection-magnitude" : "phase-shift";
}

TraceKind parse_trace_kind(std::string const & name)
{
	if (name == "reflection-magnitude")
		return TraceKind::reflection_magnitude;
	if (name == "phase-shift")
		return TraceKind::phase_shift;
	throw ConfigError("kind", "expected 'reflection-magnitude' or 'phase-shift', got '" + name + "'");
}

void MeasuredTrace::validate() const
{
	if (x.size() != y.size())
		throw ConfigError("trace", "x and y lengths differ");
	if (x.empty())
		throw ConfigError("trace", "trace is empty");
	for (std::size_t i = 0; i < x.size(); ++i)
		if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
			throw ConfigError("trace", "non-finite value at row " + std::to_string(i));
	bool up = true, down = true;
	for (std::size_t i = 1; i < x.size(); ++i)
	{
		up = up && x[i] > x[i - 1];
		down = down && x[i] < x[i - 1];
	}
	if (!up && !down)
		throw ConfigError("trace", "x grid is not strictly monotone");
}

MeasuredTrace to_measured(SpectrumTrace const & trace, double sigma)
{
	MeasuredTrace m;
	m.x = trace.probe_freqs;
	m.y.reserve(trace.s11.size());
	for (Complex s : trace.s11)
		m.y.push_back(std::abs(s));
	m.sigma = sigma;
	m.kind = TraceKind::reflection_magnitude;
	return m;
}

double estimate_sigma(MeasuredTrace const & trace)
{
	std::size_t const n = trace.y.size();
	std::size_t const tail = std::max<std::size_t>(3, n / 10);
	if (n < 2 * tail + 1)
		return 0.0;
	double sum = 0.0, sum2 = 0.0;
	int count = 0;
	auto take = [&](std::size_t begin, std::size_t end) {
		for (std::size_t i = begin + 1; i < end; ++i)
		{
			double const d = trace.y[i] - trace.y[i - 1];
			sum += d;
			sum2 += d * d;
			++count;
		}
	};
	take(0, tail);
	take(n - tail, n);
	double const mean = sum / count;
	double const var = std::max(0.0, sum2 / count - mean * mean);
	return std::sqrt(var / 2.0);
}

double lorentzian_model(double x, double baseline, std::span<LorentzianPeak const> peaks)
{
	double y = baseline;
	for (auto const & p : peaks)
	{
		double const hw2 = 0.25 * p.width * p.width;
		y += p.amplitude * hw2 / ((x - p.center) * (x - p.center) + hw2);
	}
	return y;
}

namespace
{

struct Extremum
{
	std::size_t index;
	double prominence;
	double width;
};

/// Local minima of `y` ranked by topographic prominence.
std::vector<Extremum> find_minima(std::vector<double> const & x, std::vector<double> const & y)
{
	std::vector<Extremum> out;
	std::size_t const n = y.size();
	for (std::size_t i = 1; i + 1 < n; ++i)
	{
		if (!(y[i] < y[i - 1]))
			continue;
		// plateau-aware right neighbour
		std::size_t j = i + 1;
		while (j < n && y[j] == y[i])
			++j;
		if (j == n || !(y[j] > y[i]))
			continue;

		double left_max = y[i];
		for (std::size_t k = i; k-- > 0;)
		{
			if (y[k] < y[i])
				break;
			left_max = std::max(left_max, y[k]);
		}
		double right_max = y[i];
		for (std::size_t k = i + 1; k < n; ++k)
		{
			if (y[k] < y[i])
				break;
			right_max = std::max(right_max, y[k]);
		}
		double const prominence = std::min(left_max, right_max) - y[i];
		if (!(prominence > 0))
			continue;

		double const half = y[i] + 0.5 * prominence;
		std::size_t lo = i, hi = i;
		while (lo > 0 && y[lo] < half)
			--lo;
		while (hi + 1 < n && y[hi] < half)
			++hi;
		double const width = std::max(std::abs(x[hi] - x[lo]), std::abs(x[std::min(i + 1, n - 1)] - x[i]));
		out.push_back({i, prominence, width});
	}
	std::stable_sort(out.begin(), out.end(), [&](Extremum const & a, Extremum const & b) {
		if (a.prominence != b.prominence)
			return a.prominence > b.prominence;
		return x[a.index] < x[b.index];
	});
	return out;
}

double percentile(std::vector<double> v, double q)
{
	std::sort(v.begin(), v.end());
	double const pos = q * (v.size() - 1);
	std::size_t const lo = static_cast<std::size_t>(std::floor(pos));
	std::size_t const hi = std::min(lo + 1, v.size() - 1);
	return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

}  // namespace

LorentzianFit lorentzian_peaks(
	MeasuredTrace const & trace, int n_peaks, Polarity polarity, std::span<double const> initial_centers)
{
	trace.validate();
	if (n_peaks < 1)
		throw ConfigError("n_peaks", "must be >= 1");
	std::size_t const n = trace.x.size();

	if (polarity == Polarity::automatic)
	{
		if (trace.kind == TraceKind::reflection_magnitude)
			polarity = Polarity::dips;
		else
		{
			double const med = percentile(trace.y, 0.5);
			double const lo = *std::min_element(trace.y.begin(), trace.y.end());
			double const hi = *std::max_element(trace.y.begin(), trace.y.end());
			polarity = (med - lo) >= (hi - med) ? Polarity::dips : Polarity::peaks;
		}
	}
	double const sign = polarity == Polarity::dips ? 1.0 : -1.0;

	// Work on s*y so that features are always minima.
	std::vector<double> ys(n);
	for (std::size_t i = 0; i < n; ++i)
		ys[i] = sign * trace.y[i];

	double const x_span = std::abs(trace.x.back() - trace.x.front());
	double const dx = x_span / std::max<std::size_t>(1, n - 1);
	double const y_range = *std::max_element(ys.begin(), ys.end()) - *std::min_element(ys.begin(), ys.end());
	double const base0 = percentile(ys, 0.9);

	std::vector<LorentzianPeak> init;
	if (!initial_centers.empty())
	{
		if (static_cast<int>(initial_centers.size()) != n_peaks)
			throw FitInitError("expected " + std::to_string(n_peaks) + " initial centers");
		for (double c : initial_centers)
		{
			std::size_t const i = static_cast<std::size_t>(
				std::min_element(trace.x.begin(), trace.x.end(),
					[c](double a, double b) { return std::abs(a - c) < std::abs(b - c); }) -
				trace.x.begin());
			init.push_back({c, std::max(4.0 * dx, x_span / (10.0 * n_peaks)), ys[i] - base0, 0, 0, 0});
		}
	}
	else
	{
		std::vector<Extremum> const minima = find_minima(trace.x, ys);
		if (static_cast<int>(minima.size()) < n_peaks)
			throw FitInitError("found " + std::to_string(minima.size()) + " local extrema, need " +
				std::to_string(n_peaks) + "; supply initial centers");
		for (int j = 0; j < n_peaks; ++j)
		{
			auto const & m = minima[j];
			double const amp = std::min(ys[m.index] - base0, -m.prominence);
			init.push_back({trace.x[m.index], m.width, amp, 0, 0, 0});
		}
	}
	if (!(y_range > 0))
		throw FitInitError("trace is flat");

	// Parameter vector: baseline, then (center, width, amplitude) per peak, in s*y space.
	Eigen::Index const p = 1 + 3 * n_peaks;
	BoxProblem problem;
	problem.initial.resize(p);
	problem.lower.resize(p);
	problem.upper.resize(p);
	problem.step.resize(p);
	problem.initial(0) = base0;
	problem.lower(0) = base0 - 10 * y_range;
	problem.upper(0) = base0 + 10 * y_range;
	problem.step(0) = y_range;
	double const xmin = std::min(trace.x.front(), trace.x.back());
	double const xmax = std::max(trace.x.front(), trace.x.back());
	for (int j = 0; j < n_peaks; ++j)
	{
		Eigen::Index const b = 1 + 3 * j;
		problem.initial(b) = init[j].center;
		problem.lower(b) = xmin;
		problem.upper(b) = xmax;
		problem.step(b) = std::max(dx, 0.1 * init[j].width);
		problem.initial(b + 1) = init[j].width;
		problem.lower(b + 1) = 0.05 * dx;
		problem.upper(b + 1) = 2.0 * x_span;
		problem.step(b + 1) = init[j].width;
		problem.initial(b + 2) = std::min(init[j].amplitude, -1e-3 * y_range);
		problem.lower(b + 2) = -20.0 * y_range;
		problem.upper(b + 2) = 0.0;
		problem.step(b + 2) = y_range;
	}

	Eigen::Map<Eigen::VectorXd const> const xs(trace.x.data(), static_cast<Eigen::Index>(n));
	Eigen::Map<Eigen::VectorXd const> const yv(ys.data(), static_cast<Eigen::Index>(n));
	problem.residuals = [&, n_peaks](Eigen::VectorXd const & q) {
		Eigen::VectorXd model = Eigen::VectorXd::Constant(xs.size(), q(0));
		for (int j = 0; j < n_peaks; ++j)
		{
			double const c = q(1 + 3 * j), hw2 = 0.25 * q(2 + 3 * j) * q(2 + 3 * j), a = q(3 + 3 * j);
			model.array() += a * hw2 / ((xs.array() - c).square() + hw2);
		}
		return Eigen::VectorXd(model - yv);
	};

	MinimizeResult const r = levenberg_marquardt(problem, 500);
	double const dof = std::max<double>(1.0, static_cast<double>(n) - p);
	double const s2 = r.cost / dof;
	Eigen::VectorXd const err = (r.covariance.diagonal() * s2).cwiseMax(0.0).cwiseSqrt();

	LorentzianFit fit;
	fit.baseline = sign * r.x(0);
	fit.baseline_err = err(0);
	for (int j = 0; j < n_peaks; ++j)
	{
		Eigen::Index const b = 1 + 3 * j;
		fit.peaks.push_back({r.x(b), r.x(b + 1), sign * r.x(b + 2), err(b), err(b + 1), err(b + 2)});
	}
	std::sort(fit.peaks.begin(), fit.peaks.end(),
		[](LorentzianPeak const & a, LorentzianPeak const & b) { return a.center < b.center; });
	fit.residual_norm = std::sqrt(r.cost);
	fit.converged = r.converged;
	return fit;
}

}  // namespace cqed
