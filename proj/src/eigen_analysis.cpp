#include "cqed/eigen_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cqed
{

Eigen::Matrix3d OneExcitationModel::hamiltonian() const
{
	Eigen::Matrix3d h;
	h << 0.0, g1, 0.0,
		g1, delta_r, g2,
		0.0, g2, 0.0;
	return h;
}

void compute_brightness(EigenTriple & triple)
{
	for (int j = 0; j < 3; ++j)
	{
		auto const psi = triple.states.col(j);
		triple.resonator_weight(j) = std::norm(psi(basis::gg1));
		triple.drive_brightness(j) = 0.5 * std::norm(psi(basis::eg0) + psi(basis::ge0));
	}
}

EigenTriple diagonalize(Eigen::Matrix3d const & h)
{
	Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(h);
	EigenTriple t;
	t.energies = solver.eigenvalues();
	t.states = solver.eigenvectors().cast<Complex>();
	compute_brightness(t);
	return t;
}

EigenTriple resonant_triplet(double g1, double g2)
{
	if (g1 < 0 || g2 < 0)
		throw DegenerateInput("couplings must be non-negative");
	double const gc = std::hypot(g1, g2);
	if (gc == 0.0)
		throw DegenerateInput("g1 = g2 = 0: the resonant triplet is fully degenerate");

	EigenTriple t;
	t.energies << -gc, 0.0, gc;
	double const norm = 1.0 / (std::sqrt(2.0) * gc);
	Eigen::Vector3d minus, dark, plus;
	minus(basis::eg0) = g1 * norm;
	minus(basis::gg1) = -gc * norm;
	minus(basis::ge0) = g2 * norm;
	dark(basis::eg0) = -g2 / gc;
	dark(basis::gg1) = 0.0;
	dark(basis::ge0) = g1 / gc;
	plus(basis::eg0) = g1 * norm;
	plus(basis::gg1) = gc * norm;
	plus(basis::ge0) = g2 * norm;
	t.states.col(0) = minus.cast<Complex>();
	t.states.col(1) = dark.cast<Complex>();
	t.states.col(2) = plus.cast<Complex>();
	compute_brightness(t);
	return t;
}

DispersiveEigensystem dispersive_eigensystem(OneExcitationModel const & model)
{
	double const g1 = model.g1, g2 = model.g2, dr = model.delta_r;
	double const gc2 = g1 * g1 + g2 * g2;
	double const gc = std::sqrt(gc2);

	DispersiveEigensystem out;
	out.exact = diagonalize(model.hamiltonian());

	// Perturbative states, each normalized.
	struct Entry
	{
		double energy;
		Eigen::Vector3d state;
	};
	std::array<Entry, 3> entries;
	if (gc == 0.0)
	{
		entries[0] = {0.0, Eigen::Vector3d::UnitX()};
		entries[1] = {0.0, Eigen::Vector3d::UnitZ()};
		entries[2] = {dr, Eigen::Vector3d::UnitY()};
	}
	else
	{
		Eigen::Vector3d dark, bright, resonator;
		dark << -g2, 0.0, g1;
		bright << g1 * dr, -gc2, g2 * dr;
		resonator << g1, dr, g2;
		double const shift = dr == 0.0 ? 0.0 : gc2 / dr;
		entries[0] = {0.0, dark.normalized()};
		entries[1] = {-shift, bright.normalized()};
		entries[2] = {dr + shift, resonator.normalized()};
	}
	std::sort(entries.begin(), entries.end(), [](Entry const & a, Entry const & b) { return a.energy < b.energy; });
	for (int j = 0; j < 3; ++j)
	{
		out.perturbative.energies(j) = entries[j].energy;
		out.perturbative.states.col(j) = entries[j].state.cast<Complex>();
	}
	compute_brightness(out.perturbative);
	out.energy_deviation = out.exact.energies - out.perturbative.energies;
	return out;
}

std::string to_string(ExchangeConvention c)
{
	return c == ExchangeConvention::dressed_resonant ? "dressed" : "bare";
}

ExchangeConvention parse_convention(std::string const & name)
{
	if (name == "dressed" || name == "dressed-resonant")
		return ExchangeConvention::dressed_resonant;
	if (name == "bare" || name == "bare-resonant")
		return ExchangeConvention::bare_resonant;
	throw ConfigError("convention", "expected 'dressed' or 'bare', got '" + name + "'");
}

double exchange_splitting(double g1, double g2, double delta_r, ExchangeConvention convention)
{
	if (delta_r == 0.0)
		throw DegenerateInput("Delta_r = 0 is the resonant case; use resonant_triplet");
	return convention == ExchangeConvention::dressed_resonant
		? 2.0 * g1 * g2 / delta_r
		: (g1 * g1 + g2 * g2) / delta_r;
}

Eigen::Matrix2d perturbative_two_qubit_hamiltonian(double g1, double g2, double delta_r)
{
	if (delta_r == 0.0)
		throw DegenerateInput("Delta_r = 0 is the resonant case; use resonant_triplet");
	Eigen::Matrix2d h;
	h << g1 * g1, g1 * g2,
		g1 * g2, g2 * g2;
	return -h / delta_r;
}

namespace
{

/// Splitting of the two lowest (for Delta_r > 0) qubit-like levels with qubit 2 at `eps2`.
double qubit_like_splitting(double g1, double g2, double delta_r, double eps2)
{
	Eigen::Matrix3d h = OneExcitationModel{g1, g2, delta_r}.hamiltonian();
	h(basis::ge0, basis::ge0) = eps2;
	Eigen::Vector3d const e = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(h, Eigen::EigenvaluesOnly).eigenvalues();
	return delta_r > 0 ? e(1) - e(0) : e(2) - e(1);
}

}  // namespace

Anticrossing exact_anticrossing(double g1, double g2, double delta_r)
{
	if (delta_r == 0.0)
		throw DegenerateInput("Delta_r = 0 is the resonant case; use resonant_triplet");
	// The minimum sits near the dispersive shift difference (g1^2 - g2^2) / Delta_r.
	double const center = -(g1 * g1 - g2 * g2) / delta_r;
	double const span = std::abs(center) + 4.0 * (g1 * g1 + g2 * g2) / std::abs(delta_r) + 1e-9;
	double lo = center - span, hi = center + span;

	// golden-section on a unimodal gap
	double const phi = 0.5 * (std::sqrt(5.0) - 1.0);
	double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
	double f1 = qubit_like_splitting(g1, g2, delta_r, x1);
	double f2 = qubit_like_splitting(g1, g2, delta_r, x2);
	for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(center)); ++it)
	{
		if (f1 < f2)
		{
			hi = x2;
			x2 = x1;
			f2 = f1;
			x1 = hi - phi * (hi - lo);
			f1 = qubit_like_splitting(g1, g2, delta_r, x1);
		}
		else
		{
			lo = x1;
			x1 = x2;
			f1 = f2;
			x2 = lo + phi * (hi - lo);
			f2 = qubit_like_splitting(g1, g2, delta_r, x2);
		}
	}
	double const x = 0.5 * (lo + hi);
	return {qubit_like_splitting(g1, g2, delta_r, x), x};
}

DarkStateReport dark_state_fixed_frequency_check(double g1, double g2, std::span<double const> delta_r)
{
	DarkStateReport report;
	double const gc2 = g1 * g1 + g2 * g2;
	double const max_g = std::max(g1, g2);
	double min_valid = std::numeric_limits<double>::infinity();
	double dmin = std::numeric_limits<double>::infinity(), dmax = -dmin;

	for (double dr : delta_r)
	{
		if (dr == 0.0)
			throw DegenerateInput("Delta_r = 0 in dark-state check");
		EigenTriple const t = diagonalize(OneExcitationModel{g1, g2, dr}.hamiltonian());
		// Qubit-like states are the two with the smaller resonator weight.
		std::array<int, 3> idx{0, 1, 2};
		std::sort(idx.begin(), idx.end(),
			[&](int a, int b) { return t.resonator_weight(a) < t.resonator_weight(b); });
		int const dark = idx[0], bright = idx[1];

		DarkStateRow row;
		row.delta_r = dr;
		row.dark_energy = t.energies(dark);
		row.bright_energy = t.energies(bright);
		row.bright_perturbative = -gc2 / dr;
		row.bright_resonator_weight = t.resonator_weight(bright);
		row.bright_resonator_amplitude = std::sqrt(row.bright_resonator_weight);
		row.exact_splitting = std::abs(row.dark_energy - row.bright_energy);
		report.rows.push_back(row);

		if (std::abs(dr) >= 8.0 * max_g)
		{
			min_valid = std::min(min_valid, std::abs(dr));
			dmin = std::min(dmin, row.dark_energy);
			dmax = std::max(dmax, row.dark_energy);
		}
	}
	if (std::isfinite(min_valid))
	{
		report.dark_variation = dmax - dmin;
		report.tolerance = gc2 > 0 ? 0.01 * gc2 / min_valid : 0.0;
		report.dark_fixed = report.dark_variation <= report.tolerance;
	}
	else
	{
		report.dark_variation = 0.0;
		report.tolerance = 0.0;
		report.dark_fixed = true;
	}
	return report;
}

std::vector<double> transition_frequencies(SystemConfig const & config)
{
	int const k = config.num_qubits();
	Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k + 1, k + 1);
	h(0, 0) = config.resonator.omega_r;
	for (int q = 0; q < k; ++q)
	{
		h(q + 1, q + 1) = qubit_frequency(config.dqds[q]);
		h(0, q + 1) = h(q + 1, 0) = effective_coupling(config, q);
	}
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
	Eigen::VectorXd const e = solver.eigenvalues();
	return {e.data(), e.data() + e.size()};
}

}  // namespace cqed
